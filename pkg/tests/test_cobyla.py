import numpy as np
import pytest
from scipy.optimize import minimize

from maxcutbench.cobyla import CobylaSession, session_start
from maxcutbench.errors import (
    BadRadii,
    MismatchedTell,
    SessionConverged,
    SessionProtocolError,
)


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x * x))


def reference_trace(fun, x0, maxiter: int) -> list[np.ndarray]:
    """Evaluation order of a plain scipy COBYLA minimize() call."""
    trace: list[np.ndarray] = []

    def wrapped(x):
        trace.append(np.array(x, copy=True))
        return fun(x)

    minimize(
        wrapped,
        x0,
        method="COBYLA",
        options={"rhobeg": 1.0, "tol": 1e-4, "maxiter": maxiter},
    )
    return trace


def drive(session: CobylaSession, fun, max_steps: int) -> list[np.ndarray]:
    asks = []
    for _ in range(max_steps):
        try:
            x = session.ask()
        except SessionConverged:
            break
        asks.append(x)
        session.tell(x, fun(x))
    session.close()
    return asks


class TestProtocol:
    def test_initial_simplex_asks(self):
        with session_start(np.zeros(2), rho_begin=1.0) as session:
            first = [session.ask() for _ in [0]]
            session.tell(first[0], 0.0)
            second = session.ask()
            session.tell(second, 1.0)
            third = session.ask()
            session.tell(third, 1.0)
        assert np.array_equal(first[0], [0.0, 0.0])
        assert np.array_equal(second, [1.0, 0.0])
        assert np.array_equal(third, [0.0, 1.0])

    def test_dimension_one_has_two_initial_asks(self):
        with session_start(np.array([0.25])) as session:
            a = session.ask()
            session.tell(a, 1.0)
            b = session.ask()
            session.tell(b, 2.0)
        assert np.array_equal(a, [0.25])
        assert np.array_equal(b, [1.25])

    def test_bad_radii(self):
        with pytest.raises(BadRadii):
            CobylaSession(np.zeros(2), rho_begin=1e-4, rho_end=1e-4)
        with pytest.raises(BadRadii):
            CobylaSession(np.zeros(2), rho_begin=0.5, rho_end=1.0)

    def test_double_ask_rejected(self):
        with session_start(np.zeros(2)) as session:
            session.ask()
            with pytest.raises(SessionProtocolError):
                session.ask()

    def test_tell_without_ask_rejected(self):
        with session_start(np.zeros(2)) as session:
            with pytest.raises(SessionProtocolError):
                session.tell(np.zeros(2), 0.0)

    def test_mismatched_tell_rejected(self):
        with session_start(np.zeros(2)) as session:
            session.ask()
            with pytest.raises(MismatchedTell):
                session.tell(np.array([9.0, 9.0]), 0.0)

    def test_ask_after_convergence_raises(self):
        session = session_start(np.zeros(2), max_evals=3)
        for _ in range(3):
            x = session.ask()
            session.tell(x, sphere(x))
        with pytest.raises(SessionConverged):
            session.ask()
        assert session.status == "converged"
        session.close()


class TestAgainstReference:
    def test_trace_matches_reference_for_30_steps(self):
        reference = reference_trace(sphere, np.full(4, 0.5), maxiter=30)
        session = session_start(np.full(4, 0.5), max_evals=30)
        asks = drive(session, sphere, 30)
        assert len(asks) == len(reference) == 30
        for ours, ref in zip(asks, reference):
            assert np.array_equal(ours, ref)

    def test_quadratic_1d_converges_within_60_evals(self):
        session = session_start(np.zeros(1), max_evals=60)
        best = (np.inf, None)
        for _ in range(60):
            try:
                x = session.ask()
            except SessionConverged:
                break
            cost = (x[0] - 1.0) ** 2
            best = min(best, (cost, x[0]), key=lambda t: t[0])
            session.tell(x, cost)
        session.close()
        assert abs(best[1] - 1.0) < 1e-2

    def test_sphere_5d_converges_within_300_evals(self):
        session = session_start(np.ones(5), max_evals=300)
        best = np.inf
        for _ in range(300):
            try:
                x = session.ask()
            except SessionConverged:
                break
            cost = sphere(x)
            best = min(best, cost)
            session.tell(x, cost)
        session.close()
        assert best < 1e-3

    def test_constant_cost_converges_cleanly(self):
        session = session_start(np.zeros(4), max_evals=10_000)
        steps = 0
        for _ in range(10_000):
            try:
                x = session.ask()
            except SessionConverged:
                break
            session.tell(x, 1.0)
            steps += 1
        session.close()
        assert session.status in ("converged", "closed")
        assert steps < 10_000  # rho shrank to rho_end without spending it all


class TestDeterminism:
    def test_identical_tell_sequences_identical_asks(self):
        def run():
            session = session_start(np.full(3, 0.1), max_evals=40)
            seq = drive(session, sphere, 40)
            return np.array(seq)

        assert np.array_equal(run(), run())

    def test_close_midway_leaves_no_stuck_thread(self):
        session = session_start(np.zeros(3), max_evals=1000)
        for _ in range(5):
            x = session.ask()
            session.tell(x, sphere(x))
        session.close()
        assert session.status == "closed"
        assert not session._thread.is_alive()

    def test_close_with_pending_ask(self):
        session = session_start(np.zeros(3), max_evals=1000)
        session.ask()
        session.close()
        assert not session._thread.is_alive()
