"""COBYLA as an ask/tell session.

The optimization loop of an experiment owns the evaluation budget, so the
optimizer is inverted into an ask/tell protocol: ask() yields the next
candidate, tell() hands back its cost. scipy's COBYLA drives the actual
trust-region algorithm (matching the hyper-parameters the benchmark
reproduces); it runs on a worker thread whose objective callback blocks
on a queue until the matching tell arrives. The handoff is strictly
alternating, so the session is deterministic given the tell history.

Parameters are treated as unconstrained: any modular reduction into
[0, 2*pi) happens where vectors are handed to the simulator, never inside
the session, which keeps the trust-region geometry free of artificial
wrap boundaries.
"""

from __future__ import annotations

import queue
import threading

import numpy as np
from scipy.optimize import minimize

from .errors import BadRadii, MismatchedTell, SessionConverged, SessionProtocolError

__all__ = ["CobylaSession", "session_start"]

_CLOSE = object()


class _SessionClosed(Exception):
    pass


class CobylaSession:
    """One derivative-free minimization driven from outside.

    The first dimension+1 asks are COBYLA's initial simplex: x0, then
    x0 + rho_begin along each coordinate axis. The session converges when
    the trust region shrinks below rho_end or max_evals costs were told.
    """

    def __init__(
        self,
        x0,
        rho_begin: float = 1.0,
        rho_end: float = 1e-4,
        max_evals: int = 1000,
    ) -> None:
        if not (rho_begin > rho_end > 0):
            raise BadRadii(f"need rho_begin > rho_end > 0, got {rho_begin}, {rho_end}")
        self.x0 = np.array(x0, dtype=float, copy=True)
        if self.x0.ndim != 1:
            raise ValueError("x0 must be a 1-d vector")
        self.dimension = self.x0.shape[0]
        self.rho_begin = float(rho_begin)
        self.rho_end = float(rho_end)
        self.max_evals = int(max_evals)
        self.status = "running"
        self.n_asks = 0
        self.n_tells = 0
        self.best_cost = np.inf
        self.best_x = self.x0.copy()

        self._pending: np.ndarray | None = None
        self._to_caller: queue.Queue = queue.Queue()
        self._to_worker: queue.Queue = queue.Queue()
        self._thread = threading.Thread(target=self._drive, daemon=True)
        self._thread.start()

    # worker side ---------------------------------------------------------

    def _objective(self, x: np.ndarray) -> float:
        self._to_caller.put(("ask", np.array(x, copy=True)))
        item = self._to_worker.get()
        if item is _CLOSE:
            raise _SessionClosed
        return float(item)

    def _drive(self) -> None:
        try:
            minimize(
                self._objective,
                self.x0,
                method="COBYLA",
                options={
                    "rhobeg": self.rho_begin,
                    "tol": self.rho_end,
                    "maxiter": self.max_evals,
                },
            )
            self._to_caller.put(("done", None))
        except _SessionClosed:
            self._to_caller.put(("closed", None))
        except BaseException as exc:  # surface worker crashes to the caller
            self._to_caller.put(("error", exc))

    # caller side ---------------------------------------------------------

    def ask(self) -> np.ndarray:
        """Next candidate point; raises SessionConverged when finished."""
        if self.status != "running":
            raise SessionConverged("session already converged")
        if self._pending is not None:
            raise SessionProtocolError("ask() called twice without tell()")
        kind, payload = self._to_caller.get()
        if kind == "ask":
            self._pending = payload
            self.n_asks += 1
            return payload.copy()
        if kind == "done":
            self.status = "converged"
            raise SessionConverged("optimizer finished")
        if kind == "error":
            self.status = "failed"
            raise payload
        raise SessionProtocolError(f"unexpected worker message {kind!r}")

    def tell(self, x, cost: float) -> None:
        """Report the cost of the most recent ask."""
        if self._pending is None:
            raise SessionProtocolError("tell() without a pending ask")
        x = np.asarray(x, dtype=float)
        if x.shape != self._pending.shape or not np.array_equal(x, self._pending):
            raise MismatchedTell("tell() point is not the most recent ask")
        cost = float(cost)
        if cost < self.best_cost:
            self.best_cost = cost
            self.best_x = self._pending.copy()
        self._pending = None
        self.n_tells += 1
        self._to_worker.put(cost)

    def close(self) -> None:
        """Terminate the worker thread; safe to call multiple times."""
        if self.status in ("closed", "failed"):
            return
        if self.status == "converged":
            self.status = "closed"
            self._thread.join(timeout=10)
            return
        if self._pending is not None:
            # worker is blocked waiting for a tell: unblock and abort it
            self._pending = None
            self._to_worker.put(_CLOSE)
        else:
            # worker is running toward its next ask (or already finished)
            kind, payload = self._to_caller.get()
            if kind == "ask":
                self._to_worker.put(_CLOSE)
            elif kind == "error":
                self.status = "failed"
                self._thread.join(timeout=10)
                raise payload
            else:  # done / closed
                self.status = "closed"
                self._thread.join(timeout=10)
                return
        # drain until the worker acknowledges
        while True:
            kind, _ = self._to_caller.get()
            if kind in ("closed", "done", "error"):
                break
        self.status = "closed"
        self._thread.join(timeout=10)

    def __enter__(self) -> "CobylaSession":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def session_start(
    x0, rho_begin: float = 1.0, rho_end: float = 1e-4, max_evals: int = 1000
) -> CobylaSession:
    """Open a new session (thin wrapper over the constructor)."""
    return CobylaSession(x0, rho_begin=rho_begin, rho_end=rho_end, max_evals=max_evals)
