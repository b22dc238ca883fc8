"""The three benchmarked algorithms under one budget contract.

All solvers consume objective evaluations from a shared budget of
n_evals = n_shots * n_iter and report a best-so-far trajectory with one
checkpoint per n_shots evaluations, so checkpoint i of any two runs
compares the algorithms at exactly the same resource count.

* CVaR-VQE: per iteration, sample n_shots bitstrings from the circuit at
  the current parameters, track the best objective seen, hand the
  negated CVaR of the sample to the COBYLA session, and ask for the next
  parameters. If the optimizer converges early, the remaining checkpoints
  carry the best value forward with their `evaluated` flag cleared.
* Sampling with replacement: i.i.d. uniform bitstrings.
* Greedy local search: start from a single circuit sample (1 evaluation),
  sweep all N single-bit flips (N evaluations, even though the deltas are
  computed incrementally), move to the best strictly improving neighbor,
  and draw a fresh circuit start on local optima or when an accepted
  state was already visited during this run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cobyla import CobylaSession
from .errors import BadGamma, EmptySample, LengthMismatch, SessionConverged
from .instances import MaxCutInstance
from .mps import CircuitLayout, apply_circuit, sample, wrap_angles

__all__ = [
    "Budget",
    "InitialPoint",
    "RunTrajectory",
    "cvar_cost",
    "draw_initial_point",
    "run_vqe",
    "run_sampling",
    "run_greedy",
]

ALGORITHMS = ("vqe", "sampling", "greedy")


@dataclass(frozen=True)
class Budget:
    """Evaluation budget: n_evals = n_shots * n_iter."""

    n_shots: int = 1000
    n_iter: int = 1000

    def __post_init__(self) -> None:
        if self.n_shots < 1 or self.n_iter < 1:
            raise ValueError("n_shots and n_iter must be positive")

    @property
    def n_evals(self) -> int:
        return self.n_shots * self.n_iter


@dataclass(frozen=True, eq=False)
class InitialPoint:
    """Circuit parameters shared by a VQE run and its greedy twin."""

    values: np.ndarray  # shape (2N,), entries in [0, 2*pi)
    seed: int = 0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("initial point must be a 1-d vector")
        if values.size and (values.min() < 0.0 or values.max() >= 2.0 * np.pi):
            raise ValueError("initial point entries must lie in [0, 2*pi)")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@dataclass(eq=False)
class RunTrajectory:
    """Best-so-far normalized objective at each resource checkpoint."""

    algorithm: str
    instance_id: int
    run_id: int
    n_shots: int
    n_evals: np.ndarray = field(repr=False)  # (n_iter,) nominal i*n_shots
    best_values: np.ndarray = field(repr=False)  # (n_iter,) non-decreasing
    evaluated: np.ndarray = field(repr=False)  # (n_iter,) bool
    best_assignment: np.ndarray = field(repr=False)  # (N,) uint8

    @property
    def n_checkpoints(self) -> int:
        return len(self.best_values)

    @property
    def final_value(self) -> float:
        return float(self.best_values[-1])


def cvar_cost(objective_values, gamma: float) -> float:
    """Mean of the top ceil(gamma * count) values (for maximization).

    gamma = 1 recovers the sample mean; ceil(gamma * count) = 1 recovers
    the sample maximum.
    """
    values = np.asarray(objective_values, dtype=float)
    if values.size == 0:
        raise EmptySample("CVaR of an empty sample")
    if not (0.0 < gamma <= 1.0):
        raise BadGamma(f"gamma must lie in (0, 1], got {gamma}")
    k = math.ceil(gamma * values.size)
    top = np.sort(values)[::-1][:k]
    return float(top.mean())


def draw_initial_point(
    n_qubits: int, rng: np.random.Generator, seed: int = 0
) -> InitialPoint:
    """i.i.d. uniform parameters on [0, 2*pi), length 2 * n_qubits."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    values = rng.uniform(0.0, 2.0 * np.pi, size=2 * n_qubits)
    return InitialPoint(values=values, seed=seed)


def _check_layout(instance: MaxCutInstance, layout: CircuitLayout) -> None:
    if layout.n_qubits != instance.n_variables:
        raise LengthMismatch(
            f"layout has {layout.n_qubits} qubits, instance has "
            f"{instance.n_variables} variables"
        )


def run_vqe(
    instance: MaxCutInstance,
    layout: CircuitLayout,
    init: InitialPoint,
    budget: Budget,
    gamma: float,
    rng: np.random.Generator,
) -> RunTrajectory:
    """CVaR-VQE with a COBYLA session; one checkpoint per iteration."""
    _check_layout(instance, layout)
    if not (0.0 < gamma <= 1.0):
        raise BadGamma(f"gamma must lie in (0, 1], got {gamma}")
    n_iter, n_shots = budget.n_iter, budget.n_shots
    best = -np.inf
    best_bits = np.zeros(instance.n_variables, dtype=np.uint8)
    cp_best = np.empty(n_iter)
    evaluated = np.zeros(n_iter, dtype=bool)

    session = CobylaSession(init.values, max_evals=n_iter)
    done = 0
    try:
        for it in range(n_iter):
            try:
                theta = session.ask()
            except SessionConverged:
                break
            state = apply_circuit(layout, wrap_angles(theta))
            shots = sample(state, n_shots, rng)
            values = instance.batch_normalized_objective(shots)
            top = float(values.max())
            if top > best:
                best = top
                best_bits = shots[int(np.argmax(values))].copy()
            cp_best[it] = best
            evaluated[it] = True
            session.tell(theta, -cvar_cost(values, gamma))
            done = it + 1
    finally:
        session.close()

    assert done >= 1, "the optimizer cannot converge before its first ask"
    cp_best[done:] = best  # flat extension after early convergence
    return RunTrajectory(
        algorithm="vqe",
        instance_id=instance.instance_id,
        run_id=-1,
        n_shots=n_shots,
        n_evals=np.arange(1, n_iter + 1, dtype=np.int64) * n_shots,
        best_values=cp_best,
        evaluated=evaluated,
        best_assignment=best_bits,
    )


def run_sampling(
    instance: MaxCutInstance, budget: Budget, rng: np.random.Generator
) -> RunTrajectory:
    """Uniform i.i.d. bitstrings with replacement."""
    n = instance.n_variables
    n_iter, n_shots = budget.n_iter, budget.n_shots
    best = -np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    cp_best = np.empty(n_iter)
    for it in range(n_iter):
        draws = rng.integers(0, 2, size=(n_shots, n), dtype=np.uint8)
        values = instance.batch_normalized_objective(draws)
        top = float(values.max())
        if top > best:
            best = top
            best_bits = draws[int(np.argmax(values))].copy()
        cp_best[it] = best
    return RunTrajectory(
        algorithm="sampling",
        instance_id=instance.instance_id,
        run_id=-1,
        n_shots=n_shots,
        n_evals=np.arange(1, n_iter + 1, dtype=np.int64) * n_shots,
        best_values=cp_best,
        evaluated=np.ones(n_iter, dtype=bool),
        best_assignment=best_bits,
    )


def run_greedy(
    instance: MaxCutInstance,
    layout: CircuitLayout,
    init: InitialPoint,
    budget: Budget,
    rng: np.random.Generator,
    restart_block: int = 256,
    chain_log: list | None = None,
) -> RunTrajectory:
    """Greedy single-flip local search seeded from the circuit.

    Evaluation accounting follows the benchmark convention: each restart
    draw costs 1 evaluation and each flip sweep costs N evaluations (the
    flips are probed in variable order, which fixes how a checkpoint
    boundary falling inside a sweep splits it).

    When `chain_log` is a list, it receives (event, bits, value) tuples
    with events "start", "accept", "local_optimum", and "revisited";
    states are copies, so the log is safe to inspect afterwards.
    """
    _check_layout(instance, layout)
    graph = instance.graph
    n = graph.n_variables
    gw = instance.gw_value
    n_iter, n_shots = budget.n_iter, budget.n_shots
    total = budget.n_evals
    adjacency = graph.adjacency()

    state = apply_circuit(layout, wrap_angles(init.values))
    block = np.zeros((0, n), dtype=np.uint8)
    block_values = np.zeros(0)
    block_keys: list[bytes] = []
    block_next = 0

    def refill_block() -> None:
        # the block size is fixed: it sets how sampling consumes the
        # stream, so it is part of the run's determinism contract
        nonlocal block, block_values, block_keys, block_next
        block = sample(state, restart_block, rng)
        block_values = instance.batch_normalized_objective(block)
        block_keys = [row.tobytes() for row in block]
        block_next = 0

    best = -np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    cp_best = np.empty(n_iter)
    filled = 0
    n_evals = 0

    visited: set[bytes] = set()
    current: np.ndarray | None = None
    cur_value = 0.0
    spins = np.empty(graph.node_count)

    while n_evals < total:
        if current is None:
            # consume draws until one leaves the visited set (each draw
            # costs 1 evaluation whether or not it starts a chain)
            if block_next >= len(block):
                refill_block()
            stop = min(len(block), block_next + (total - n_evals))
            accept_at = -1
            for idx in range(block_next, stop):
                if block_keys[idx] not in visited:
                    accept_at = idx
                    break
            consumed = (accept_at + 1 - block_next) if accept_at >= 0 else stop - block_next
            values = block_values[block_next : block_next + consumed]
            boundary_lo = n_evals // n_shots + 1
            boundary_hi = (n_evals + consumed) // n_shots
            if boundary_lo <= boundary_hi:
                prefix_max = np.maximum.accumulate(values)
                for b in range(boundary_lo, boundary_hi + 1):
                    j = b * n_shots - n_evals
                    cp_best[filled] = max(best, float(prefix_max[j - 1]))
                    filled += 1
            top = float(values.max())
            if top > best:
                best = top
                best_bits = block[block_next + int(np.argmax(values))].copy()
            n_evals += consumed
            block_next += consumed
            if accept_at >= 0:
                visited.add(block_keys[accept_at])
                current = block[accept_at]
                cur_value = float(block_values[accept_at])
                if chain_log is not None:
                    chain_log.append(("start", current.copy(), cur_value))
            continue

        # probe all N single-bit flips of the current state
        spins[0] = 1.0
        spins[1:] = 1.0 - 2.0 * current
        deltas = (spins * (adjacency @ spins))[1:] / gw
        flip_values = cur_value + deltas

        k = min(n, total - n_evals)  # the budget may truncate the sweep
        boundary_lo = n_evals // n_shots + 1
        boundary_hi = (n_evals + k) // n_shots
        if boundary_lo <= boundary_hi:
            prefix_max = np.maximum.accumulate(flip_values[:k])
            for b in range(boundary_lo, boundary_hi + 1):
                j = b * n_shots - n_evals
                cp_best[filled] = max(best, float(prefix_max[j - 1]))
                filled += 1
        sweep_top = float(flip_values[:k].max())
        if sweep_top > best:
            best = sweep_top
            var = int(np.argmax(flip_values[:k]))
            best_bits = current.copy()
            best_bits[var] ^= 1
        n_evals += k
        if k < n:
            break  # budget exhausted mid-sweep

        j_star = int(np.argmax(flip_values))  # ties: lowest variable index
        if flip_values[j_star] > cur_value:
            nxt = current.copy()
            nxt[j_star] ^= 1
            key = nxt.tobytes()
            if key in visited:
                if chain_log is not None:
                    chain_log.append(("revisited", nxt.copy(), float(flip_values[j_star])))
                current = None  # reached a previously visited state
            else:
                visited.add(key)
                current = nxt
                cur_value = float(flip_values[j_star])
                if chain_log is not None:
                    chain_log.append(("accept", current.copy(), cur_value))
        else:
            if chain_log is not None:
                chain_log.append(("local_optimum", current.copy(), cur_value))
            current = None  # 1-flip local optimum

    assert filled == n_iter, f"checkpoint bookkeeping drifted: {filled} != {n_iter}"
    return RunTrajectory(
        algorithm="greedy",
        instance_id=instance.instance_id,
        run_id=-1,
        n_shots=n_shots,
        n_evals=np.arange(1, n_iter + 1, dtype=np.int64) * n_shots,
        best_values=cp_best,
        evaluated=np.ones(n_iter, dtype=bool),
        best_assignment=best_bits,
    )
