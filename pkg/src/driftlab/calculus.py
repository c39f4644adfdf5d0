"""Discrete stochastic calculus relative to a filtration with left limits.

Martingality means E[increment | pre-tick sigma-algebra] = 0 at every tick,
exactly.  On a finite grid every local martingale is a martingale (the
integrability conditions hold automatically), so no localization appears
anywhere; this is reported rather than tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .basis import Filtration, Partition, Process, SampleSpace, StoppingTime, cond_expect
from .errors import DimensionMismatch, NotAdapted, NotPredictable
from .rational import ONE, ZERO, Q


def is_adapted(filt: Filtration, X: Process) -> bool:
    for k in range(filt.K + 1):
        part = filt.at(k)
        if not part.is_measurable([X.at(i, k) for i in range(X.n)]):
            return False
    return True


def is_predictable(filt: Filtration, X: Process) -> bool:
    """Value at tick k is measurable for the left-limit algebra pre(k)."""
    for k in range(filt.K + 1):
        part = filt.pre(k)
        if not part.is_measurable([X.at(i, k) for i in range(X.n)]):
            return False
    return True


def _require_adapted(filt: Filtration, X: Process) -> None:
    if not is_adapted(filt, X):
        raise NotAdapted()


def martingale_violation(space: SampleSpace, filt: Filtration, X: Process,
                         horizon: Optional[StoppingTime] = None):
    """First (tick, atom, component) with a nonzero conditional increment, else None.

    With a horizon, ticks after it are ignored outcome-wise (the process is
    examined as stopped at the horizon).
    """
    _require_adapted(filt, X)
    for k in range(1, filt.K + 1):
        part = filt.pre(k)
        for b in part.blocks:
            if horizon is not None and not all(horizon.geq(i, k) for i in b):
                # stopping times are measurable at pre(k); a block is in or out
                continue
            mass = space.mass(b)
            for c in range(X.dim):
                tot = sum((space.prob[i] * X.jump(i, k)[c] for i in b), ZERO)
                if tot / mass != ZERO:
                    return (k, b, c)
    return None


def is_martingale(space: SampleSpace, filt: Filtration, X: Process,
                  horizon: Optional[StoppingTime] = None) -> bool:
    return martingale_violation(space, filt, X, horizon) is None


def compensator(space: SampleSpace, filt: Filtration, A: Process) -> Process:
    """Predictable dual projection: cumulative E[jump | pre(k)], starting at 0."""
    _require_adapted(filt, A)
    jumps_cache = {}
    for k in range(1, filt.K + 1):
        part = filt.pre(k)
        cols = []
        for c in range(A.dim):
            cols.append(cond_expect(space, part, [A.jump(i, k)[c] for i in range(A.n)]))
        jumps_cache[k] = cols
    return Process.from_jumps(
        A.n, filt.K,
        lambda i, k: tuple(jumps_cache[k][c][i] for c in range(A.dim)),
        dim=A.dim)


@dataclass(frozen=True)
class Decomposition:
    start: Process          # constant-in-time initial value
    martingale_part: Process
    drift_part: Process     # predictable, starts at 0


def canonical_decomposition(space: SampleSpace, filt: Filtration, X: Process) -> Decomposition:
    """X = X_0 + M + V with M a martingale null at 0 and V predictable null at 0."""
    _require_adapted(filt, X)
    V = compensator(space, filt, X)
    start = Process(X.dim, tuple(tuple(row[0] for _ in row) for row in X.values))
    M = X - start - V
    return Decomposition(start=start, martingale_part=M, drift_part=V)


def bracket(X: Process, Y: Process) -> Process:
    """Quadratic covariation; for vector inputs the result is row-major,
    component i*Y.dim + j holding [X_i, Y_j]."""
    dim = X.dim * Y.dim
    ticks = X.ticks

    def jmp(i, k):
        jx, jy = X.jump(i, k), Y.jump(i, k)
        return tuple(a * b for a in jx for b in jy)

    return Process.from_jumps(X.n, ticks, jmp, dim=dim)


def comp_bracket(space: SampleSpace, filt: Filtration, X: Process, Y: Process) -> Process:
    """Compensator of the quadratic covariation (the oblique bracket here)."""
    return compensator(space, filt, bracket(X, Y))


def stoch_integral(filt: Filtration, H: Process, X: Process) -> Process:
    """(H . X)_k = sum over j <= k of <H_j, jump_j(X)>; H must be predictable."""
    if H.dim != X.dim:
        raise DimensionMismatch("integrand and integrator dims differ")
    if not is_predictable(filt, H):
        raise NotPredictable()
    return Process.from_jumps(
        X.n, X.ticks,
        lambda i, k: sum((a * b for a, b in zip(H.at(i, k), X.jump(i, k))), ZERO))


def doleans_exp(X: Process) -> Process:
    """Stochastic exponential: product of (1 + jump) along the path."""
    if X.dim != 1:
        raise DimensionMismatch("stochastic exponential is scalar")
    rows = []
    for i in range(X.n):
        cur = ONE
        row = [(cur,)]
        for k in range(1, X.ticks + 1):
            cur = cur * (ONE + X.jump(i, k)[0])
            row.append((cur,))
        rows.append(tuple(row))
    return Process(1, tuple(rows))


def stop(X: Process, T: StoppingTime) -> Process:
    """Freeze the path at the stopping time."""
    rows = []
    for i in range(X.n):
        v = T.values[i]
        row = [X.at(i, min(k, v) if v is not None else k) for k in range(X.ticks + 1)]
        rows.append(tuple(row))
    return Process(X.dim, tuple(rows))


def pointwise_mul(Z: Process, S: Process) -> Process:
    """Scalar process times a (possibly vector) process, path by path."""
    if Z.dim != 1:
        raise DimensionMismatch("left factor must be scalar")
    rows = []
    for i in range(S.n):
        row = []
        for k in range(S.ticks + 1):
            z = Z.at(i, k)[0]
            row.append(tuple(z * s for s in S.at(i, k)))
        rows.append(tuple(row))
    return Process(S.dim, tuple(rows))
