"""Filtration enlargement: drift operators and their multiplier factorization.

An enlarged basis couples two filtrations on one space, the enlarged one
refining the base one at every level, plus a horizon stopping time.  For a
base martingale X the drift operator accumulates the enlarged-side
conditional jump means on the closed interval [0, horizon]; subtracting it
restores the martingale property in the enlarged filtration.

The factorization expresses every such drift as phi . [N, X]-compensator
with N the canonical representation process of the base filtration and phi
solved per (tick, enlarged left-limit atom) from the base-conditional
covariance of the jumps of N, taking the minimum-norm solution in its row
space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .basis import (Diagnostics, Filtration, Partition, Process, SampleSpace,
                    StoppingTime, cond_expect, is_stopping_time, validate)
from .calculus import is_adapted, is_martingale
from .errors import FactorsMissing, NotAMartingale, NotAdapted, RefinementBroken, Unsolvable
from .linalg import min_norm_solve, vec_dot
from .rational import ONE, ZERO, Q
from .representation import RepresentationProcess


@dataclass(frozen=True)
class EnlargedBasis:
    space: SampleSpace
    base: Filtration
    enlarged: Filtration
    horizon: StoppingTime

    def alive(self, i: int, k: int) -> bool:
        return self.horizon.geq(i, k)

    def alive_block(self, b: frozenset[int], k: int) -> bool:
        # the horizon is an enlarged-side stopping time, so {T >= k} splits
        # along enlarged left-limit atoms; a block is fully in or out
        return all(self.horizon.geq(i, k) for i in b)


def validate_enlargement(eb: EnlargedBasis) -> Diagnostics:
    errors: list[str] = []
    for diag in (validate(eb.space, eb.base), validate(eb.space, eb.enlarged)):
        errors.extend(diag.errors)
    if not errors:
        pairs = [("at(0)", eb.enlarged.initial, eb.base.initial)]
        for k in range(1, min(eb.base.K, eb.enlarged.K) + 1):
            pairs.append((f"pre({k})", eb.enlarged.pre(k), eb.base.pre(k)))
            pairs.append((f"at({k})", eb.enlarged.at(k), eb.base.at(k)))
        if eb.base.K != eb.enlarged.K:
            errors.append("REFINEMENT_BROKEN: tick counts differ")
        for name, fine, coarse in pairs:
            if not fine.refines(coarse):
                errors.append(f"REFINEMENT_BROKEN({name}): enlargement does not refine the base")
                break
    if not errors and not is_stopping_time(eb.enlarged, eb.horizon):
        errors.append("NOT_A_STOPPING_TIME: horizon not measurable in the enlarged filtration")
    return Diagnostics(ok=not errors, errors=tuple(errors))


def drift_operator(eb: EnlargedBasis, X: Process, require_martingale: bool = True) -> Process:
    """Cumulative enlarged-side conditional jump means on [0, horizon].

    After the horizon the drift is frozen, so X - drift is the stopped
    compensated process.
    """
    if require_martingale and not is_martingale(eb.space, eb.base, X):
        raise NotAMartingale("drift operator expects a base-filtration martingale")
    if not is_adapted(eb.base, X):
        raise NotAdapted()
    n, K = eb.space.n, eb.base.K
    incs = {}
    for k in range(1, K + 1):
        part = eb.enlarged.pre(k)
        cols = []
        for c in range(X.dim):
            cols.append(cond_expect(eb.space, part, [X.jump(i, k)[c] for i in range(n)]))
        incs[k] = cols

    def jump(i, k):
        if not eb.alive(i, k):
            return (ZERO,) * X.dim
        return tuple(incs[k][c][i] for c in range(X.dim))

    return Process.from_jumps(n, K, jump, dim=X.dim)


def tilde(eb: EnlargedBasis, X: Process) -> Process:
    """X minus its drift: an enlarged-filtration martingale on [0, horizon]."""
    return X - drift_operator(eb, X)


@dataclass(frozen=True)
class DriftFactors:
    N: Process    # the canonical representation process of the base filtration
    phi: Process  # enlarged-predictable multiplier row, dim = N.dim

    def phi_dot_jump(self, i: int, k: int) -> Q:
        return vec_dot(self.phi.at(i, k), self.N.jump(i, k))


def _base_cov(rep: RepresentationProcess, k: int, b: frozenset[int]):
    """E[jump(W) jump(W)^T | base left-limit atom] from the child table."""
    kids = rep.children[(k, b)]
    p = rep.probs[(k, b)]
    width = rep.width
    w0 = min(b)
    jumps = {}
    for h, kid in enumerate(kids):
        if kid:
            jumps[h] = rep.W.jump(min(kid), k)
    V = [[ZERO] * width for _ in range(width)]
    for h, jv in jumps.items():
        ph = p[h]
        for a in range(width):
            if jv[a] == ZERO:
                continue
            row = V[a]
            for bb in range(width):
                row[bb] += ph * jv[a] * jv[bb]
    return V


def solve_factors(eb: EnlargedBasis, rep: RepresentationProcess) -> DriftFactors:
    """Minimum-norm multiplier per (tick, enlarged left-limit atom).

    The target is the enlarged-side conditional jump mean of the driving
    process; consistency of the linear system is a structural fact here
    (the target is orthogonal to the covariance kernel), so a failed solve
    is raised as an internal error rather than reported.
    """
    space, base, enlarged = eb.space, eb.base, eb.enlarged
    width = rep.width
    phi_by_atom: dict = {}
    for k in range(1, base.K + 1):
        pre_b = base.pre(k)
        cov_cache: dict = {}
        for c in enlarged.pre(k).blocks:
            if not eb.alive_block(c, k):
                phi_by_atom[(k, c)] = (ZERO,) * width
                continue
            b = pre_b.block_of(min(c))
            if b not in cov_cache:
                cov_cache[b] = _base_cov(rep, k, b)
            V = cov_cache[b]
            mass = space.mass(c)
            gamma = []
            for h in range(width):
                gamma.append(sum((space.prob[i] * rep.W.jump(i, k)[h] for i in c), ZERO) / mass)
            phi = min_norm_solve(V, gamma)
            if phi is None:
                raise Unsolvable("factor system inconsistent", tick=k, atom=sorted(c))
            phi_by_atom[(k, c)] = tuple(phi)

    rows = []
    for i in range(space.n):
        row = [(ZERO,) * width]
        for k in range(1, base.K + 1):
            row.append(phi_by_atom[(k, enlarged.pre(k).block_of(i))])
        rows.append(tuple(row))
    return DriftFactors(N=rep.W, phi=Process(width, tuple(rows)))


def factorization_check(eb: EnlargedBasis, factors: DriftFactors, X: Process):
    """Drift of X == phi . [N, X]-compensator increments, on [0, horizon].

    Returns None or the first mismatching (outcome, tick).
    """
    if factors is None:
        raise FactorsMissing()
    drift = drift_operator(eb, X)
    n, K = eb.space.n, eb.base.K
    for k in range(1, K + 1):
        part = eb.base.pre(k)
        cols = [cond_expect(eb.space, part,
                            [factors.N.jump(i, k)[h] * X.jump(i, k)[0] for i in range(n)])
                for h in range(factors.N.dim)]
        for i in range(n):
            if not eb.alive(i, k):
                continue
            rhs = vec_dot(factors.phi.at(i, k), [cols[h][i] for h in range(factors.N.dim)])
            if drift.jump(i, k)[0] != rhs:
                return (i, k)
    return None


def compensator_transfer_check(eb: EnlargedBasis, factors: Optional[DriftFactors], A: Process):
    """Enlarged-side compensator == base compensator + phi . [N, A]-compensator.

    Checked incrementally on [0, horizon] for a base-adapted A; returns None
    on success or the first mismatching (outcome, tick, component).
    """
    if factors is None:
        raise FactorsMissing()
    if not is_adapted(eb.base, A):
        raise NotAdapted()
    n, K = eb.space.n, eb.base.K
    for k in range(1, K + 1):
        g_part = eb.enlarged.pre(k)
        f_part = eb.base.pre(k)
        for c in range(A.dim):
            lhs = cond_expect(eb.space, g_part, [A.jump(i, k)[c] for i in range(n)])
            base = cond_expect(eb.space, f_part, [A.jump(i, k)[c] for i in range(n)])
            cols = [cond_expect(eb.space, f_part,
                                [factors.N.jump(i, k)[h] * A.jump(i, k)[c] for i in range(n)])
                    for h in range(factors.N.dim)]
            for i in range(n):
                if not eb.alive(i, k):
                    continue
                rhs = base[i] + vec_dot(factors.phi.at(i, k),
                                        [cols[h][i] for h in range(factors.N.dim)])
                if lhs[i] != rhs:
                    return (i, k, c)
    return None


@dataclass(frozen=True)
class SupportReport:
    ok: bool
    tick: Optional[int] = None
    atom: Optional[frozenset] = None
    child: Optional[frozenset] = None


def check_condition_support(eb: EnlargedBasis) -> SupportReport:
    """Child-support equality between base and enlarged left-limit atoms.

    For every alive enlarged atom C inside a base atom B, every child of B
    with positive conditional probability must meet C.  (The reverse
    implication is automatic: outcomes carry positive mass.)
    """
    base, enlarged = eb.base, eb.enlarged
    for k in range(1, base.K + 1):
        at = base.at(k)
        pre_b = base.pre(k)
        for c in enlarged.pre(k).blocks:
            if not eb.alive_block(c, k):
                continue
            b = pre_b.block_of(min(c))
            for kid in at.children_of(b):
                if not (kid & c):
                    return SupportReport(ok=False, tick=k, atom=c, child=kid)
    return SupportReport(ok=True)


def check_positivity(eb: EnlargedBasis, factors: DriftFactors):
    """1 + phi.jump(N) > 0 at every (outcome, tick <= horizon).

    Returns None or the first violating (outcome, tick).
    """
    if factors is None:
        raise FactorsMissing()
    for i in range(eb.space.n):
        for k in range(1, eb.base.K + 1):
            if not eb.alive(i, k):
                continue
            if ONE + factors.phi_dot_jump(i, k) <= ZERO:
                return (i, k)
    return None
