"""Structure conditions, connectors, and the enlargement viability verdict.

A connector for an asset family S on a filtered basis is a scalar process D
with D_0 = 0 that is a martingale up to the horizon, has every jump
strictly below one there, and whose jump covariance against the martingale
part of each component reproduces that component's compensator increment.
The stochastic exponential of -D is then a strictly positive deflator
making D-deflated prices martingales, and conversely.

On an enlarged basis the same machinery transfers: given the drift
multiplier row phi and a base connector D, the enlarged connector is an
integral K . (W - drift(W)) whose jumps equal
(jump(D) + phi.jump(W)) / (1 + phi.jump(W)) pointwise.  The verdict that
every base-viable asset stays viable in the enlarged filtration reduces to
a child-support condition between the two filtrations; when it fails, a
single localized component of the driving process already loses viability,
and a witness asset with an oracle infeasibility certificate is produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .basis import Filtration, Process, SampleSpace, StoppingTime, cond_expect
from .calculus import doleans_exp, is_adapted, martingale_violation, stoch_integral, stop
from .enlargement import (DriftFactors, EnlargedBasis, SupportReport, _base_cov,
                          check_condition_support, check_positivity, solve_factors, tilde)
from .errors import ConnectorInvalid, SupportConditionFailed, Unsolvable
from .linalg import mat_vec, min_norm_solve, vec_dot
from .linfeas import INFEASIBLE, solve_lp
from .oracle import lp_deflator_oracle
from .rational import ONE, ZERO, Q
from .representation import RepresentationProcess, build_representation, represent


def _alive_block(horizon: StoppingTime, b, k: int) -> bool:
    return all(horizon.geq(i, k) for i in b)


def _atom_jump_table(space: SampleSpace, filt: Filtration, S: Process, b, k: int):
    """(children, conditional probs, jump value rows) of S at a left-limit atom."""
    kids = filt.at(k).children_of(b)
    mass = space.mass(b)
    p = [space.mass(kid) / mass for kid in kids]
    jumps = [S.jump(min(kid), k) for kid in kids]
    return kids, p, jumps


def is_structure_connector(space: SampleSpace, filt: Filtration, S: Process, D: Process,
                           horizon: Optional[StoppingTime] = None) -> Optional[dict]:
    """None if D is a connector for S on [0, horizon], else a violation record."""
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    if D.dim != 1:
        return {"reason": "not-scalar"}
    if not is_adapted(filt, D):
        return {"reason": "not-adapted"}
    for i in range(space.n):
        if D.at(i, 0)[0] != ZERO:
            return {"reason": "nonzero-start", "outcome": i}
    bad = martingale_violation(space, filt, D, horizon)
    if bad is not None:
        return {"reason": "not-martingale", "tick": bad[0], "atom": sorted(bad[1])}
    for i in range(space.n):
        for k in range(1, filt.K + 1):
            if horizon.geq(i, k) and D.jump(i, k)[0] >= ONE:
                return {"reason": "jump-at-least-one", "outcome": i, "tick": k}
    for k in range(1, filt.K + 1):
        for b in filt.pre(k).blocks:
            if not _alive_block(horizon, b, k):
                continue
            _, p, s_jumps = _atom_jump_table(space, filt, S, b, k)
            d_jumps = [D.jump(min(kid), k)[0] for kid in filt.at(k).children_of(b)]
            for c in range(S.dim):
                mean = sum((ph * sj[c] for ph, sj in zip(p, s_jumps)), ZERO)
                cross = sum((ph * dj * sj[c] for ph, dj, sj in zip(p, d_jumps, s_jumps)), ZERO)
                if cross != mean:
                    return {"reason": "identity-failed", "tick": k,
                            "atom": sorted(b), "component": c}
    return None


@dataclass
class ConnectorSearch:
    """Outcome of the connector search: the process, or the atom that blocks one."""
    connector: Optional[Process]
    tick: Optional[int] = None
    atom: Optional[tuple] = None

    @property
    def found(self) -> bool:
        return self.connector is not None


def find_structure_connector(space: SampleSpace, filt: Filtration, S: Process,
                             horizon: Optional[StoppingTime] = None) -> ConnectorSearch:
    """Search for a connector for S, or report the first atom ruling one out.

    The defining constraints split over (tick, left-limit atom), so each
    atom gets its own small program over the jump values on its children:
    maximize the slack below one subject to zero conditional mean and the
    compensator-matching equalities.  A positive optimal slack on every
    alive atom assembles into a connector; anything else rules one out.
    """
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    jump_of: dict = {}
    for k in range(1, filt.K + 1):
        for b in filt.pre(k).blocks:
            if not _alive_block(horizon, b, k):
                continue
            kids, p, s_jumps = _atom_jump_table(space, filt, S, b, k)
            m = len(kids)
            means = [sum((ph * sj[c] for ph, sj in zip(p, s_jumps)), ZERO)
                     for c in range(S.dim)]
            # columns: d+ (m), d- (m), gap; maximize the gap
            ncol = 2 * m + 1
            A_eq = [[ZERO] * ncol]
            b_eq = [ZERO]
            for h in range(m):
                A_eq[0][h] = p[h]
                A_eq[0][m + h] = -p[h]
            for c in range(S.dim):
                row = [ZERO] * ncol
                for h in range(m):
                    w = p[h] * (s_jumps[h][c] - means[c])
                    row[h] = w
                    row[m + h] = -w
                A_eq.append(row)
                b_eq.append(means[c])
            A_ub, b_ub = [], []
            for h in range(m):
                row = [ZERO] * ncol
                row[h] = ONE
                row[m + h] = -ONE
                row[2 * m] = ONE
                A_ub.append(row)
                b_ub.append(ONE)
            cap = [ZERO] * ncol
            cap[2 * m] = ONE
            A_ub.append(cap)
            b_ub.append(ONE)
            cost = [ZERO] * ncol
            cost[2 * m] = ONE
            res = solve_lp(cost, A_eq, b_eq, A_ub, b_ub)
            if res.status == INFEASIBLE or res.value <= ZERO:
                return ConnectorSearch(connector=None, tick=k, atom=tuple(sorted(b)))
            for h, kid in enumerate(kids):
                jump_of[(k, kid)] = res.x[h] - res.x[m + h]

    def jumps(i: int, k: int):
        if not horizon.geq(i, k):
            return (ZERO,)
        return (jump_of[(k, filt.at(k).block_of(i))],)

    D = Process.from_jumps(space.n, filt.K, jumps)
    assert is_structure_connector(space, filt, S, D, horizon) is None
    return ConnectorSearch(connector=D)


def deflator_from_connector(space: SampleSpace, filt: Filtration, D: Process,
                            horizon: Optional[StoppingTime] = None) -> Process:
    """The stochastic exponential of -D stopped at the horizon.

    Raises ConnectorInvalid unless D starts at zero, is a martingale up to
    the horizon, and keeps every jump there strictly below one; those are
    exactly the properties that make the result a positive deflator.
    """
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    if D.dim != 1:
        raise ConnectorInvalid("connector must be scalar")
    if not is_adapted(filt, D):
        raise ConnectorInvalid("connector must be adapted")
    for i in range(space.n):
        if D.at(i, 0)[0] != ZERO:
            raise ConnectorInvalid("connector must start at zero", outcome=i)
    bad = martingale_violation(space, filt, D, horizon)
    if bad is not None:
        raise ConnectorInvalid("connector must be a martingale up to the horizon",
                               tick=bad[0])
    for i in range(space.n):
        for k in range(1, filt.K + 1):
            if horizon.geq(i, k) and D.jump(i, k)[0] >= ONE:
                raise ConnectorInvalid("connector jump reaches one",
                                       outcome=i, tick=k)
    return doleans_exp(-stop(D, horizon))


def solve_accessible_K(eb: EnlargedBasis, rep: RepresentationProcess,
                       factors: DriftFactors, D: Optional[Process] = None) -> Process:
    """Enlarged-predictable integrand K with (K . (W - drift W)) matching jumps.

    Requires the child-support condition; under it the centered enlarged
    covariance of the driving jumps has the same row space as the base one,
    so the minimum-norm solve below is always consistent.  D, when given,
    must be a base connector (a base martingale); its representation
    coefficients shift the target.
    """
    support = check_condition_support(eb)
    if not support.ok:
        raise SupportConditionFailed(tick=support.tick, atom=sorted(support.atom),
                                     child=sorted(support.child))
    space, base, enlarged = eb.space, eb.base, eb.enlarged
    width = rep.width
    HD = represent(rep, D) if D is not None else None

    value_at: dict = {}
    for k in range(1, base.K + 1):
        pre_b = base.pre(k)
        cov_cache: dict = {}
        for cblk in enlarged.pre(k).blocks:
            if not eb.alive_block(cblk, k):
                value_at[(k, cblk)] = (ZERO,) * width
                continue
            b = pre_b.block_of(min(cblk))
            if b not in cov_cache:
                cov_cache[b] = _base_cov(rep, k, b)
            kids = [kid for kid in rep.children[(k, b)] if kid]
            mass = space.mass(cblk)
            pbar = [space.mass(kid & cblk) / mass for kid in kids]
            w_rows = [rep.W.jump(min(kid), k) for kid in kids]
            gamma = [sum((pb * w[h] for pb, w in zip(pbar, w_rows)), ZERO)
                     for h in range(width)]
            Vt = [[ZERO] * width for _ in range(width)]
            for pb, w in zip(pbar, w_rows):
                centered = [w[h] - gamma[h] for h in range(width)]
                for a in range(width):
                    if centered[a] == ZERO:
                        continue
                    row = Vt[a]
                    for bb in range(width):
                        row[bb] += pb * centered[a] * centered[bb]
            phi = factors.phi.at(min(cblk), k)
            x = list(phi)
            if HD is not None:
                hd = HD.at(min(cblk), k)
                x = [xi + hi for xi, hi in zip(x, hd)]
            target = mat_vec(cov_cache[b], x)
            sol = min_norm_solve(Vt, target)
            if sol is None:
                raise Unsolvable("integrand system inconsistent", tick=k,
                                 atom=sorted(cblk))
            value_at[(k, cblk)] = tuple(sol)

    rows = []
    for i in range(space.n):
        row = [(ZERO,) * width]
        for k in range(1, base.K + 1):
            row.append(value_at[(k, enlarged.pre(k).block_of(i))])
        rows.append(tuple(row))
    return Process(width, tuple(rows))


def enlarged_connector(eb: EnlargedBasis, rep: RepresentationProcess,
                       factors: DriftFactors, D: Optional[Process] = None):
    """(K, Y): the integrand from solve_accessible_K and Y = K . (W - drift W)."""
    K = solve_accessible_K(eb, rep, factors, D)
    Y = stoch_integral(eb.enlarged, K, tilde(eb, rep.W))
    return K, Y


def jump_identity_check(eb: EnlargedBasis, rep: RepresentationProcess,
                        factors: DriftFactors, K: Process,
                        D: Optional[Process] = None) -> Optional[tuple]:
    """Exact pointwise identity for the connector jumps on [0, horizon].

    jump(K . (W - drift W)) == (jump(D) + phi.jump(W)) / (1 + phi.jump(W));
    returns None or the first failing (outcome, tick).
    """
    Wt = tilde(eb, rep.W)
    for i in range(eb.space.n):
        for k in range(1, eb.base.K + 1):
            if not eb.alive(i, k):
                continue
            lhs = vec_dot(K.at(i, k), Wt.jump(i, k))
            dphi = factors.phi_dot_jump(i, k)
            dd = D.jump(i, k)[0] if D is not None else ZERO
            if lhs * (ONE + dphi) != dd + dphi:
                return (i, k)
    return None


def g_connector(eb: EnlargedBasis, rep: RepresentationProcess, factors: DriftFactors,
                S: Process, D: Process) -> Process:
    """Transfer a base connector D for S into an enlarged-filtration one.

    Builds Y = K . (W - drift W), then verifies exactly on [0, horizon]
    that every jump of Y stays below one and that the jump covariance of Y
    against the enlarged martingale part of S equals the base-side
    covariance of D plus the multiplier-weighted covariance of the driving
    process, per component.  Raises ConnectorInvalid on any mismatch
    (which would contradict the construction).
    """
    K, Y = enlarged_connector(eb, rep, factors, D)
    space, base, enlarged = eb.space, eb.base, eb.enlarged
    n = space.n
    for i in range(n):
        for k in range(1, base.K + 1):
            if eb.alive(i, k) and Y.jump(i, k)[0] >= ONE:
                raise ConnectorInvalid("transferred connector jump reaches one",
                                       outcome=i, tick=k)
    for k in range(1, base.K + 1):
        g_part = enlarged.pre(k)
        f_part = base.pre(k)
        y_jumps = [Y.jump(i, k)[0] for i in range(n)]
        d_jumps = [D.jump(i, k)[0] for i in range(n)]
        for c in range(S.dim):
            s_jumps = [S.jump(i, k)[c] for i in range(n)]
            s_mean_g = cond_expect(space, g_part, s_jumps)
            s_mean_f = cond_expect(space, f_part, s_jumps)
            lhs = cond_expect(space, g_part,
                              [y_jumps[i] * (s_jumps[i] - s_mean_g[i]) for i in range(n)])
            base_side = cond_expect(space, f_part,
                                    [d_jumps[i] * (s_jumps[i] - s_mean_f[i]) for i in range(n)])
            mult_side = [cond_expect(space, f_part,
                                     [factors.N.jump(i, k)[h] * (s_jumps[i] - s_mean_f[i])
                                      for i in range(n)])
                         for h in range(factors.N.dim)]
            for i in range(n):
                if not eb.alive(i, k):
                    continue
                rhs = base_side[i] + vec_dot(factors.phi.at(i, k),
                                             [mult_side[h][i] for h in range(factors.N.dim)])
                if lhs[i] != rhs:
                    raise ConnectorInvalid("transfer identity failed",
                                           outcome=i, tick=k, component=c)
    bad = is_structure_connector(space, enlarged, S, Y, eb.horizon)
    if bad is not None:
        raise ConnectorInvalid("transferred process is not a connector", **bad)
    return Y


def witness_asset(eb: EnlargedBasis, rep: RepresentationProcess,
                  support: SupportReport) -> Process:
    """A base martingale that no enlarged deflator can price.

    The violating enlarged atom misses one child of its base atom, so the
    matching component of the driving process, fired only at that tick and
    on that base atom, jumps strictly negative on the whole atom; any
    positive deflator would give it a negative conditional increment.
    """
    k_star, cblk, kid = support.tick, support.atom, support.child
    b = eb.base.pre(k_star).block_of(min(cblk))
    slot = rep.children[(k_star, b)].index(kid)

    def jumps(i: int, k: int):
        if k == k_star and i in b:
            return (rep.W.jump(i, k)[slot],)
        return (ZERO,)

    return Process.from_jumps(eb.space.n, eb.base.K, jumps)


@dataclass
class ViabilityReport:
    verdict: bool
    condition_support: bool
    positivity: Optional[bool] = None
    support: Optional[SupportReport] = None
    factors: Optional[DriftFactors] = None
    connector: Optional[Process] = None  # Y for D = 0
    deflator: Optional[Process] = None   # exp(-Y), deflates every driving component
    witness: Optional[dict] = None       # tick, atom, child, asset, certificate


def full_viability_verdict(eb: EnlargedBasis,
                           rep: Optional[RepresentationProcess] = None) -> ViabilityReport:
    """Decide whether base viability survives the enlargement on [0, horizon].

    The verdict equals the child-support condition; jump positivity of the
    multiplier pairing is evaluated alongside and reported.  When the
    verdict holds the report carries the multiplier row, the connector for
    the bare driving process, and the common deflator exp(-Y).  When it
    fails the report carries a witness: a base martingale built from the
    violating (tick, atom, child), confirmed unpriceable in the enlarged
    filtration by the independent oracle, whose certificate is attached.
    """
    if rep is None:
        rep = build_representation(eb.space, eb.base)
    support = check_condition_support(eb)
    if not support.ok:
        asset = witness_asset(eb, rep, support)
        oracle_res = lp_deflator_oracle(eb.space, eb.enlarged, asset, eb.horizon)
        assert not oracle_res.feasible
        return ViabilityReport(verdict=False, condition_support=False, support=support,
                               witness={
                                   "tick": support.tick,
                                   "atom": sorted(support.atom),
                                   "child": sorted(support.child),
                                   "asset": asset,
                                   "certificate": oracle_res.certificate,
                               })
    factors = solve_factors(eb, rep)
    positive = check_positivity(eb, factors) is None
    assert positive
    K, Y = enlarged_connector(eb, rep, factors, None)
    Z = doleans_exp(-Y)
    return ViabilityReport(verdict=True, condition_support=True, positivity=positive,
                           support=support, factors=factors, connector=Y, deflator=Z)
