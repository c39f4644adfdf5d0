"""Independent no-arbitrage oracle by exact linear feasibility.

Decides whether a strictly positive process Z with Z_0 = 1 exists making Z
and Z*S martingales on [0, horizon], by solving one global linear program
over the atom values of Z with an auxiliary gap variable: the gap is the
floor under all Z values, capped at 1 and maximized; a strictly positive
deflator exists iff the optimal gap is positive.

This module deliberately knows nothing about connectors, representations,
or drift multipliers: it imports only the basis layer and the LP solver,
so agreement with the structure-condition route downstream is a genuine
cross-check, not a tautology.  Certificates are re-verifiable with plain
conditional arithmetic (see check_deflator / verify_no_deflator).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .basis import Filtration, Process, SampleSpace, StoppingTime
from .linfeas import (INFEASIBLE, OPTIMAL, UNBOUNDED,
                      check_bound_certificate, check_infeasibility_certificate, solve_lp)
from .rational import ONE, ZERO, Q, rat, rat_str


@dataclass
class OracleResult:
    feasible: bool
    deflator: Optional[Process]
    gap: Optional[Q]
    certificate: dict


def _alive_block(horizon: StoppingTime, b, k: int) -> bool:
    return all(horizon.geq(i, k) for i in b)


def _build_lp(space: SampleSpace, filt: Filtration, S: Process, horizon: StoppingTime):
    """Rows and columns of the deflator feasibility program, deterministically ordered."""
    n, K = space.n, filt.K
    var_index: dict = {}
    var_desc = []
    for k in range(1, K + 1):
        for b in filt.at(k).blocks:
            if _alive_block(horizon, b, k):
                var_index[(k, b)] = len(var_desc)
                var_desc.append((k, b))

    def z_ref(i: int, k: int):
        """(column, constant): the Z value of outcome i at tick k."""
        while k > 0:
            b = filt.at(k).block_of(i)
            key = (k, b)
            if key in var_index:
                return var_index[key], None
            k -= 1
        return None, ONE

    nz = len(var_index)
    A_eq, b_eq, eq_desc = [], [], []
    for k in range(1, K + 1):
        for b in filt.pre(k).blocks:
            if not _alive_block(horizon, b, k):
                continue
            for comp in range(S.dim + 1):
                row = [ZERO] * (nz + 1)  # last column is the gap variable
                rhs = ZERO
                for i in b:
                    w_now = space.prob[i] * (ONE if comp == 0 else S.at(i, k)[comp - 1])
                    w_prev = space.prob[i] * (ONE if comp == 0 else S.at(i, k - 1)[comp - 1])
                    col, const = z_ref(i, k)
                    if col is not None:
                        row[col] += w_now
                    else:
                        rhs -= w_now * const
                    col, const = z_ref(i, k - 1)
                    if col is not None:
                        row[col] -= w_prev
                    else:
                        rhs += w_prev * const
                A_eq.append(row)
                b_eq.append(rhs)
                eq_desc.append({
                    "kind": "martingale" if comp == 0 else "deflated-asset",
                    "tick": k,
                    "atom": sorted(b),
                    "component": comp - 1 if comp else None,
                })

    A_ub, b_ub, ub_desc = [], [], []
    for v, (k, b) in enumerate(var_desc):
        row = [ZERO] * (nz + 1)
        row[v] = -ONE
        row[nz] = ONE
        A_ub.append(row)
        b_ub.append(ZERO)
        ub_desc.append({"kind": "positivity", "tick": k, "atom": sorted(b)})
    cap = [ZERO] * (nz + 1)
    cap[nz] = ONE
    A_ub.append(cap)
    b_ub.append(ONE)
    ub_desc.append({"kind": "gap-cap"})

    c = [ZERO] * (nz + 1)
    c[nz] = ONE
    return c, A_eq, b_eq, A_ub, b_ub, var_desc, var_index, eq_desc, ub_desc


def _deflator_from_solution(space, filt, horizon, var_index, x) -> Process:
    rows = []
    for i in range(space.n):
        cur = ONE
        row = [(cur,)]
        for k in range(1, filt.K + 1):
            key = (k, filt.at(k).block_of(i))
            if key in var_index:
                cur = x[var_index[key]]
            row.append((cur,))
        rows.append(tuple(row))
    return Process(1, tuple(rows))


def lp_deflator_oracle(space: SampleSpace, filt: Filtration, S: Process,
                       horizon: Optional[StoppingTime] = None) -> OracleResult:
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    c, A_eq, b_eq, A_ub, b_ub, var_desc, var_index, eq_desc, ub_desc = \
        _build_lp(space, filt, S, horizon)
    res = solve_lp(c, A_eq, b_eq, A_ub, b_ub)
    if res.status == UNBOUNDED:  # impossible: the gap is capped
        raise AssertionError("gap program cannot be unbounded")
    if res.status == INFEASIBLE:
        assert check_infeasibility_certificate(A_eq, b_eq, A_ub, b_ub, res.dual_eq, res.dual_ub)
        cert = {
            "status": "no-deflator",
            "reason": "martingale-system-infeasible",
            "multipliers_eq": [rat_str(v) for v in res.dual_eq],
            "multipliers_ub": [rat_str(v) for v in res.dual_ub],
            "rows_eq": eq_desc,
            "rows_ub": ub_desc,
        }
        return OracleResult(feasible=False, deflator=None, gap=None, certificate=cert)
    if res.value <= ZERO:
        assert check_bound_certificate(c, A_eq, b_eq, A_ub, b_ub, res.dual_eq, res.dual_ub, res.value)
        cert = {
            "status": "no-deflator",
            "reason": "positivity-unreachable",
            "gap_bound": rat_str(res.value),
            "multipliers_eq": [rat_str(v) for v in res.dual_eq],
            "multipliers_ub": [rat_str(v) for v in res.dual_ub],
            "rows_eq": eq_desc,
            "rows_ub": ub_desc,
        }
        return OracleResult(feasible=False, deflator=None, gap=res.value, certificate=cert)
    Z = _deflator_from_solution(space, filt, horizon, var_index, res.x)
    assert check_deflator(space, filt, S, Z, horizon)
    cert = {"status": "deflator", "gap": rat_str(res.value)}
    return OracleResult(feasible=True, deflator=Z, gap=res.value, certificate=cert)


def check_deflator(space: SampleSpace, filt: Filtration, S: Process, Z: Process,
                   horizon: Optional[StoppingTime] = None) -> bool:
    """Plain-arithmetic recheck: Z_0 = 1, Z > 0, Z and Z*S martingales on the horizon."""
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    for i in range(space.n):
        if Z.at(i, 0)[0] != ONE:
            return False
        for k in range(filt.K + 1):
            if Z.at(i, k)[0] <= ZERO:
                return False
    for k in range(1, filt.K + 1):
        for b in filt.pre(k).blocks:
            if not _alive_block(horizon, b, k):
                continue
            for comp in range(S.dim + 1):
                tot = ZERO
                for i in b:
                    s_now = ONE if comp == 0 else S.at(i, k)[comp - 1]
                    s_prev = ONE if comp == 0 else S.at(i, k - 1)[comp - 1]
                    tot += space.prob[i] * (Z.at(i, k)[0] * s_now - Z.at(i, k - 1)[0] * s_prev)
                if tot != ZERO:
                    return False
    return True


def verify_no_deflator(space: SampleSpace, filt: Filtration, S: Process,
                       horizon: Optional[StoppingTime], certificate: dict) -> bool:
    """Re-verify an infeasibility certificate by rebuilding the program."""
    if horizon is None:
        horizon = StoppingTime.constant(space.n, filt.K)
    c, A_eq, b_eq, A_ub, b_ub, *_ = _build_lp(space, filt, S, horizon)
    y_eq = [rat(v) for v in certificate["multipliers_eq"]]
    y_ub = [rat(v) for v in certificate["multipliers_ub"]]
    if len(y_eq) != len(A_eq) or len(y_ub) != len(A_ub):
        return False
    if certificate["reason"] == "martingale-system-infeasible":
        return check_infeasibility_certificate(A_eq, b_eq, A_ub, b_ub, y_eq, y_ub)
    bound = rat(certificate["gap_bound"])
    return bound <= ZERO and check_bound_certificate(c, A_eq, b_eq, A_ub, b_ub, y_eq, y_ub, bound)
