"""Pointwise jump-event kernels and series diagnostics.

Continuous martingale parts and totally inaccessible jump times are
degenerate on a finite tick grid, so the corresponding per-event formulas
are exposed here as pure kernels over explicit event data instead of as
process operations: accessible events carry child probabilities seen from
both filtrations, inaccessible events carry cell probabilities with a
scale factor per cell.  The series diagnostics classify user-sampled
integral refinements and jump series as finite or divergent; that part is
deliberately float-based, everything else is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import Optional, Sequence

from .errors import BadGrid, DataInvariantViolated, DimensionMismatch, ZeroProbabilityBranch
from .linalg import vec_dot
from .rational import ONE, ZERO, Q

GROWTH_FACTOR = 1.5     # ratio that counts as "still growing" between refinements
RUN_LENGTH = 4          # how many successive growing refinements mean divergence
STABLE_REL_TOL = 1e-6   # relative stabilization threshold for finiteness


@dataclass(frozen=True)
class AccessibleEventData:
    """One accessible jump event: child slots of a left-limit atom.

    p and pbar are the child probabilities under the base and the enlarged
    conditioning, n_vals the driving-process jump vector per slot, d_vals
    the connector jump per slot, phi the multiplier row, weight the event's
    series weight.
    """
    p: tuple
    pbar: tuple
    n_vals: tuple   # one vector per slot
    d_vals: tuple
    phi: tuple
    weight: Q = ONE


def validate_accessible(data: AccessibleEventData) -> None:
    slots = len(data.p)
    if not (len(data.pbar) == len(data.n_vals) == len(data.d_vals) == slots):
        raise DimensionMismatch("slot counts differ")
    for row in data.n_vals:
        if len(row) != len(data.phi):
            raise DimensionMismatch("driving jump width differs from multiplier width")
    if sum(data.p, ZERO) != ONE or sum(data.pbar, ZERO) != ONE:
        raise DataInvariantViolated("child probabilities must sum to one")
    for h in range(slots):
        if data.p[h] < ZERO or data.pbar[h] < ZERO:
            raise DataInvariantViolated("negative probability", slot=h)
        if (ONE + vec_dot(data.phi, data.n_vals[h])) * data.p[h] != data.pbar[h]:
            raise DataInvariantViolated("probability tilt identity failed", slot=h)
        if data.p[h] > ZERO and data.d_vals[h] >= ONE:
            raise DataInvariantViolated("connector jump reaches one", slot=h)
    if data.weight <= ZERO:
        raise DataInvariantViolated("weight must be positive")


def accessible_jump_value(data: AccessibleEventData, h: int) -> Q:
    """Connector jump transferred to the enlarged side at slot h.

    (d_h + phi.n_h) / (1 + phi.n_h).  Slots the base conditioning never
    reaches, and slots killed by the enlarged conditioning (where the
    denominator collapses to zero), have no transferred value.
    """
    if not 0 <= h < len(data.p):
        raise DimensionMismatch("slot out of range")
    if data.p[h] <= ZERO:
        raise ZeroProbabilityBranch(slot=h)
    denom = ONE + vec_dot(data.phi, data.n_vals[h])
    if denom == ZERO:
        raise ZeroProbabilityBranch(slot=h, detail="enlarged conditioning kills the slot")
    return (data.d_vals[h] + vec_dot(data.phi, data.n_vals[h])) / denom


@dataclass(frozen=True)
class InaccessibleEventData:
    """One thin jump event split into cells.

    q and qbar are the cell probabilities under the two conditionings,
    jump_scale the (nonzero) driving jump scale per cell, base_coeff and
    pair_rows the integrand coefficients per cell, drive_mean the
    base-conditional mean jump row, phi the multiplier row.
    """
    q: tuple
    qbar: tuple
    jump_scale: tuple
    base_coeff: tuple
    pair_rows: tuple   # one vector per cell
    drive_mean: tuple
    phi: tuple

    def scaled_row(self, k: int) -> tuple:
        a = self.jump_scale[k]
        return tuple(a * z for z in self.pair_rows[k])


def validate_inaccessible(data: InaccessibleEventData) -> None:
    cells = len(data.q)
    if not (len(data.qbar) == len(data.jump_scale) == len(data.base_coeff)
            == len(data.pair_rows) == cells):
        raise DimensionMismatch("cell counts differ")
    width = len(data.phi)
    if len(data.drive_mean) != width:
        raise DimensionMismatch("mean row width differs from multiplier width")
    for row in data.pair_rows:
        if len(row) != width:
            raise DimensionMismatch("pair row width differs from multiplier width")
    if sum(data.q, ZERO) > ONE or sum(data.qbar, ZERO) > ONE:
        raise DataInvariantViolated("cell probabilities exceed one")
    tilt = ONE + vec_dot(data.phi, data.drive_mean)
    if tilt <= ZERO:
        raise DataInvariantViolated("mean tilt must stay positive")
    for k in range(cells):
        if data.q[k] < ZERO or data.qbar[k] < ZERO:
            raise DataInvariantViolated("negative probability", cell=k)
        if data.jump_scale[k] == ZERO:
            raise DataInvariantViolated("jump scale vanishes", cell=k)
        lhs = (ONE + vec_dot(data.phi, data.scaled_row(k))) * data.q[k]
        if lhs != tilt * data.qbar[k]:
            raise DataInvariantViolated("cell tilt identity failed", cell=k)


def inaccessible_jump_value(data: InaccessibleEventData, k: int) -> Q:
    """Integrand value at cell k: (J_k + phi.zeta_k) / (1 + phi.zeta_k a_k).

    Zero when the denominator vanishes; by the cell tilt identity that can
    only happen on cells of zero enlarged probability.
    """
    if not 0 <= k < len(data.q):
        raise DimensionMismatch("cell out of range")
    denom = ONE + vec_dot(data.phi, data.scaled_row(k))
    if denom == ZERO:
        return ZERO
    return (data.base_coeff[k] + vec_dot(data.phi, data.pair_rows[k])) / denom


def reduced_equation_holds(data: InaccessibleEventData, k: int) -> bool:
    """(1 + phi.mean) * value * qbar_k == (J_k + phi.zeta_k) * q_k."""
    value = inaccessible_jump_value(data, k)
    tilt = ONE + vec_dot(data.phi, data.drive_mean)
    rhs = (data.base_coeff[k] + vec_dot(data.phi, data.pair_rows[k])) * data.q[k]
    return tilt * value * data.qbar[k] == rhs


def quotient_identity_holds(data: InaccessibleEventData, k: int) -> bool:
    """value * a_k == (d_k + phi.l_k) / (1 + phi.l_k) with d_k = J_k * a_k."""
    value = inaccessible_jump_value(data, k)
    l_k = data.scaled_row(k)
    denom = ONE + vec_dot(data.phi, l_k)
    if denom == ZERO:
        return value == ZERO
    d_k = data.base_coeff[k] * data.jump_scale[k]
    return value * data.jump_scale[k] * denom == d_k + vec_dot(data.phi, l_k)


def continuous_part_integrand(base_coeffs: Sequence[Q], pair_rows: Sequence[Sequence[Q]],
                              phi: Sequence[Q]) -> tuple:
    """Componentwise particular integrand J_h + phi.zeta_h for the diffusive part."""
    if len(base_coeffs) != len(pair_rows):
        raise DimensionMismatch("coefficient counts differ")
    for row in pair_rows:
        if len(row) != len(phi):
            raise DimensionMismatch("pair row width differs from multiplier width")
    return tuple(j + vec_dot(phi, row) for j, row in zip(base_coeffs, pair_rows))


# --- series diagnostics (float-only) ---

def _trapezoid(t: Sequence[float], y: Sequence[float]) -> float:
    total = 0.0
    for a, b, ya, yb in zip(t, t[1:], y, y[1:]):
        total += (b - a) * (ya + yb) / 2.0
    return total


def _check_grid(t: Sequence[float], y: Sequence[float]) -> None:
    if len(t) < 2 or len(t) != len(y):
        raise BadGrid("grid needs matching t/y samples, at least two")
    for v in list(t) + list(y):
        if not isfinite(float(v)):
            raise BadGrid("grid samples must be finite")
    for a, b in zip(t, t[1:]):
        if not b > a:
            raise BadGrid("grid times must strictly increase")


def _classify(values: Sequence[float], growth: float, run: int, rel_tol: float) -> str:
    streak = 0
    for prev, cur in zip(values, values[1:]):
        grew = cur >= growth * prev if prev > 0 else cur > prev
        streak = streak + 1 if grew else 0
        if streak >= run:
            return "divergent"
    if len(values) >= 2:
        if abs(values[-1] - values[-2]) <= rel_tol * max(1.0, abs(values[-1])):
            return "finite"
    return "inconclusive"


def series_diagnostics(levels: Optional[Sequence[dict]] = None,
                       jumps: Optional[Sequence[float]] = None,
                       growth_factor: float = GROWTH_FACTOR,
                       run_length: int = RUN_LENGTH,
                       stable_rel_tol: float = STABLE_REL_TOL) -> dict:
    """Classify an integral refinement sequence and/or a jump series.

    levels is a list of {"t": [...], "y": [...]} grids sampling the
    integrand on successive refinements; jumps is the raw jump sequence
    x_j, accumulated as partial sums of (x_j / (1 + x_j))^2 along dyadic
    prefixes.  Each part is classified divergent (values keep growing by
    growth_factor over run_length successive steps), finite (last step
    stabilized within stable_rel_tol), or inconclusive; the combined
    verdict is divergent if any part is, finite if all parts are.
    """
    if not levels and not jumps:
        raise BadGrid("nothing to diagnose")
    report: dict = {}
    verdicts = []
    if levels:
        values = []
        for grid in levels:
            t, y = grid.get("t"), grid.get("y")
            if t is None or y is None:
                raise BadGrid("each level needs t and y")
            _check_grid(t, y)
            values.append(_trapezoid([float(v) for v in t], [float(v) for v in y]))
        verdict = _classify(values, growth_factor, run_length, stable_rel_tol)
        report["integral"] = {"values": values, "verdict": verdict}
        verdicts.append(verdict)
    if jumps:
        xs = [float(x) for x in jumps]
        for x in xs:
            if not isfinite(x) or 1.0 + x == 0.0:
                raise BadGrid("jump values must be finite with 1 + x nonzero")
        terms = [(x / (1.0 + x)) ** 2 for x in xs]
        sums, acc = [], 0.0
        marks = set()
        m = 1
        while m < len(terms):
            marks.add(m)
            m *= 2
        marks.add(len(terms))
        for j, term in enumerate(terms, start=1):
            acc += term
            if j in marks:
                sums.append(acc)
        verdict = _classify(sums, growth_factor, run_length, stable_rel_tol)
        report["jump_series"] = {"values": sums, "verdict": verdict}
        verdicts.append(verdict)
    if "divergent" in verdicts:
        combined = "divergent"
    elif verdicts and all(v == "finite" for v in verdicts):
        combined = "finite"
    else:
        combined = "inconclusive"
    report["verdict"] = combined
    return report
