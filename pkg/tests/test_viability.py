import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftlab.basis import Process, StoppingTime
from driftlab.calculus import is_martingale, pointwise_mul, stop
from driftlab.enlargement import solve_factors
from driftlab.errors import SupportConditionFailed
from driftlab.models import (
    GeneratorConfig,
    gen_random_instance,
    gen_single_filtration,
    random_viable_asset,
    worked_four_point,
    worked_six_point,
)
from driftlab.oracle import lp_deflator_oracle, verify_no_deflator
from driftlab.rational import ONE, ZERO, Q
from driftlab.representation import build_representation
from driftlab.viability import (
    deflator_from_connector,
    enlarged_connector,
    find_structure_connector,
    full_viability_verdict,
    g_connector,
    is_structure_connector,
    jump_identity_check,
    solve_accessible_K,
    witness_asset,
)

KINDS = ("random", "initial", "progressive")


def test_six_point_verdict_and_deflator():
    six = worked_six_point()
    report = full_viability_verdict(six["eb"])
    assert report.verdict
    assert report.condition_support
    Z = report.deflator
    got = sorted({Z.scalar(i, 1) for i in range(6)})
    assert got == [Q(3, 4), Q(3, 2)]
    assert is_martingale(six["eb"].space, six["eb"].enlarged, Z)


def test_six_point_deflates_the_asset():
    six = worked_six_point()
    report = full_viability_verdict(six["eb"])
    ZS = pointwise_mul(report.deflator, six["asset"])
    assert is_martingale(six["eb"].space, six["eb"].enlarged, ZS,
                         horizon=six["eb"].horizon)


def test_four_point_verdict_false_with_witness():
    four = worked_four_point()
    report = full_viability_verdict(four["eb"])
    assert not report.verdict
    assert not report.condition_support
    w = report.witness
    assert w is not None
    assert w["tick"] == 1
    assert w["atom"] == [3]
    assert verify_no_deflator(four["eb"].space, four["eb"].enlarged,
                              w["asset"], four["eb"].horizon, w["certificate"])
    # the witness is fine in the base filtration
    assert find_structure_connector(four["eb"].space, four["eb"].base,
                                    w["asset"]).found


def test_accessible_solver_gates_on_support():
    four = worked_four_point()
    rep = build_representation(four["eb"].space, four["eb"].base)
    factors = solve_factors(four["eb"], rep)
    with pytest.raises(SupportConditionFailed):
        solve_accessible_K(four["eb"], rep, factors)


@given(st.integers(min_value=0, max_value=250))
def test_connector_gives_positive_deflator(seed):
    rng = random.Random(f"conn:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(2, 9), rng.randint(1, 3), 3)
    S, D_known, Z_known = random_viable_asset(rng, sp, filt)
    search = find_structure_connector(sp, filt, S)
    assert search.found
    Z = deflator_from_connector(sp, filt, search.connector)
    assert all(Z.scalar(i, k) > ZERO
               for i in range(sp.n) for k in range(filt.K + 1))
    assert all(Z.scalar(i, 0) == ONE for i in range(sp.n))
    assert is_martingale(sp, filt, Z)
    assert is_martingale(sp, filt, pointwise_mul(Z, S))


def test_one_sided_bet_has_no_connector():
    from driftlab.basis import Filtration, Partition, SampleSpace
    sp = SampleSpace(("u", "d"), (Q(1, 2), Q(1, 2)))
    top = Partition([[0, 1]])
    filt = Filtration(top, ((top, Partition([[0], [1]])),))
    # nonnegative jump with positive mass on a gain: free lunch
    S = Process.from_jumps(2, 1,
                           lambda i, k: ONE if i == 0 else ZERO,
                           start=(ONE,))
    search = find_structure_connector(sp, filt, S)
    oracle = lp_deflator_oracle(sp, filt, S)
    assert not search.found
    assert not oracle.feasible
    assert verify_no_deflator(sp, filt, S, None, oracle.certificate)


@given(st.integers(min_value=0, max_value=150))
def test_jump_identity_and_g_connector(seed):
    kind = KINDS[seed % 3]
    eb = gen_random_instance(GeneratorConfig(seed=seed, enlargement_kind=kind))
    rep = build_representation(eb.space, eb.base)
    factors = solve_factors(eb, rep)
    from driftlab.enlargement import check_condition_support
    if not check_condition_support(eb).ok:
        return
    K, Y = enlarged_connector(eb, rep, factors)
    assert jump_identity_check(eb, rep, factors, K) is None

    rng = random.Random(f"gc:{seed}")
    S, D, _ = random_viable_asset(rng, eb.space, eb.base)
    DG = g_connector(eb, rep, factors, S, D)
    assert is_structure_connector(eb.space, eb.enlarged, S, DG,
                                  horizon=eb.horizon) is None


def test_witness_asset_separates_the_filtrations():
    four = worked_four_point()
    from driftlab.enlargement import check_condition_support
    rep = build_representation(four["eb"].space, four["eb"].base)
    support = check_condition_support(four["eb"])
    S = witness_asset(four["eb"], rep, support)
    assert find_structure_connector(four["eb"].space, four["eb"].base, S).found
    res = lp_deflator_oracle(four["eb"].space, four["eb"].enlarged, S,
                             four["eb"].horizon)
    assert not res.feasible
