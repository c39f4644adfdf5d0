import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftlab.basis import is_stopping_time, validate
from driftlab.calculus import is_martingale
from driftlab.enlargement import check_condition_support, validate_enlargement
from driftlab.errors import JacodDegenerate, NotARandomTime
from driftlab.event_kernels import validate_accessible, validate_inaccessible
from driftlab.models import (
    GeneratorConfig,
    azema_phi_crosscheck,
    gen_initial_enlargement,
    gen_progressive_enlargement,
    gen_random_instance,
    gen_single_filtration,
    jacod_density_table,
    jacod_phi_crosscheck,
    random_accessible_instance,
    random_inaccessible_event_data,
    random_martingale,
    random_stopping_time,
    random_viable_asset,
    tilted_component_assets,
    worked_four_point,
    worked_six_point,
)
from driftlab.oracle import check_deflator, lp_deflator_oracle
from driftlab.rational import ONE, ZERO, Q
from driftlab.viability import find_structure_connector

KINDS = ("random", "initial", "progressive")


@given(st.integers(min_value=0, max_value=400))
def test_generated_enlargements_validate(seed):
    kind = KINDS[seed % 3]
    eb = gen_random_instance(GeneratorConfig(seed=seed, enlargement_kind=kind))
    diag = validate_enlargement(eb)
    assert diag.ok, diag.errors
    assert is_stopping_time(eb.enlarged, eb.horizon)


@given(st.integers(min_value=0, max_value=300))
def test_forced_instances_fail_support(seed):
    kind = KINDS[seed % 3]
    eb = gen_random_instance(GeneratorConfig(
        seed=seed, enlargement_kind=kind, force_condition_failure=True))
    assert validate_enlargement(eb).ok
    assert not check_condition_support(eb).ok


@given(st.integers(min_value=0, max_value=300))
def test_random_stopping_times_are_stopping_times(seed):
    rng = random.Random(f"st:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(2, 10), rng.randint(1, 4), 3)
    T = random_stopping_time(rng, sp, filt)
    assert is_stopping_time(filt, T)


@given(st.integers(min_value=0, max_value=300))
def test_random_martingale_is_martingale(seed):
    rng = random.Random(f"rm:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(2, 10), rng.randint(1, 3), 3)
    X = random_martingale(rng, sp, filt)
    assert is_martingale(sp, filt, X)
    capped = random_martingale(rng, sp, filt, cap=Q(7, 8))
    assert is_martingale(sp, filt, capped)
    for i in range(sp.n):
        for k in range(1, filt.K + 1):
            assert abs(capped.jump(i, k)[0]) <= Q(7, 8)


@given(st.integers(min_value=0, max_value=200))
def test_viable_asset_construction(seed):
    rng = random.Random(f"va:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(2, 9), rng.randint(1, 3), 3)
    S, D, Z = random_viable_asset(rng, sp, filt)
    assert all(S.scalar(i, k) > ZERO
               for i in range(sp.n) for k in range(filt.K + 1))
    assert check_deflator(sp, filt, S, Z)


@given(st.integers(min_value=0, max_value=100))
def test_tilted_assets_are_positive_and_viable(seed):
    rng = random.Random(f"tilt:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(3, 8), rng.randint(1, 2), 3)
    family = tilted_component_assets(sp, filt)
    from driftlab.representation import multiplicity
    if multiplicity(sp, filt) > 1:
        assert family
    for S in family:
        assert all(S.scalar(i, k) > ZERO
                   for i in range(sp.n) for k in range(filt.K + 1))
        assert find_structure_connector(sp, filt, S).found


def test_worked_instances_validate():
    six = worked_six_point()
    assert validate_enlargement(six["eb"]).ok
    four = worked_four_point()
    assert validate_enlargement(four["eb"]).ok
    assert six["eb"].space.n == 6
    assert four["eb"].space.n == 4


def test_progressive_rejects_invalid_time():
    rng = random.Random("badtau")
    sp, base = gen_single_filtration(rng, 4, 2, 2)
    with pytest.raises(NotARandomTime):
        gen_progressive_enlargement(sp, base, [-1] * sp.n)


@given(st.integers(min_value=0, max_value=250))
def test_jacod_crosscheck(seed):
    rng = random.Random(f"jx:{seed}")
    sp, base = gen_single_filtration(rng, rng.randint(3, 9), rng.randint(1, 3), 3)
    blocks = base.at(base.K).blocks
    xi = [0] * sp.n
    for b in blocks:
        label = rng.randint(0, 1)
        for i in b:
            xi[i] = label
    if len({xi[i] for i in range(sp.n)}) < 2:
        for i in blocks[0]:
            xi[i] = 1 - xi[i]
    eb = gen_initial_enlargement(sp, base, xi)
    try:
        assert jacod_phi_crosscheck(eb, xi)
    except JacodDegenerate:
        pass


def test_jacod_degenerate_raises():
    from driftlab.basis import Filtration, Partition, SampleSpace
    sp = SampleSpace(tuple("abcd"), (Q(1, 4),) * 4)
    top = Partition([[0, 1, 2, 3]])
    mid = Partition([[0, 1], [2, 3]])
    fine = Partition([[0], [1], [2], [3]])
    base = Filtration(top, ((mid, mid), (fine, fine)))
    xi = [0, 0, 1, 1]  # perfectly revealed at tick 1: density table hits zero
    eb = gen_initial_enlargement(sp, base, xi)
    with pytest.raises(JacodDegenerate):
        jacod_phi_crosscheck(eb, xi)


@given(st.integers(min_value=0, max_value=250))
def test_azema_crosscheck(seed):
    rng = random.Random(f"az:{seed}")
    sp, base = gen_single_filtration(rng, rng.randint(3, 9), rng.randint(1, 3), 3)
    tau = random_stopping_time(rng, sp, base).values
    eb = gen_progressive_enlargement(sp, base, tau)
    assert azema_phi_crosscheck(eb, tau)


def test_density_table_shape():
    rng = random.Random("table")
    sp, base = gen_single_filtration(rng, 6, 2, 3)
    xi = [i % 2 for i in range(sp.n)]
    table = jacod_density_table(sp, base, xi)
    assert set(table) == {"values", "at", "pre"}
    for x in table["values"]:
        # unconditional mean of the density is one at every tick
        for k in range(base.K + 1):
            mean = sum((sp.prob[i] * table["at"][(x, k)][i]
                        for i in range(sp.n)), ZERO)
            assert mean == ONE


@given(st.integers(min_value=0, max_value=300))
def test_random_event_data_validates(seed):
    rng = random.Random(f"ev:{seed}")
    inst = random_accessible_instance(rng)
    validate_accessible(inst["data"])
    data = random_inaccessible_event_data(rng)
    validate_inaccessible(data)
