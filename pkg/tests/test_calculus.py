import random

from hypothesis import given
from hypothesis import strategies as st

from driftlab.basis import Process, StoppingTime
from driftlab.calculus import (
    bracket,
    canonical_decomposition,
    comp_bracket,
    compensator,
    doleans_exp,
    is_martingale,
    is_predictable,
    martingale_violation,
    pointwise_mul,
    stoch_integral,
    stop,
)
from driftlab.models import (
    gen_single_filtration,
    random_adapted,
    random_martingale,
    random_stopping_time,
)
from driftlab.rational import ONE, ZERO, Q


def draw(seed, label="calc"):
    rng = random.Random(f"{label}:{seed}")
    sp, filt = gen_single_filtration(rng, rng.randint(3, 9), rng.randint(1, 3), 3)
    return rng, sp, filt


def shift(X: Process) -> Process:
    """Previous-tick sampling, turning an adapted path into a predictable one."""
    rows = tuple((row[0],) + row[:-1] for row in X.values)
    return Process(X.dim, rows)


def test_martingale_golden():
    # fair coin: +1/-1 with equal mass
    X = Process.from_scalar_paths([[0, 1], [0, -1]])
    from driftlab.basis import Filtration, Partition, SampleSpace
    sp = SampleSpace(("u", "d"), (Q(1, 2), Q(1, 2)))
    filt = Filtration(Partition([[0, 1]]),
                      ((Partition([[0, 1]]), Partition([[0], [1]])),))
    assert is_martingale(sp, filt, X)
    assert martingale_violation(sp, filt, X) is None
    Y = Process.from_scalar_paths([[0, 1], [0, 0]])
    where = martingale_violation(sp, filt, Y)
    assert where == (1, frozenset({0, 1}), 0)


@given(st.integers(min_value=0, max_value=300))
def test_compensator_centers_the_process(seed):
    rng, sp, filt = draw(seed, "comp")
    A = random_adapted(rng, sp, filt, dim=rng.choice((1, 2)))
    C = compensator(sp, filt, A)
    assert is_predictable(filt, C)
    assert all(C.at(i, 0) == (ZERO,) * C.dim for i in range(sp.n))
    assert is_martingale(sp, filt, A - C)


@given(st.integers(min_value=0, max_value=300))
def test_canonical_decomposition(seed):
    rng, sp, filt = draw(seed, "dec")
    X = random_adapted(rng, sp, filt)
    dec = canonical_decomposition(sp, filt, X)
    assert is_martingale(sp, filt, dec.martingale_part)
    assert is_predictable(filt, dec.drift_part)
    assert dec.start + dec.martingale_part + dec.drift_part == X


@given(st.integers(min_value=0, max_value=300))
def test_integration_by_parts(seed):
    rng, sp, filt = draw(seed, "ibp")
    X = random_adapted(rng, sp, filt)
    Y = random_adapted(rng, sp, filt)
    lhs = pointwise_mul(X, Y)
    rhs = (stoch_integral(filt, shift(X), Y)
           + stoch_integral(filt, shift(Y), X)
           + bracket(X, Y))
    for i in range(sp.n):
        x0y0 = lhs.at(i, 0)[0]
        for k in range(filt.K + 1):
            assert lhs.at(i, k)[0] == x0y0 + rhs.at(i, k)[0]


@given(st.integers(min_value=0, max_value=300))
def test_compensated_bracket_is_a_martingale(seed):
    rng, sp, filt = draw(seed, "cb")
    X = random_martingale(rng, sp, filt)
    Y = random_martingale(rng, sp, filt)
    B = bracket(X, Y)
    assert is_martingale(sp, filt, B - comp_bracket(sp, filt, X, Y))


@given(st.integers(min_value=0, max_value=300))
def test_integral_against_martingale_is_martingale(seed):
    rng, sp, filt = draw(seed, "im")
    X = random_martingale(rng, sp, filt)
    H = shift(random_adapted(rng, sp, filt))
    assert is_martingale(sp, filt, stoch_integral(filt, H, X))


def test_doleans_golden():
    X = Process.from_scalar_paths([[0, Q(1, 2), Q(1, 4)]])
    Z = doleans_exp(X)
    assert Z.at(0, 0) == (ONE,)
    assert Z.at(0, 1) == (Q(3, 2),)
    assert Z.at(0, 2) == (Q(9, 8),)


@given(st.integers(min_value=0, max_value=300))
def test_doleans_product_rule(seed):
    rng, sp, filt = draw(seed, "yor")
    X = random_adapted(rng, sp, filt)
    Y = random_adapted(rng, sp, filt)
    lhs = pointwise_mul(doleans_exp(X), doleans_exp(Y))
    rhs = doleans_exp(X + Y + bracket(X, Y))
    assert lhs == rhs


@given(st.integers(min_value=0, max_value=300))
def test_stopped_martingale_stays_martingale(seed):
    rng, sp, filt = draw(seed, "stopm")
    X = random_martingale(rng, sp, filt)
    T = random_stopping_time(rng, sp, filt)
    assert is_martingale(sp, filt, stop(X, T))


def test_stop_freezes_paths():
    X = Process.from_scalar_paths([[0, 1, 5], [0, 2, 7]])
    T = StoppingTime((1, 2))
    Y = stop(X, T)
    assert Y.at(0, 2) == (Q(1),)
    assert Y.at(1, 2) == (Q(7),)
