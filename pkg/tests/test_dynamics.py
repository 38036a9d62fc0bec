from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sieve_lab.census import Constellation, DrivingTermCensus, p0_asymptotic, scan_census
from sieve_lab.dynamics import (
    asymptotic_weight,
    diag,
    eigenvalue_ladder,
    identity,
    matmul,
    normalize,
    pascal_pair,
    propagate,
    propagate_diagonal,
    propagate_trace,
    required_seed,
    subdominant_ratios,
    transition_matrix,
    winf,
)
from sieve_lab.errors import PreconditionError

L11 = (2, 10, 2, 10, 2, 4, 2, 10, 2, 10, 2)


def census(s, p, counts):
    return DrivingTermCensus(Constellation(s), p, tuple(counts))


def test_transition_matrix_examples():
    assert transition_matrix(7, 2, 4).entries == ((4, 1, 0), (0, 3, 2), (0, 0, 2))
    assert transition_matrix(5, 3, 3).entries == ((1,),)


def test_gap_matrix_is_j1_equal_1_case():
    m = transition_matrix(13, 1, 5).entries
    assert [m[i][i] for i in range(5)] == [11, 10, 9, 8, 7]
    assert [m[i][i + 1] for i in range(4)] == [1, 2, 3, 4]


def test_transition_matrix_bad_range():
    with pytest.raises(PreconditionError):
        transition_matrix(7, 3, 2)


def test_pascal_pair_examples():
    pp = pascal_pair(3)
    assert pp.L == ((1, 1, 1), (0, 1, 2), (0, 0, 1))
    assert pp.R == ((1, -1, 1), (0, 1, -2), (0, 0, 1))
    assert pascal_pair(1).L == pascal_pair(1).R == ((1,),)


@pytest.mark.parametrize("n", range(1, 13))
def test_pascal_inverse_pair(n):
    pp = pascal_pair(n)
    assert matmul(pp.L, pp.R) == identity(n)
    assert matmul(pp.R, pp.L) == identity(n)
    assert pp.L[0] == (1,) * n


@given(st.sampled_from([3, 5, 7, 11, 13, 101, 1009]), st.integers(1, 8), st.integers(0, 11))
def test_eigendecomposition(p, j1, extra):
    J = j1 + extra
    pp = pascal_pair(extra + 1)
    ladder = eigenvalue_ladder(p, j1, J)
    assert ladder[0] == p - j1 - 1
    assert all(a - b == 1 for a, b in zip(ladder, ladder[1:]))
    assert transition_matrix(p, j1, J).entries == matmul(pp.R, matmul(diag(ladder), pp.L))


def test_propagate_66():
    out = propagate(census((6, 6), 5, (0, 2, 2)), 7)
    assert out.counts == (2, 10, 4)
    assert out.stage_prime == 7


def test_propagate_242_from_3():
    assert propagate(census((2, 4, 2), 3, (1,)), 5).counts == (1,)


def test_propagate_zero():
    assert propagate(census((6, 6), 5, (0, 0, 0)), 13).counts == (0, 0, 0)


def test_propagate_refuses_underqualified_seed():
    with pytest.raises(PreconditionError) as info:
        propagate(census((12, 12), 5, (0, 0, 0, 0, 1)), 7)
    assert "stage 5" in str(info.value)
    assert info.value.reason == "full_model_condition"


def test_propagate_target_must_be_later_prime():
    with pytest.raises(PreconditionError):
        propagate(census((6, 6), 5, (0, 2, 2)), 5)
    with pytest.raises(PreconditionError):
        propagate(census((6, 6), 5, (0, 2, 2)), 9)


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=6), st.sampled_from([11, 13, 29, 53]))
def test_paths_agree(counts, to_prime):
    seed = census((2, 2), 5, counts)
    assert propagate_trace(seed, to_prime)[-1].counts == propagate_diagonal(seed, to_prime)


@pytest.mark.parametrize(
    "s, p0",
    [((2, 4, 2), 3), ((2, 4, 2), 5), ((6, 6), 5), ((2, 10, 2), 7), ((4, 2, 4), 5)],
)
def test_model_matches_sieve(cycles, s, p0):
    seed = scan_census(cycles[p0], s)
    for p in [q for q in (5, 7, 11, 13) if q > p0]:
        model = propagate(seed, p)
        scanned = scan_census(cycles[p], s)
        assert model.counts == scanned.padded(model.j_max)


def test_normalize_examples():
    assert normalize(census((2, 10, 2), 7, (2, 6))).weights == (Fraction(2, 3), Fraction(2))
    w = normalize(census((2, 10, 2, 10, 2), 13, (52, 44, 48))).weights
    assert w == (Fraction(52, 35), Fraction(44, 35), Fraction(48, 35))
    assert normalize(census((6, 6), 5, (0, 0, 0))).weights == (0, 0, 0)


@pytest.mark.parametrize(
    "s, p, counts, w",
    [
        ((6, 6), 5, (0, 2, 2), Fraction(2)),
        ((2, 10, 2), 7, (2, 6), Fraction(8, 3)),
        ((2, 10, 2, 10, 2), 13, (52, 44, 48), Fraction(144, 35)),
        (L11, 13, (2, 10, 12), Fraction(24)),
        ((12, 12), 11, (0, 2, 20, 48, 58), Fraction(2)),
        ((6, 6, 6), 7, (0, 4, 2), Fraction(2)),
    ],
)
def test_asymptotic_weight(s, p, counts, w):
    assert asymptotic_weight(census(s, p, counts)) == w


def test_twelve_twelve_arithmetic():
    # 128 / (8 * 4 * 2)
    assert sum((0, 2, 20, 48, 58)) == 128


def test_asymptotic_weight_seed_too_small():
    with pytest.raises(PreconditionError) as info:
        asymptotic_weight(census((2, 10, 2), 5, (0, 1)))
    assert "7" in str(info.value)


def test_required_seed_covers_small_primes(cycles):
    # 6,6,6,6 is infeasible: every copy dies at stage 5 where 5-4-1 = 0
    s = (6, 6, 6, 6)
    assert p0_asymptotic(s) == 3
    assert required_seed(s) == 5
    assert scan_census(cycles[5], s).total() == 0
    assert winf(s)[0] == 0
    with pytest.raises(PreconditionError):
        asymptotic_weight(scan_census(cycles[3], s))


@pytest.mark.parametrize(
    "s, stages, w",
    [((6, 6), (5, 7, 11, 13), Fraction(2)), ((2, 10, 2), (7, 11, 13), Fraction(8, 3))],
)
def test_weight_stage_invariant(cycles, s, stages, w):
    assert {asymptotic_weight(scan_census(cycles[p], s)) for p in stages} == {w}


@pytest.mark.parametrize(
    "s, w",
    [((2, 4, 2), 1), ((4, 2, 4), 2), ((4, 2, 4, 2, 4), 1), ((2,), 1), ((4,), 1), ((6,), 2)],
)
def test_normalization_anchors(s, w):
    assert winf(s)[0] == w


def test_total_law_after_seed(cycles):
    for s in [(6, 6), (2, 4, 2), (2, 10, 2), (12, 12)]:
        j1 = len(s)
        start = required_seed(s)
        stages = [p for p in (2, 3, 5, 7, 11, 13) if p >= start]
        totals = [scan_census(cycles[p], s).total() for p in stages]
        for (a, b), q in zip(zip(totals, totals[1:]), stages[1:]):
            assert b == (q - j1 - 1) * a


def test_subdominant_ratios():
    r = subdominant_ratios(census((6, 6), 5, (0, 2, 2)), 11)
    assert r == (1, Fraction(3 * 7, 4 * 8), Fraction(2 * 6, 4 * 8))
