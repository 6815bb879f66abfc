import itertools
from fractions import Fraction

import pytest

from arpa_forge.designs import check_cpa, ratio, theorem3_bound
from arpa_forge.exactmath import binom
from arpa_forge.lp import (
    Base,
    NoClosedForm,
    OptSequence,
    base_value,
    basic_solution,
    closed_form,
    constraint_residuals,
    delta_by_bases,
    delta_opt,
    enumerate_bases,
    gamma,
    is_base,
    is_feasible_base,
    is_feasible_by_sign,
    lp_matrix,
    lp_objective,
    matrix_rank,
    min_rstar,
    optimal_cpa,
    sequence_multiplicities,
    sequence_value,
)
from arpa_forge.regular import check_eq4, materialize


def grid(nu_max, nu_min=2):
    for nu in range(nu_min, nu_max + 1):
        for d in range(1, nu):
            for k in range(1, d + 1):
                yield nu, d, k


def test_lp_matrix_entries():
    M = lp_matrix(4, 2, 1)
    assert len(M) == 2 and len(M[0]) == 4 + 2 + 1
    assert M[0][4] == 1 and M[1][4] == 0
    M = lp_matrix(5, 3, 2)
    assert [row[5] for row in M] == [1, 0, 0]
    assert M[2][2] == -binom(3, 0)


def test_lp_matrix_full_rank():
    assert matrix_rank(lp_matrix(5, 3, 2)) == 3
    for nu, d, k in grid(7):
        assert matrix_rank(lp_matrix(nu, d, k)) == k + 1


def test_lp_matrix_rejects():
    with pytest.raises(ValueError):
        lp_matrix(4, 4, 2)
    with pytest.raises(ValueError):
        lp_matrix(4, 2, 3)


def test_is_base_examples():
    assert is_base({1}, {0, 3}, 2)
    assert not is_base({2}, {2, 3}, 2)
    assert not is_base({0, 1}, {3}, 1)


def test_is_base_matches_column_independence():
    for nu, d, k in grid(6):
        M = lp_matrix(nu, d, k)
        cols = [("y", i) for i in range(nu)] + [("x", i) for i in range(d + 1)]
        bases = set(enumerate_bases(nu, d, k))
        for chosen in itertools.combinations(range(len(cols)), k + 1):
            sub = [[M[h][c] for c in chosen] for h in range(k + 1)]
            Y = {cols[c][1] for c in chosen if cols[c][0] == "y"}
            X = {cols[c][1] for c in chosen if cols[c][0] == "x"}
            independent = matrix_rank(sub) == k + 1
            assert independent == is_base(Y, X, k)
            assert independent == (Base(Y, X) in bases)


def test_basic_solution_examples():
    sol = basic_solution(Base({0}, {2}), 4)
    assert sol == {("y", 0): 1, ("x", 2): Fraction(1, 3)}
    sol = basic_solution(Base({1}, {0, 3}), 5)
    assert sol == {("x", 0): Fraction(8, 3), ("y", 1): 1, ("x", 3): Fraction(1, 3)}
    assert constraint_residuals(sol, 5, 3, 2) == [0, 0, 0]


def test_feasibility_examples():
    assert is_feasible_base(Base({1}, {0, 3}), 2)
    assert not is_feasible_base(Base({0, 1}, {3}), 2)
    assert basic_solution(Base({0, 1}, {3}), 5)[("y", 0)] < 0
    for nu, d, k in grid(6):
        if k != 1:
            continue
        feas = {b for b in enumerate_bases(nu, d, k) if is_feasible_base(b, k)}
        want = {Base({a}, {b}) for b in range(d + 1) for a in range(b)}
        assert feas == want
    with pytest.raises(ValueError):
        is_feasible_base(Base({0}, {0}), 1)


def test_feasible_objective_matches_lp_objective():
    for nu, d, k in grid(6):
        for b in enumerate_bases(nu, d, k):
            if is_feasible_base(b, k):
                assert base_value(b, nu) == lp_objective(basic_solution(b, nu), nu)


@pytest.mark.parametrize(
    "nu,d,k,value,seq",
    [
        (5, 4, 1, Fraction(4, 5), (0, 4, 5)),
        (5, 4, 2, Fraction(4, 9), (0, 2, 4, 5)),
        (6, 3, 2, Fraction(1, 10), (0, 1, 3, 6)),
        (5, 2, 2, Fraction(1, 16), (0, 1, 2, 5)),
    ],
)
def test_delta_opt_examples(nu, d, k, value, seq):
    got, s = delta_opt(nu, d, k)
    assert got == value and s.i == seq


def test_delta_opt_tie_is_real():
    a = sequence_value(OptSequence((0, 1, 3, 6)))
    b = sequence_value(OptSequence((0, 2, 3, 6)))
    assert a == b == Fraction(1, 10)
    _, winners = delta_by_bases(6, 3, 2)
    assert len(winners) == 2


def test_delta_opt_rejects():
    with pytest.raises(ValueError):
        delta_opt(5, 5, 2)
    with pytest.raises(ValueError):
        delta_opt(5, 2, 3)


def test_opt_sequence_validation():
    with pytest.raises(ValueError):
        OptSequence((1, 2, 3))
    with pytest.raises(ValueError):
        OptSequence((0, 2, 2, 5))
    s = OptSequence((0, 1, 3, 6))
    assert (s.nu, s.d, s.k) == (6, 3, 2)


@pytest.mark.parametrize(
    "seq,want", [((0, 1, 3, 5), 3), ((0, 2, 4, 5), 8), ((0, 2, 4), 3)]
)
def test_min_rstar_examples(seq, want):
    assert min_rstar(OptSequence(seq)) == want


def test_min_rstar_is_minimal():
    for nu, d, k in grid(7):
        _, s = delta_opt(nu, d, k)
        mults = sequence_multiplicities(s)
        m = min_rstar(s)
        assert all((m * x).denominator == 1 for x in mults)
        for smaller in range(1, m):
            assert any((smaller * x).denominator != 1 for x in mults)


def test_optimal_cpa_examples():
    v = optimal_cpa(5, 2, 2)
    assert v.y == (0, 3, 0, 0, 0, 1) and v.x == (6, 0, 1) and v.R == 16
    v = optimal_cpa(5, 3, 1)
    assert v.y == (4, 0, 0, 0, 0, 6) and v.x == (0, 0, 0, 1) and v.R == 10
    assert Fraction(v.r_star, v.R) == Fraction(3, 5)
    v = optimal_cpa(5, 4, 3)
    assert check_eq4(v, 3)
    assert Fraction(v.r_star, v.R) == delta_opt(5, 4, 3)[0]


def test_optimal_cpa_materializes_to_optimum():
    for nu, d, k in grid(6):
        pair = materialize(optimal_cpa(nu, d, k))
        assert check_cpa(pair, nu, d, k).passed
        assert ratio(pair) == delta_opt(nu, d, k)[0]


def test_optimal_cpa_rejects_foreign_sequence():
    with pytest.raises(ValueError):
        optimal_cpa(5, 3, 2, seq=OptSequence((0, 1, 4, 5)))
    with pytest.raises(ValueError):
        optimal_cpa(5, 3, 2, seq=OptSequence((0, 1, 3, 5)), r_star=1)


@pytest.mark.parametrize(
    "q,p,k,want",
    [(6, 2, 2, Fraction(1, 25)), (5, 3, 1, Fraction(3, 5)), (5, 3, 2, Fraction(1, 6)), (4, 2, 2, Fraction(1, 9))],
)
def test_closed_form_examples(q, p, k, want):
    assert closed_form(q, p, k) == want


def test_closed_form_unknown():
    with pytest.raises(NoClosedForm):
        closed_form(6, 4, 3)


def test_closed_form_agrees_everywhere():
    for q in range(2, 13):
        for p in range(1, q):
            for k in range(1, p + 1):
                try:
                    cf = closed_form(q, p, k)
                except NoClosedForm:
                    continue
                assert cf == delta_opt(q, p, k)[0], (q, p, k)


@pytest.mark.parametrize(
    "q,p,k,want", [(7, 7, 3, 1), (4, 3, 2, Fraction(1, 3)), (5, 3, 3, Fraction(1, 25))]
)
def test_gamma_examples(q, p, k, want):
    assert gamma(q, p, k) == want


def test_gamma_rejects():
    with pytest.raises(ValueError):
        gamma(3, 4, 1)


def test_bound_is_tight_when_d_equals_k():
    for nu in range(2, 10):
        for k in range(1, nu):
            v = optimal_cpa(nu, k, k)
            assert Fraction(v.r_star, v.R) == theorem3_bound(nu, k)


def test_monotone_in_reduced_alphabet():
    for q in range(3, 11):
        for p in range(2, q):
            for k in range(1, p):
                assert gamma(q, p, k) >= gamma(q - p + k, k, k)


def test_feasible_bases_are_never_degenerate():
    for nu, d, k in grid(7):
        for b in enumerate_bases(nu, d, k):
            if is_feasible_by_sign(b, nu):
                assert all(v > 0 for v in basic_solution(b, nu).values())
