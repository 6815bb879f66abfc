import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arpa_forge.designs import (
    DesignArray,
    DesignPair,
    all_ones,
    check_arpa,
    check_cpa,
    check_k_equal,
    extend_arpa,
    identity_word,
    interprets_as,
    k_equal_witness,
    pair_from_json,
    pair_from_text,
    pair_to_json,
    pair_to_text,
    pi_pair,
    pi_q,
    ratio,
    theorem3_bound,
    weight_equalities,
    weight_residuals,
)
from arpa_forge.lift import lift, materialize_lift
from arpa_forge.lp import gamma, optimal_cpa
from arpa_forge.regular import materialize, strip_common, to_z


def single(word, q, kind="arpa", params=None):
    alphabet = q if kind == "arpa" else 2
    arr = DesignArray(len(word), alphabet, ((tuple(word), 1),))
    return DesignPair(kind, arr, arr, params or (len(word), len(word), 1))


def test_array_is_canonical_multiset():
    a = DesignArray(3, 3, (((0, 1, 2), 1), ((1, 1, 1), 2), ((0, 1, 2), 1)))
    b = DesignArray.from_rows([(1, 1, 1), (0, 1, 2), (1, 1, 1), (0, 1, 2)])
    assert a == b
    assert a.R == 4
    assert a.multiplicity((1, 1, 1)) == 2


@pytest.mark.parametrize(
    "rows",
    [[], [((0, 2), 1)], [((0, 1, 2), 1)], [((0, 1), -1)]],
)
def test_array_rejects_bad_rows(rows):
    with pytest.raises(ValueError):
        DesignArray(2, 2, tuple(rows))


def test_check_k_equal_table2(table):
    left = table(2)[0]
    assert check_k_equal(left.first, left.second, 2)
    assert not check_k_equal(left.first, left.second, 3)
    assert check_k_equal(left.first, left.first, 4)
    wit = k_equal_witness(left.first, left.second, 3)
    assert len(wit["columns"]) == 3 and wit["first"] != wit["second"]


def test_check_k_equal_rejects_bad_shapes(table):
    left = table(2)[0]
    with pytest.raises(ValueError):
        check_k_equal(left.first, left.second, 5)
    with pytest.raises(ValueError):
        check_k_equal(left.first, table(2)[1].first, 2)


def test_check_cpa_table2(table):
    right = table(2)[2]
    assert check_cpa(right, 5, 4, 3).passed
    v = check_cpa(right, 5, 3, 3)
    assert v.failed == ["Delta_D"]
    assert v.witnesses["Delta_D"]["weight"] == 4


def test_check_cpa_trivial():
    pair = single(all_ones(4), 2, "cpa", (4, 4, 2))
    assert check_cpa(pair, 4, 4, 2).passed
    assert ratio(pair) == 1


def test_check_arpa_table1(table):
    left = table(1)[0]
    assert check_arpa(left, 4, 3, 2).passed
    v = check_arpa(left, 4, 2, 2)
    assert v.failed == ["Gamma_P"]


def test_check_arpa_trivial():
    pair = single(identity_word(3), 3, params=(3, 3, 3))
    assert check_arpa(pair, 3, 3, 3).passed
    assert ratio(pair) == 1


def test_check_arpa_missing_identity(table):
    left = table(1)[0]
    swapped = DesignPair("arpa", left.second, left.first, left.params)
    v = check_arpa(swapped, 4, 3, 2)
    assert "Gamma_Q" in v.failed
    assert v.as_dict()["passed"] is False


def test_ratios(table):
    assert [ratio(p) for p in table(1)] == [Fraction(1, 3), Fraction(1, 6), Fraction(1, 5)]
    assert [ratio(p) for p in table(2)] == [Fraction(1, 3), Fraction(1, 6), Fraction(1, 5)]


@pytest.mark.parametrize(
    "word,want",
    [((0, 1, 0, 2), (1, 1, 0, 0)), ((0, 1, 2, 3), (1, 1, 1, 1)), ((3, 0, 0, 3), (0, 0, 0, 1))],
)
def test_pi_q(word, want):
    assert pi_q(word) == want


def test_interprets_as(table):
    for arpa, cpa in zip(table(1), table(2)):
        assert interprets_as(arpa, cpa)
        assert ratio(arpa) == ratio(cpa)
    assert not interprets_as(table(1)[0], table(2)[1])
    for pair in table(1) + table(7):
        assert interprets_as(pair, pi_pair(pair))


@pytest.mark.parametrize("nu,k,want", [(6, 2, Fraction(1, 25)), (5, 3, Fraction(1, 25)), (5, 2, Fraction(1, 16))])
def test_theorem3_bound(nu, k, want):
    assert theorem3_bound(nu, k) == want


def test_theorem3_bound_rejects():
    with pytest.raises(ValueError):
        theorem3_bound(3, 3)


def test_weight_equalities():
    good = materialize(optimal_cpa(5, 2, 2))
    assert weight_equalities(good, 5, 2)
    assert weight_residuals(good, 5, 2) == [0, 0, 0]
    counts = dict(good.second.rows)
    counts[(0, 0, 0, 0, 0)] += 1
    bad = DesignPair("cpa", good.first, DesignArray(5, 2, tuple(counts.items())), good.params)
    assert not weight_equalities(bad, 5, 2)
    assert any(weight_residuals(bad, 5, 2))
    w = (1, 1, 0, 0)
    same = single(w, 2, "cpa", (4, 2, 2))
    assert weight_equalities(same, 4, 2)
    with pytest.raises(ValueError):
        weight_equalities(materialize(optimal_cpa(5, 3, 2)), 5, 2)


def test_extend_trivial_pair():
    base = single((0, 1), 2, params=(2, 2, 2))
    out = extend_arpa(base, 4, 4, 2)
    assert out.first.rows == (((0, 1, 2, 3), 1),)
    assert check_arpa(out, 4, 4, 2).passed
    assert ratio(out) == 1


def test_extend_optimal_pair():
    t, _ = lift(to_z(strip_common(optimal_cpa(4, 2, 2))))
    base = materialize_lift(t)
    assert ratio(base) == Fraction(1, 9)
    out = extend_arpa(base, 5, 3, 2)
    assert check_arpa(out, 5, 3, 2).passed
    assert ratio(out) == Fraction(1, 9) < gamma(5, 3, 2) == Fraction(1, 6)


def test_extend_rejects_invalid_input(table):
    with pytest.raises(ValueError):
        extend_arpa(table(1)[0], 5, 3, 2)


def test_json_and_text_roundtrip(table):
    for pair in table(1) + table(2) + table(3):
        assert pair_from_json(pair_to_json(pair)) == pair
        assert pair_from_text(pair_to_text(pair)) == pair


def test_threaded_k_equal_matches(monkeypatch, table):
    pair = table(5)[0]
    monkeypatch.setenv("ARPA_FORGE_THREADS", "1")
    serial = k_equal_witness(pair.first, pair.second, 2)
    monkeypatch.setenv("ARPA_FORGE_THREADS", "4")
    assert k_equal_witness(pair.first, pair.second, 2) == serial is None


@st.composite
def boolean_pairs(draw):
    nu = draw(st.integers(2, 5))
    words = st.tuples(*[st.integers(0, 1)] * nu)
    a = draw(st.lists(words, min_size=1, max_size=6))
    b = draw(st.lists(words, min_size=1, max_size=6))
    return DesignArray.from_rows(a, alphabet=2), DesignArray.from_rows(b, alphabet=2)


@settings(max_examples=200, deadline=None)
@given(boolean_pairs(), st.integers(1, 5))
def test_k_equal_symmetric_and_monotone(ab, k):
    a, b = ab
    k = min(k, a.columns)
    assert check_k_equal(a, b, k) == check_k_equal(b, a, k)
    if check_k_equal(a, b, k):
        assert all(check_k_equal(a, b, j) for j in range(1, k))


def test_k_equal_brute_force_definition(table):
    # compare with a literal re-implementation on every k-subset
    for pair in table(2):
        for k in range(1, pair.columns + 1):
            direct = all(
                sorted(tuple(w[j] for j in K) for w in pair.first)
                == sorted(tuple(w[j] for j in K) for w in pair.second)
                for K in itertools.combinations(range(pair.columns), k)
            )
            assert check_k_equal(pair.first, pair.second, k) == direct
