import random

import pytest
from corpus import random_structure, regular_corpus, zero_submatrix_widths
from hypothesis import given, settings
from hypothesis import strategies as st

from frcode import (
    BudgetExceeded,
    dual,
    fixture,
    from_matrix,
    full_hierarchy,
    hierarchy_via_dual,
    n_value,
    pareto_points,
    supported_file_size,
    supported_file_size_bruteforce,
)
from frcode.hierarchy import ParetoPoint, min_k_union, min_union_witness, staircase, staircase_from

EX2_M = (0, 4, 7, 9, 10, 10)
EX2_DUAL_M = (0, 2, 3, 3, 4, 4, 4, 5, 5, 5, 5)
# frozen from supported_file_size_bruteforce and cross-checked with zero_submatrix_widths
EX3_M = (0, 2, 3, 3, 4, 5, 6, 6, 7, 7, 8, 9, 9, 10, 10, 10)


@pytest.fixture
def ex2():
    return fixture("example2")


@pytest.fixture
def ex3():
    return fixture("example3-petersen")


@pytest.mark.parametrize("k,expected", [(1, 4), (2, 7), (3, 9), (4, 10), (5, 10)])
def test_supported_file_size_example2(ex2, k, expected):
    assert supported_file_size(ex2, k) == expected


def test_supported_file_size_example3(ex3):
    assert supported_file_size(ex3, 6) == 6
    assert supported_file_size(ex3, 15) == 10


def test_bruteforce_small_cases(ex2):
    assert supported_file_size_bruteforce(ex2, 1) == 4
    assert supported_file_size_bruteforce(from_matrix([[1]]), 1) == 1


def test_bruteforce_cap(ex3):
    with pytest.raises(BudgetExceeded):
        supported_file_size_bruteforce(ex3, 7, cap=100)


@pytest.mark.parametrize("k", [0, 6, -1])
def test_k_out_of_range(ex2, k):
    with pytest.raises(ValueError):
        supported_file_size(ex2, k)


def test_search_agrees_with_bruteforce_on_random_structures():
    rng = random.Random(2024)
    for _ in range(200):
        s = random_structure(rng)
        for k in range(1, s.num_blocks + 1):
            assert supported_file_size(s, k) == supported_file_size_bruteforce(s, k)


def test_full_hierarchy_examples(ex2):
    assert full_hierarchy(ex2).m == EX2_M
    assert full_hierarchy(dual(ex2)).m == EX2_DUAL_M
    assert full_hierarchy(fixture("example2-dual")).m == EX2_DUAL_M
    assert full_hierarchy(from_matrix([[1, 1, 1]] * 3)).m == (0, 3, 3, 3)


def test_example3_hierarchy_against_oracles(ex3):
    assert full_hierarchy(ex3).m == EX3_M
    assert tuple(10 - w for w in zero_submatrix_widths(ex3.to_matrix())) == EX3_M


def test_n_values_example2_dual(ex2):
    d = dual(ex2)
    assert n_value(d, 1) == 3
    assert n_value(d, 7) == 0
    assert [n_value(d, l) for l in range(11)] == [5, 3, 2, 2, 1, 1, 1, 0, 0, 0, 0]
    assert n_value(ex2, 0) == 10
    with pytest.raises(ValueError):
        n_value(ex2, 6)


def test_hierarchy_via_dual_examples(ex2):
    assert hierarchy_via_dual(ex2).m == EX2_M
    assert hierarchy_via_dual(from_matrix([[1]])).m == (0, 1)


def test_hierarchy_via_dual_regular_corpus():
    for _, s in regular_corpus(100, seed=7):
        h = full_hierarchy(s)
        assert hierarchy_via_dual(s) == h
        assert h.m[1:] == tuple(supported_file_size_bruteforce(s, k) for k in range(1, s.num_blocks + 1))


def test_duality_holds_for_heterogeneous_structures():
    rng = random.Random(99)
    for _ in range(100):
        s = random_structure(rng)
        assert hierarchy_via_dual(s) == full_hierarchy(s)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_hierarchy_invariants(n, v, data):
    m = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=v, max_size=v), min_size=n, max_size=n))
    s = from_matrix(m)
    h = full_hierarchy(s)
    sizes = s.row_sums()
    assert h.m[0] == 0
    assert h.m[1] == min(sizes)
    assert all(a <= b for a, b in zip(h.m, h.m[1:]))
    assert all(b - a <= max(sizes) for a, b in zip(h.m, h.m[1:]))
    for k in range(1, n + 1):
        assert n_value(s, k) + h.m[k] == v
    # zero-submatrix characterisation
    assert list(h.n_vals) == zero_submatrix_widths(m)
    # v = N_0 > N_1 >= N_2 >= ... (the first step is strict unless a block is empty)
    nv = h.n_vals
    assert nv[0] == v
    assert all(a >= b for a, b in zip(nv, nv[1:]))
    assert (nv[1] < nv[0]) == (min(sizes) > 0)


def test_regular_chain_endpoints():
    for (n, alpha, v, rho), s in regular_corpus(60, seed=3):
        h = full_hierarchy(s)
        assert h.m[1] == alpha and h.m[n] == v
        hd = full_hierarchy(dual(s))
        assert hd.m[1] == rho and hd.m[v] == n
        nv = h.n_vals
        assert nv[0] == v and nv[1] < v


def test_parallel_matches_serial(ex3):
    for k in (3, 6, 9):
        assert supported_file_size(ex3, k, workers=3) == EX3_M[k]


def test_budget_enforced(ex3):
    with pytest.raises(BudgetExceeded):
        supported_file_size(ex3, 6, budget=50)
    with pytest.raises(BudgetExceeded):
        full_hierarchy(ex3, budget=200)


def test_budget_env(monkeypatch, ex3):
    monkeypatch.setenv("FRCODE_BUDGET", "30")
    with pytest.raises(BudgetExceeded):
        supported_file_size(ex3, 6)


def test_visit_count_deterministic(ex3):
    assert min_k_union(ex3.masks, 6) == min_k_union(ex3.masks, 6)


def test_witness_is_lexicographically_first(ex3):
    w = min_union_witness(ex3, 6)
    assert w == (0, 1, 2, 3, 4, 9)
    import itertools

    first = next(c for c in itertools.combinations(range(15), 6)
                 if len(frozenset().union(*(ex3.rows[i] for i in c))) == 6)
    assert w == first


def test_pareto_example2(ex2):
    # N_k(C) = 10 - M_k from the printed hierarchy; N_l(C^t) from the printed list
    n_c = [10, 6, 3, 1, 0, 0]
    n_ct = [5, 3, 2, 2, 1, 1, 1, 0, 0, 0, 0]
    expected = [
        (k0, n_c[k0]) for k0 in range(6)
        if n_ct[n_c[k0]] == k0
        and all(n_c[k] < n_c[k0] for k in range(k0 + 1, 6))
        and all(n_ct[l] < n_ct[n_c[k0]] for l in range(n_c[k0] + 1, 11))
    ]
    pts = pareto_points(ex2)
    assert [(p.k0, p.l0) for p in pts] == expected
    assert expected == [(0, 10), (1, 6), (2, 3), (3, 1), (5, 0)]
    assert [p.boundary for p in pts] == [True, False, False, False, True]


def test_pareto_all_ones():
    s = from_matrix([[1] * 4] * 3)
    st_ = staircase(s)
    assert st_.n_primal == (4, 0, 0, 0)
    assert [(p.k0, p.l0) for p in st_.points] == [(0, 4), (3, 0)]
    assert all(p.boundary for p in st_.points)


def test_pareto_example3_against_zero_submatrix_oracle(ex3):
    m = ex3.to_matrix()
    n_c = zero_submatrix_widths(m)
    n_ct = zero_submatrix_widths([list(c) for c in zip(*m)])
    pts = pareto_points(ex3)
    for p in pts:
        assert p.l0 == n_c[p.k0] and p.k0 == n_ct[p.l0]
        assert all(n_c[k] < n_c[p.k0] for k in range(p.k0 + 1, 16))
        assert all(n_ct[l] < n_ct[p.l0] for l in range(p.l0 + 1, 11))
    candidates = [k for k in range(16) if n_ct[n_c[k]] == k
                  and all(n_c[j] < n_c[k] for j in range(k + 1, 16))
                  and all(n_ct[l] < n_ct[n_c[k]] for l in range(n_c[k] + 1, 11))]
    assert [p.k0 for p in pts] == candidates
    assert [p.k0 for p in pts] == sorted(p.k0 for p in pts)


def test_no_touching_vertices_on_corpus():
    for _, s in regular_corpus(40, seed=12):
        assert staircase(s).touching == ()


def test_staircase_flags_touching():
    # hand-made sequences where equality holds but strictness fails at k0 = 1
    st_ = staircase_from((2, 1, 1), (2, 1, 0))
    assert (1, 1) in st_.touching
    assert ParetoPoint(1, 1) not in st_.points


def test_hierarchy_table(ex2):
    assert full_hierarchy(ex2).to_table().splitlines()[:3] == ["k M_k N_k", "1 4 6", "2 7 3"]
