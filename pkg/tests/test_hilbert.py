"""Koszul differentials and graded dimensions of W(V,K)."""

from math import comb

import pytest

from _oracles import gauss_rank_rational
from koszul.bases import monomial_rank, sym_dim
from koszul.errors import InvalidInputError
from koszul.hilbert import (
    DegreeRecord,
    KoszulProfile,
    divisorial_defect,
    hilbert_bound,
    hilbert_profile,
    im_delta2_dim,
    koszul_differential,
    restricted_delta2,
    verify_im_delta2_dim,
    w_dim,
    w_dim_alt,
)
from koszul.linalg import DEFAULT_PRIMES, PrimeField, Rational
from koszul.subspaces import (
    full_K,
    heisenberg_K,
    random_K,
    subspace_from_rows,
    weyman_K,
    zero_K,
)


def entries_of(matrix, col):
    return sorted(
        (int(r), int(v))
        for r, c, v in zip(matrix.rows, matrix.cols, matrix.value_list())
        if c == col
    )


def test_delta2_sign_rule():
    # delta_2(e_0 ^ e_1 (x) 1) = e_1 (x) x_0 - e_0 (x) x_1 for n = 3
    d = koszul_differential(2, 3, 0)
    assert d.shape == (9, 3)
    row_plus = 1 * sym_dim(3, 1) + monomial_rank((1, 0, 0))
    row_minus = 0 * sym_dim(3, 1) + monomial_rank((0, 1, 0))
    assert entries_of(d, 0) == sorted([(row_plus, 1), (row_minus, -1)])


def test_delta_column_counts():
    for n, q in [(3, 0), (4, 2), (5, 1)]:
        d2 = koszul_differential(2, n, q)
        per_col = {}
        for c, v in zip(d2.cols.tolist(), d2.value_list()):
            per_col.setdefault(c, []).append(v)
        assert all(sorted(vs) == [-1, 1] for vs in per_col.values())
        d3 = koszul_differential(3, n, q)
        counts = {}
        for c in d3.cols.tolist():
            counts[c] = counts.get(c, 0) + 1
        assert set(counts.values()) == {3}


def test_koszul_complex_property():
    # delta_{1,q+1} . delta_{2,q} = 0 and delta_{2,q+1} . delta_{3,q} = 0
    for n in range(2, 6):
        for q in range(0, 4):
            d2 = koszul_differential(2, n, q)
            d1 = koszul_differential(1, n, q + 1)
            assert d1.multiply(d2).nnz == 0
            if n >= 3:
                d3 = koszul_differential(3, n, q)
                d2next = koszul_differential(2, n, q + 1)
                assert d2next.multiply(d3).nnz == 0


def test_delta_validation():
    with pytest.raises(InvalidInputError):
        koszul_differential(4, 3, 0)
    with pytest.raises(InvalidInputError):
        koszul_differential(2, 3, -1)


def test_im_delta2_dim_values():
    assert im_delta2_dim(3, 0) == 3
    assert im_delta2_dim(5, 1) == 40
    assert im_delta2_dim(5, 2) == 105 == 7 * sym_dim(5, 2)


def test_im_delta2_dim_matches_rational_oracle():
    for n, q in [(3, 0), (3, 1), (4, 0), (4, 1), (5, 0)]:
        dense = koszul_differential(2, n, q).to_dense_rows()
        assert gauss_rank_rational(dense) == im_delta2_dim(n, q)


def test_verify_im_delta2_dim():
    for field in (Rational(), PrimeField(DEFAULT_PRIMES[0])):
        cert = verify_im_delta2_dim(4, 2, field)
        assert cert.rank == im_delta2_dim(4, 2)
        assert cert.certified_exact


def test_hilbert_bound_tables():
    assert [hilbert_bound(5, q) for q in range(3)] == [3, 5, 0]
    assert [hilbert_bound(6, q) for q in range(4)] == [6, 16, 21, 0]
    assert [hilbert_bound(7, q) for q in range(5)] == [10, 35, 70, 84, 0]
    assert hilbert_bound(3, 0) == 0
    assert hilbert_bound(9, 12) == 0


def test_hilbert_bound_integrality_and_errors():
    for n in range(3, 14):
        for q in range(0, n):
            hilbert_bound(n, q)  # must not raise (always an integer)
    with pytest.raises(InvalidInputError):
        hilbert_bound(2, 0)
    with pytest.raises(InvalidInputError):
        hilbert_bound(5, -1)


def test_divisorial_defect():
    for n in range(3, 9):
        m = 2 * n - 3
        assert divisorial_defect(n, m, n - 3) == 0
        for q in range(0, max(n - 3, 0)):
            assert divisorial_defect(n, m, q) == hilbert_bound(n, q)
            assert divisorial_defect(n, m, q) > 0
    assert divisorial_defect(5, 7, 0) == 3
    assert divisorial_defect(5, 7, 1) == 5


def test_restricted_full_K_has_delta2_rank():
    for n, q in [(3, 1), (4, 1)]:
        K = full_K(n)
        restricted = restricted_delta2(K, q)
        assert restricted.shape == koszul_differential(2, n, q).shape
        assert gauss_rank_rational(restricted.to_dense_rows()) == im_delta2_dim(n, q)


def test_restricted_zero_K_is_empty():
    restricted = restricted_delta2(zero_K(4), 2)
    assert restricted.shape == (4 * sym_dim(4, 3), 0)
    assert restricted.nnz == 0


def test_w_dim_degree_zero_anchor():
    for n, m, seed in [(4, 3, 0), (5, 6, 1), (6, 9, 2)]:
        K = random_K(n, m, seed)
        res = w_dim(K, 0)
        assert res.dim == comb(n, 2) - m
        assert res.certified


def test_w_dim_weyman_five():
    K = weyman_K(5)
    dims = [w_dim(K, q).dim for q in range(3)]
    assert dims == [3, 5, 0]
    assert all(w_dim(K, q).certified for q in range(3))


def test_w_dim_zero_K_n3():
    res = w_dim(zero_K(3), 1, Rational())
    assert res.dim == 8 == im_delta2_dim(3, 1)
    assert res.certificate.mode == "rational-exact"


def test_w_dim_full_K_vanishes():
    for q in range(3):
        res = w_dim(full_K(4), q)
        assert res.dim == 0 and res.certified


def test_heisenberg_injective_at_zero():
    K = heisenberg_K(2)
    restricted = restricted_delta2(K, 0)
    assert restricted.shape == (4 * sym_dim(4, 1), 5)
    assert gauss_rank_rational(restricted.to_dense_rows()) == 5


def test_w_dim_alt_agrees_small():
    assert w_dim_alt(full_K(4), 1) == 0
    assert w_dim_alt(zero_K(3), 2, Rational()) == w_dim(zero_K(3), 2, Rational()).dim
    for seed in range(12):
        n = 3 + seed % 3
        m = seed % (comb(n, 2) + 1)
        K = random_K(n, m, seed + 10)
        q = seed % 3
        assert w_dim_alt(K, q, Rational()) == w_dim(K, q, Rational()).dim


def test_w_dim_alt_degree_zero():
    K = random_K(5, 4, 3)
    assert w_dim_alt(K, 0) == comb(5, 2) - 4


def test_monotone_under_inclusion():
    # adding generators can only shrink the module
    for seed in range(8):
        n = 4 + seed % 2
        small = random_K(n, 3, seed + 20)
        extra = random_K(n, 2, seed + 120)
        big = subspace_from_rows(n, [list(r) for r in small.basis] + [list(r) for r in extra.basis])
        for q in range(3):
            assert w_dim(small, q).dim >= w_dim(big, q).dim


def test_profile_weyman_six():
    prof = hilbert_profile(weyman_K(6))
    assert prof.dims() == [6, 16, 21, 0]
    assert prof.vanishing_degree == 3
    assert all(r.certified for r in prof.records)
    assert all(r.bound_attained for r in prof.records)
    assert not prof.model_only


def test_profile_zero_K_no_vanishing():
    prof = hilbert_profile(zero_K(4), q_max=3)
    assert prof.dims() == [6, 20, 45, 84]
    assert prof.vanishing_degree is None
    assert all(r.bound_attained is False for r in prof.records[:1])


def test_profile_heisenberg_truncates():
    prof = hilbert_profile(heisenberg_K(2), q_max=4)
    assert prof.dims() == [1, 0, 0, 0, 0]
    assert prof.vanishing_degree == 1
    assert [r.derived_from for r in prof.records] == [None, None, 1, 1, 1]
    assert all(r.certified for r in prof.records)


def test_profile_threads_identical():
    K = weyman_K(5)
    assert hilbert_profile(K, q_max=3, threads=2) == hilbert_profile(K, q_max=3)


def test_profile_json():
    prof = hilbert_profile(weyman_K(4))
    data = prof.to_json()
    assert data["n"] == 4 and data["m"] == 5
    assert [r["dim"] for r in data["records"]] == [1, 0]
    assert data["records"][1]["certificate"]["certified_exact"] is True


def test_prime_defined_subspace_is_model_only():
    K = random_K(4, 5, 7, PrimeField(DEFAULT_PRIMES[1]))
    prof = hilbert_profile(K, q_max=1)
    assert prof.model_only
    with pytest.raises(InvalidInputError):
        w_dim(K, 0, Rational())
    with pytest.raises(InvalidInputError):
        w_dim(K, 0, PrimeField(DEFAULT_PRIMES[0]))


def test_w_dim_verify_mode():
    res = w_dim(weyman_K(4), 1, verify=True)
    assert res.dim == 0 and res.certified
