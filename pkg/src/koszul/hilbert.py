"""Koszul differentials and graded dimensions of the modules W(V,K).

For a subspace K of Wedge^2 V the module W(V,K) is the cokernel of the
composite Wedge^3 V (x) Sym -> (Wedge^2 V / K) (x) Sym of the Koszul
differential with the quotient projection; it is generated in degree 0.
Exactness of the Koszul complex turns its degree-q dimension into a
single rank:

    dim W_q = dim Im(delta_{2,q}) - rank(delta_{2,q} restricted to K),

where dim Im(delta_{2,q}) = n C(n+q, q+1) - C(n+q+1, q+2) in closed form.
The restricted matrix is the only input-dependent object, and the closed
form holds over every coefficient field, so a modular rank that attains
min(#columns, dim Im) certifies the dimension exactly over Q (hence over
C for rationally defined K); in particular certified zeros are rigorous.

The differentials follow the sign rule

    delta_p(v_1 ^ ... ^ v_p (x) f) =
        sum_j (-1)^(j-1) v_1 ^ ... v_j-hat ... ^ v_p (x) v_j f,

so e.g. delta_2(e_i ^ e_j (x) f) = e_j (x) x_i f - e_i (x) x_j f.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from .bases import multiply_rank_table, pair_rank, pair_unrank, sym_dim, triple_unrank
from .errors import InvalidInputError, KoszulError, ResourceLimitError
from .linalg import (
    DEFAULT_ORACLE_CAP,
    DEFAULT_PRIMES,
    FieldSpec,
    PrimeField,
    RankCache,
    RankCertificate,
    Rational,
    SparseMatrix,
    rank,
)
from .subspaces import SubspaceK


def koszul_differential(p: int, n: int, q: int) -> SparseMatrix:
    """Matrix of delta_{p,q}: Wedge^p V (x) Sym^q V -> Wedge^{p-1} V (x) Sym^{q+1} V.

    Bases are ordered blockwise: column (w, a) sits at w * sym_dim(n, q) + a
    with w the colex rank of the wedge factor, and likewise for rows.
    Columns carry exactly p nonzeros with values +-1.
    """
    if p not in (1, 2, 3):
        raise InvalidInputError(f"p must be 1, 2 or 3, got {p}")
    if n < 2 or q < 0:
        raise InvalidInputError(f"need n >= 2 and q >= 0, got (n, q) = ({n}, {q})")
    symq = sym_dim(n, q)
    sym1 = sym_dim(n, q + 1)
    mult = multiply_rank_table(n, q)
    span = np.arange(symq, dtype=np.int64)
    rows, cols, vals = [], [], []

    def emit(row_block: int, col_block: int, j_var: int, sign: int):
        rows.append(row_block * sym1 + mult[j_var])
        cols.append(col_block * symq + span)
        vals.append(np.full(symq, sign, dtype=np.int64))

    if p == 1:
        for i in range(n):
            rows.append(mult[i])
            cols.append(i * symq + span)
            vals.append(np.ones(symq, dtype=np.int64))
        nrows = sym1
        ncols = n * symq
    elif p == 2:
        for w in range(comb(n, 2)):
            i, j = pair_unrank(n, w)
            emit(j, w, i, 1)
            emit(i, w, j, -1)
        nrows = n * sym1
        ncols = comb(n, 2) * symq
    else:
        for w in range(comb(n, 3)):
            i, j, k = triple_unrank(n, w)
            emit(pair_rank(j, k), w, i, 1)
            emit(pair_rank(i, k), w, j, -1)
            emit(pair_rank(i, j), w, k, 1)
        nrows = comb(n, 2) * sym1
        ncols = comb(n, 3) * symq
    if not rows:
        return SparseMatrix(nrows, ncols, [])
    return SparseMatrix.from_arrays(
        nrows, ncols, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


def im_delta2_dim(n: int, q: int) -> int:
    """Closed-form dimension of the image of delta_{2,q}: by exactness it
    equals dim(V (x) Sym^{q+1}) - dim Sym^{q+2}."""
    if n < 2 or q < 0:
        raise InvalidInputError(f"need n >= 2 and q >= 0, got (n, q) = ({n}, {q})")
    return n * comb(n + q, q + 1) - comb(n + q + 1, q + 2)


def verify_im_delta2_dim(n: int, q: int, fieldspec: FieldSpec | None = None) -> RankCertificate:
    """Recompute rank(delta_{2,q}) and check it against the closed form."""
    expected = im_delta2_dim(n, q)
    matrix = koszul_differential(2, n, q)
    fieldspec = fieldspec or PrimeField(DEFAULT_PRIMES[0])
    cert = rank(matrix, fieldspec, structural_bound=expected)
    if cert.rank != expected:
        raise KoszulError(
            f"rank(delta_2) = {cert.rank} over {fieldspec.token()} disagrees "
            f"with the closed form {expected} at (n, q) = ({n}, {q})"
        )
    return cert


def hilbert_bound(n: int, q: int) -> int:
    """Sharp upper bound for dim W_q under vanishing resonance.

    C(n+q-1, q) (n-2)(n-q-3) / (q+2) for q <= n-4, zero from q = n-3 on;
    equality holds in the borderline case m = 2n-3.  Always an integer.
    """
    if n < 3:
        raise InvalidInputError(f"need n >= 3, got n={n}")
    if q < 0:
        raise InvalidInputError(f"need q >= 0, got q={q}")
    if q >= n - 3:
        return 0
    num = comb(n + q - 1, q) * (n - 2) * (n - q - 3)
    if num % (q + 2):
        raise KoszulError(f"bound formula not integral at (n, q) = ({n}, {q})")
    return num // (q + 2)


def divisorial_defect(n: int, m: int, q: int) -> int:
    """dim Im(delta_{2,q}) - m * dim Sym^q: source/target size gap of the
    restricted map.  Zero iff the map is square (the divisorial case)."""
    return im_delta2_dim(n, q) - m * sym_dim(n, q)


def restricted_delta2(subspace: SubspaceK, q: int) -> SparseMatrix:
    """Matrix of delta_{2,q} restricted to K (x) Sym^q V.

    Column (s, a) is the image of the s-th basis vector of K times the
    degree-q monomial of rank a; entries are integers for every canonical
    subspace (the integer-scaled basis is used).
    """
    n = subspace.n
    if q < 0:
        raise InvalidInputError(f"need q >= 0, got q={q}")
    symq = sym_dim(n, q)
    sym1 = sym_dim(n, q + 1)
    mult = multiply_rank_table(n, q)
    span = np.arange(symq, dtype=np.int64)
    rows, cols, vals = [], [], []
    for s, kvec in enumerate(subspace.int_basis):
        base = s * symq
        for idx, coeff in enumerate(kvec):
            if coeff == 0:
                continue
            i, j = pair_unrank(n, idx)
            rows.append(j * sym1 + mult[i])
            cols.append(base + span)
            vals.append(np.full(symq, coeff, dtype=np.int64))
            rows.append(i * sym1 + mult[j])
            cols.append(base + span)
            vals.append(np.full(symq, -coeff, dtype=np.int64))
    nrows = n * sym1
    ncols = subspace.effective_m * symq
    if not rows:
        return SparseMatrix(nrows, ncols, [])
    return SparseMatrix.from_arrays(
        nrows, ncols, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
    )


@dataclass(frozen=True)
class WDimension:
    """Graded dimension of W(V,K) in one degree, with its rank certificate."""

    q: int
    dim: int
    certificate: RankCertificate

    @property
    def certified(self) -> bool:
        return self.certificate.certified_exact

    def to_json(self) -> dict:
        return {"q": self.q, "dim": self.dim, "certificate": self.certificate.to_json()}


def _computation_fields(subspace: SubspaceK, fieldspec, primes):
    """Resolve which fields to try, honoring the field K is defined over."""
    if isinstance(subspace.field, PrimeField):
        if fieldspec is None:
            return [subspace.field]
        if fieldspec != subspace.field:
            raise InvalidInputError(
                f"subspace is defined over {subspace.field.token()}, cannot "
                f"compute over {fieldspec.token()}"
            )
        return [fieldspec]
    if fieldspec is not None:
        return [fieldspec]
    return [PrimeField(p) for p in (primes or DEFAULT_PRIMES)] + [Rational()]


def w_dim(
    subspace: SubspaceK,
    q: int,
    fieldspec: FieldSpec | None = None,
    *,
    primes=None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    cache: RankCache | None = None,
    verify: bool = False,
) -> WDimension:
    """Dimension of W_q(V, K) via the exactness shortcut.

    With ``fieldspec=None`` the computation escalates deterministically:
    modular ranks over the default primes, then the rational oracle while
    the matrix fits under ``oracle_cap``.  The first certified-exact
    answer wins; if none certifies, the last (best-effort) value is
    returned with its honest, uncertified certificate.

    ``verify=True`` additionally recomputes rank(delta_{2,q}) against the
    closed form used for the image dimension.
    """
    n = subspace.n
    matrix = restricted_delta2(subspace, q)
    image_dim = im_delta2_dim(n, q)
    bound = min(matrix.ncols, image_dim)
    result: WDimension | None = None
    for f in _computation_fields(subspace, fieldspec, primes):
        if fieldspec is None and isinstance(f, Rational) and matrix.ncols > oracle_cap:
            break  # auto mode: skip an oracle that would blow the cap
        cert = rank(matrix, f, structural_bound=bound, cache=cache, oracle_cap=oracle_cap)
        result = WDimension(q, image_dim - cert.rank, cert)
        if cert.certified_exact:
            break
    if verify:
        verify_im_delta2_dim(n, q, fieldspec)
    assert result is not None
    return result


def w_dim_alt(
    subspace: SubspaceK,
    q: int,
    fieldspec: FieldSpec | None = None,
    *,
    primes=None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> int:
    """Dimension of W_q computed from the defining presentation.

    Builds the composite Wedge^3 V (x) Sym^{q-1} -> (Wedge^2 V / K) (x) Sym^q
    (quotient projection after delta_3) and returns the codimension of its
    column space.  Must agree with :func:`w_dim` on every instance.
    """
    n = subspace.n
    if q < 0:
        raise InvalidInputError(f"need q >= 0, got q={q}")
    width = comb(n, 2)
    m = subspace.effective_m
    symq = sym_dim(n, q)
    target_dim = (width - m) * symq
    if q == 0:
        return target_dim  # Sym^{-1} source is the zero space
    proj = _quotient_projection(subspace)
    d3 = koszul_differential(3, n, q - 1)
    entries: dict[tuple[int, int], int] = {}
    for r, c, v in zip(d3.rows.tolist(), d3.cols.tolist(), d3.value_list()):
        pair_idx, mono = divmod(r, symq)
        for u, coeff in proj.get(pair_idx, ()):
            key = (u * symq + mono, c)
            entries[key] = entries.get(key, 0) + coeff * v
    triplets = [(r, c, v) for (r, c), v in sorted(entries.items()) if v != 0]
    composite = SparseMatrix(target_dim, d3.ncols, triplets)
    last: int | None = None
    for f in _computation_fields(subspace, fieldspec, primes):
        if fieldspec is None and isinstance(f, Rational) and composite.ncols > oracle_cap:
            break
        cert = rank(composite, f, structural_bound=min(composite.ncols, target_dim), oracle_cap=oracle_cap)
        last = target_dim - cert.rank
        if cert.certified_exact:
            break
    if last is None:
        raise ResourceLimitError("no computation field available under the configured caps")
    return last


def _quotient_projection(subspace: SubspaceK) -> dict[int, list[tuple[int, int]]]:
    """Column map of Wedge^2 V -> Wedge^2 V / K in quotient coordinates.

    Returns, for each pair index t, the list of (quotient row, integer
    coefficient) it projects to; rows are scaled row-wise to integers.
    """
    from .linalg import integer_scaled

    width = comb(subspace.n, 2)
    pivots = subspace.pivot_columns()
    free = [c for c in range(width) if c not in pivots]
    modulus = subspace.field.p if isinstance(subspace.field, PrimeField) else None
    columns: dict[int, list[tuple[int, int]]] = {}
    for u, fc in enumerate(free):
        rowvals = [row[fc] for row in subspace.basis]
        if modulus is None:
            scaled = integer_scaled([1] + [-v for v in rowvals])
            lead, coeffs = scaled[0], scaled[1:]
            columns.setdefault(fc, []).append((u, lead))
            for s, coeff in enumerate(coeffs):
                if coeff:
                    columns.setdefault(pivots[s], []).append((u, coeff))
        else:
            columns.setdefault(fc, []).append((u, 1))
            for s, v in enumerate(rowvals):
                if v:
                    columns.setdefault(pivots[s], []).append((u, -v % modulus))
    return columns


@dataclass(frozen=True)
class DegreeRecord:
    """One degree of a Koszul profile."""

    q: int
    dim: int
    certificate: RankCertificate | None  # None when derived, see below
    bound: int | None
    bound_attained: bool | None
    derived_from: int | None = None  # certified zero degree that forces this one

    @property
    def certified(self) -> bool:
        if self.derived_from is not None:
            return True
        return self.certificate is not None and self.certificate.certified_exact

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "dim": self.dim,
            "bound": self.bound,
            "bound_attained": self.bound_attained,
            "certified": self.certified,
            "derived_from": self.derived_from,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


@dataclass(frozen=True)
class KoszulProfile:
    """Hilbert function of W(V,K) with per-degree certificates.

    ``vanishing_degree`` is the least certified-zero degree; generation in
    degree 0 makes every later dimension zero, so records beyond it are
    derived rather than recomputed.  ``model_only`` flags subspaces defined
    over a prime field, where the complex-geometric reading does not
    literally apply.
    """

    n: int
    m: int
    field: str
    records: tuple[DegreeRecord, ...]
    vanishing_degree: int | None
    model_only: bool

    def dims(self) -> list[int]:
        return [r.dim for r in self.records]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "field": self.field,
            "records": [r.to_json() for r in self.records],
            "vanishing_degree": self.vanishing_degree,
            "model_only": self.model_only,
        }


def _profile_bound(n: int, q: int) -> int | None:
    return hilbert_bound(n, q) if n >= 3 else None


def hilbert_profile(
    subspace: SubspaceK,
    q_max: int | None = None,
    fieldspec: FieldSpec | None = None,
    *,
    primes=None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    cache: RankCache | None = None,
    threads: int = 1,
) -> KoszulProfile:
    """Graded dimensions of W(V,K) for q = 0..q_max with certificates.

    The default q_max is n-3 (further degrees are redundant once a zero
    is certified).  Computation stops at the first certified zero; later
    records are derived from generation in degree 0.  With threads > 1
    the degrees are evaluated concurrently and the assembled profile is
    identical to the sequential one.
    """
    n = subspace.n
    if q_max is None:
        q_max = max(n - 3, 0)
    if q_max < 0:
        raise InvalidInputError(f"need q_max >= 0, got {q_max}")

    def compute(q: int) -> WDimension:
        return w_dim(
            subspace, q, fieldspec, primes=primes, oracle_cap=oracle_cap, cache=cache
        )

    results: dict[int, WDimension] = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for q, res in zip(range(q_max + 1), pool.map(compute, range(q_max + 1))):
                results[q] = res
    records: list[DegreeRecord] = []
    vanishing: int | None = None
    for q in range(q_max + 1):
        bound = _profile_bound(n, q)
        if vanishing is not None:
            records.append(
                DegreeRecord(q, 0, None, bound, None if bound is None else bound == 0, vanishing)
            )
            continue
        res = results.get(q)
        if res is None:
            res = compute(q)
        attained = None if bound is None else res.dim == bound
        records.append(DegreeRecord(q, res.dim, res.certificate, bound, attained))
        if res.dim == 0 and res.certified:
            vanishing = q
    return KoszulProfile(
        n,
        subspace.effective_m,
        subspace.field.token(),
        tuple(records),
        vanishing,
        isinstance(subspace.field, PrimeField),
    )
