"""Exact sparse linear algebra with certification semantics.

Rank and nullspace are computed either over the rationals (fraction-free
elimination on a dense copy, the ground-truth oracle) or over a prime
field F_p with p an odd prime below 2^31, so that all intermediate
products fit a 64-bit machine word with delayed reduction.

Certification: for an integer matrix, the rank mod p never exceeds the
rational rank (a nonzero minor mod p is nonzero over Z), so modular ranks
are certified lower bounds.  They become certified exact when they attain
a structural upper bound -- either min(nrows, ncols) or a cap supplied by
the caller.  Rational ranks are exact by construction.

The modular engine splits a matrix into connected components of its
bipartite nonzero pattern, eliminates small components sparsely with
Markowitz-style pivoting, and runs larger ones through a panel-blocked
dense echelon whose trailing updates are exact float64 matrix products
(entries are 16-bit split so every dot product stays below 2^53).
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

DEFAULT_PRIMES: tuple[int, ...] = (2147483647, 2147483629, 2147483587)
DEFAULT_ORACLE_CAP = 2000  # max columns for dense rational elimination

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# mod-p engine tuning
_PANEL = 128               # keeps every blocked dot product exact in float64
_SPARSE_NNZ = 1500         # components at most this sparse stay on the Markowitz path
_DENSE_CELLS = 40_000_000  # densification limit (int64 cells)
_FALLBACK_NNZ = 500_000    # Markowitz fallback limit for oversized components


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 64-bit range."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Rational:
    """Field marker: exact arithmetic over Q."""

    def token(self) -> str:
        return "rational"

    def to_json(self):
        return "rational"


@dataclass(frozen=True)
class PrimeField:
    """Field marker: F_p for an odd prime p < 2^31."""

    p: int

    def __post_init__(self):
        if not 2 < self.p < 2**31:
            raise InvalidInputError(f"prime must satisfy 2 < p < 2^31, got {self.p}")
        if not is_prime(self.p):
            raise InvalidInputError(f"{self.p} is not prime")

    def token(self) -> str:
        return f"prime:{self.p}"

    def to_json(self):
        return {"prime": self.p}


FieldSpec = Union[Rational, PrimeField]


def field_from_json(data) -> FieldSpec:
    if data == "rational":
        return Rational()
    if isinstance(data, dict) and set(data) == {"prime"}:
        return PrimeField(int(data["prime"]))
    raise InvalidInputError(f"unrecognized field spec: {data!r}")


@dataclass(frozen=True)
class RankCertificate:
    """A rank value together with how it was obtained and what it proves."""

    rank: int
    mode: str  # "rational-exact" | "single-prime" | "multi-prime"
    primes: tuple[int, ...] = ()
    certified_lower_bound: bool = True
    certified_exact: bool = False
    structural_bound: int | None = None

    def __post_init__(self):
        if self.mode == "rational-exact" and not self.certified_exact:
            raise InvalidInputError("rational-exact certificates are always exact")
        if self.certified_exact and not self.certified_lower_bound:
            raise InvalidInputError("exact implies lower bound")
        if self.mode in ("single-prime", "multi-prime") and not self.primes:
            raise InvalidInputError("modular certificate without primes")

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "mode": self.mode,
            "primes": list(self.primes),
            "certified_lower_bound": self.certified_lower_bound,
            "certified_exact": self.certified_exact,
            "structural_bound": self.structural_bound,
        }

    @staticmethod
    def from_json(data: dict) -> "RankCertificate":
        return RankCertificate(
            rank=int(data["rank"]),
            mode=data["mode"],
            primes=tuple(int(p) for p in data.get("primes", [])),
            certified_lower_bound=bool(data["certified_lower_bound"]),
            certified_exact=bool(data["certified_exact"]),
            structural_bound=data.get("structural_bound"),
        )


class SparseMatrix:
    """Immutable sparse matrix in triplet form with a compiled column view.

    Values are exact: Python ints or Fractions.  Integer matrices with
    entries fitting int64 are carried as numpy arrays; anything else stays
    in object storage.  Instances should not be mutated after creation.
    """

    __slots__ = ("nrows", "ncols", "rows", "cols", "vals")

    def __init__(self, nrows: int, ncols: int, triplets: Iterable[tuple] = (), *, _raw=None):
        if nrows < 0 or ncols < 0:
            raise InvalidInputError("negative matrix extent")
        self.nrows = nrows
        self.ncols = ncols
        if _raw is not None:
            self.rows, self.cols, self.vals = _raw
            return
        rows, cols, vals = [], [], []
        for r, c, v in triplets:
            if v == 0:
                raise InvalidInputError(f"explicit zero entry at ({r}, {c})")
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise InvalidInputError(f"entry ({r}, {c}) out of range")
            rows.append(r)
            cols.append(c)
            vals.append(v)
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        if all(isinstance(v, int) and abs(v) < 2**62 for v in vals):
            self.vals = np.asarray(vals, dtype=np.int64)
        else:
            self.vals = list(vals)
        self._check_duplicates()

    @staticmethod
    def from_arrays(nrows: int, ncols: int, rows: np.ndarray, cols: np.ndarray, vals: np.ndarray) -> "SparseMatrix":
        """Fast construction from parallel int64 arrays (still validated)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.int64)
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols:
                raise InvalidInputError("entry out of range")
            if not vals.all():
                raise InvalidInputError("explicit zero entry")
        m = SparseMatrix(nrows, ncols, _raw=(rows, cols, vals))
        m._check_duplicates()
        return m

    def _check_duplicates(self):
        if len(self.rows) < 2:
            return
        order = np.lexsort((self.rows, self.cols))
        r, c = self.rows[order], self.cols[order]
        if np.any((r[1:] == r[:-1]) & (c[1:] == c[:-1])):
            raise InvalidInputError("duplicate (row, col) entry")

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def nnz(self) -> int:
        return len(self.rows)

    def is_integer(self) -> bool:
        return isinstance(self.vals, np.ndarray) or all(
            isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in self.vals
        )

    def value_list(self) -> list:
        return self.vals.tolist() if isinstance(self.vals, np.ndarray) else list(self.vals)

    def transpose(self) -> "SparseMatrix":
        vals = self.vals.copy() if isinstance(self.vals, np.ndarray) else list(self.vals)
        return SparseMatrix(self.ncols, self.nrows, _raw=(self.cols.copy(), self.rows.copy(), vals))

    def to_dense_rows(self) -> list[list]:
        dense = [[0] * self.ncols for _ in range(self.nrows)]
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.value_list()):
            dense[r][c] = v
        return dense

    def cleared_to_integers(self) -> "SparseMatrix":
        """Scale each column by the lcm of its denominators (rank-preserving)."""
        if self.is_integer():
            vals = self.vals if isinstance(self.vals, np.ndarray) else [int(v) for v in self.vals]
            if isinstance(vals, np.ndarray):
                return self
            return SparseMatrix(self.nrows, self.ncols, _raw=(self.rows, self.cols, vals))
        scale: dict[int, int] = {}
        for c, v in zip(self.cols.tolist(), self.vals):
            f = Fraction(v)
            scale[c] = lcm(scale.get(c, 1), f.denominator)
        vals = [int(Fraction(v) * scale[c]) for c, v in zip(self.cols.tolist(), self.vals)]
        out = SparseMatrix(self.nrows, self.ncols, _raw=(self.rows, self.cols, vals))
        if all(abs(v) < 2**62 for v in vals):
            out.vals = np.asarray(vals, dtype=np.int64)
        return out

    def multiply(self, other: "SparseMatrix") -> "SparseMatrix":
        """Exact matrix product (intended for modest sizes)."""
        if self.ncols != other.nrows:
            raise InvalidInputError("shape mismatch in multiply")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for r, c, v in zip(other.rows.tolist(), other.cols.tolist(), other.value_list()):
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.value_list()):
            for c2, v2 in by_row.get(c, ()):
                key = (r, c2)
                acc[key] = acc.get(key, 0) + v * v2
        triplets = [(r, c, v) for (r, c), v in sorted(acc.items()) if v != 0]
        return SparseMatrix(self.nrows, other.ncols, triplets)

    def canonical_key(self, fieldspec: FieldSpec | None = None) -> str:
        """Content hash of the canonically sorted triplet serialization."""
        order = np.lexsort((self.rows, self.cols))
        vals = self.value_list()
        parts = [f"{self.nrows}x{self.ncols}"]
        parts.extend(
            f"{self.rows[i]},{self.cols[i]},{vals[i]}" for i in order.tolist()
        )
        if fieldspec is not None:
            parts.append(fieldspec.token())
        return hashlib.sha256(";".join(parts).encode()).hexdigest()

    def reduced_mod(self, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Integer-cleared entries reduced into [0, p), zeros dropped."""
        m = self.cleared_to_integers()
        if isinstance(m.vals, np.ndarray):
            vals = m.vals % p
        else:
            vals = np.asarray([v % p for v in m.vals], dtype=np.int64)
        keep = vals != 0
        return m.rows[keep], m.cols[keep], vals[keep]


# ---------------------------------------------------------------------------
# dense kernels


def bareiss_rank(dense: list[list[int]]) -> int:
    """Fraction-free (Bareiss) elimination rank of an integer matrix."""
    a = [row[:] for row in dense]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv_row is None:
            continue
        if piv_row != r:
            a[r], a[piv_row] = a[piv_row], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            rowi = a[i]
            rowr = a[r]
            if aic == 0:
                for j in range(c + 1, ncols):
                    rowi[j] = rowi[j] * piv // prev
            else:
                for j in range(c + 1, ncols):
                    rowi[j] = (rowi[j] * piv - aic * rowr[j]) // prev
                rowi[c] = 0
        prev = piv
        r += 1
    return r


def _clear_columns(dense: list[list]) -> list[list[int]]:
    """Column-wise denominator clearing of a dense rational matrix."""
    if not dense:
        return []
    ncols = len(dense[0])
    scale = [1] * ncols
    for row in dense:
        for j, v in enumerate(row):
            if isinstance(v, Fraction) and v.denominator != 1:
                scale[j] = lcm(scale[j], v.denominator)
    return [[int(Fraction(v) * scale[j]) for j, v in enumerate(row)] for row in dense]


def rref(dense: Sequence[Sequence], fieldspec: FieldSpec) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Q (Fractions) or F_p.

    Returns (nonzero rows, pivot columns).  Dense input; meant for the
    modest sizes that arise from subspace bases and dual pairings.
    """
    if isinstance(fieldspec, PrimeField):
        p = fieldspec.p
        a = [[int(v) % p for v in row] for row in dense]
    else:
        a = [[Fraction(v) for v in row] for row in dense]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv_row is None:
            continue
        a[r], a[piv_row] = a[piv_row], a[r]
        if isinstance(fieldspec, PrimeField):
            inv = pow(a[r][c], fieldspec.p - 2, fieldspec.p)
            a[r] = [v * inv % fieldspec.p for v in a[r]]
        else:
            inv = 1 / a[r][c]
            a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                if isinstance(fieldspec, PrimeField):
                    a[i] = [(v - f * w) % fieldspec.p for v, w in zip(a[i], a[r])]
                else:
                    a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def integer_scaled(vector: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to integers with content 1, leading entry > 0."""
    denoms = lcm(*(Fraction(v).denominator for v in vector)) if len(vector) else 1
    ints = [int(Fraction(v) * denoms) for v in vector]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


# ---------------------------------------------------------------------------
# modular engine


def _components(rows: np.ndarray, cols: np.ndarray, nrows: int) -> list[np.ndarray]:
    """Indices of triplets grouped by connected component of the nonzero pattern."""
    n = int(rows.size)
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    for r, c in zip(rows.tolist(), cols.tolist()):
        a, b = find(r), find(nrows + c)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for idx in range(n):
        groups.setdefault(find(int(rows[idx])), []).append(idx)
    return [np.asarray(groups[k], dtype=np.int64) for k in sorted(groups)]


def _markowitz_rank_mod_p(rows, cols, vals, p: int) -> int:
    """Sparse elimination with Markowitz-style pivoting, deterministic."""
    rowmap: dict[int, dict[int, int]] = {}
    colmap: dict[int, set[int]] = {}
    for r, c, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
        rowmap.setdefault(r, {})[c] = v
        colmap.setdefault(c, set()).add(r)
    rank = 0
    while colmap:
        mincnt = min(len(s) for s in colmap.values())
        best = None
        for c in sorted(c for c, s in colmap.items() if len(s) == mincnt):
            for r in sorted(colmap[c]):
                cost = (len(rowmap[r]) - 1) * (mincnt - 1)
                cand = (cost, r, c)
                if best is None or cand < best:
                    best = cand
        _, pr, pc = best
        pivrow = rowmap.pop(pr)
        inv = pow(pivrow[pc], p - 2, p)
        for c in pivrow:
            colmap[c].discard(pr)
        for r in sorted(colmap[pc]):
            target = rowmap[r]
            f = target[pc] * inv % p
            for c, v in pivrow.items():
                if c == pc:
                    continue
                new = (target.get(c, 0) - f * v) % p
                if new:
                    if c not in target:
                        colmap[c].add(r)
                    target[c] = new
                elif c in target:
                    del target[c]
                    colmap[c].discard(r)
            del target[pc]
            if not target:
                del rowmap[r]
        for c in [c for c, s in colmap.items() if not s or c == pc]:
            colmap.pop(c, None)
        colmap.pop(pc, None)
        colmap = {c: s for c, s in colmap.items() if s}
        rank += 1
    return rank


def _gemm_mod(coef: np.ndarray, e_lo: np.ndarray, e_hi: np.ndarray, p: int) -> np.ndarray:
    """Exact (coef @ E) mod p via 16-bit split; coef has at most _PANEL columns."""
    balanced = np.where(coef > p >> 1, coef - p, coef).astype(np.float64)
    lo = np.asarray(balanced @ e_lo, dtype=np.int64) % p
    hi = np.asarray(balanced @ e_hi, dtype=np.int64) % p
    return (lo + hi * (65536 % p)) % p


def _panel_jordan(t: np.ndarray, p: int) -> tuple[list[int], list[int]]:
    """In-place Gauss-Jordan of a panel; returns (pivot row ids, pivot cols)."""
    pivrows: list[int] = []
    pivcols: list[int] = []
    for i in range(t.shape[0]):
        nz = t[i].nonzero()[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        inv = pow(int(t[i, c]), p - 2, p)
        t[i] = t[i] * inv % p
        colv = t[:, c].copy()
        colv[i] = 0
        rnz = colv.nonzero()[0]
        if rnz.size:
            t[rnz] -= np.outer(colv[rnz], t[i])
            t[rnz] %= p
        pivrows.append(i)
        pivcols.append(c)
    return pivrows, pivcols


def _dense_rank_batched(get_panel, nrows: int, ncols: int, p: int, cap: int | None) -> int:
    """Row-fed blocked echelon; trailing updates go through exact float64 GEMMs."""
    blocks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    rank = 0
    limit = min(nrows, ncols) if cap is None else min(cap, nrows, ncols)
    for i0 in range(0, nrows, _PANEL):
        t = get_panel(i0, min(i0 + _PANEL, nrows))
        for pc, e_lo, e_hi in blocks:
            coef = t[:, pc]
            if coef.any():
                t = (t - _gemm_mod(coef, e_lo, e_hi, p)) % p
        pivrows, pivcols = _panel_jordan(t, p)
        if pivrows:
            e = t[pivrows]
            blocks.append(
                (
                    np.asarray(pivcols, dtype=np.int64),
                    (e & 0xFFFF).astype(np.float64),
                    (e >> 16).astype(np.float64),
                )
            )
            rank += len(pivrows)
            if rank >= limit:
                break
    return rank


def _rank_mod_p(matrix: SparseMatrix, p: int, cap: int | None = None, method: str = "auto") -> int:
    rows, cols, vals = matrix.reduced_mod(p)
    if rows.size == 0:
        return 0
    total = 0
    for idx in _components(rows, cols, matrix.nrows):
        r, c, v = rows[idx], cols[idx], vals[idx]
        urows = np.unique(r)
        ucols = np.unique(c)
        nr, nc = urows.size, ucols.size
        use_sparse = method == "sparse" or (method == "auto" and idx.size <= _SPARSE_NNZ)
        if not use_sparse and nr * nc > _DENSE_CELLS:
            if idx.size > _FALLBACK_NNZ:
                raise ResourceLimitError(
                    f"component of shape {nr}x{nc} with {idx.size} nonzeros "
                    "exceeds both dense and sparse elimination limits"
                )
            use_sparse = True
        if use_sparse:
            total += _markowitz_rank_mod_p(r, c, v, p)
        else:
            rmap = np.empty(int(urows.max()) + 1, dtype=np.int64)
            rmap[urows] = np.arange(nr)
            cmap = np.empty(int(ucols.max()) + 1, dtype=np.int64)
            cmap[ucols] = np.arange(nc)
            dense = np.zeros((nr, nc), dtype=np.int64)
            dense[rmap[r], cmap[c]] = v
            local_cap = None if cap is None else max(0, cap - total)
            total += _dense_rank_batched(
                lambda a, b: dense[a:b].copy(), nr, nc, p, local_cap
            )
        if cap is not None and total >= cap:
            break
    return total


# ---------------------------------------------------------------------------
# public operations


def rational_rank(matrix: SparseMatrix, oracle_cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Exact rank over Q by fraction-free elimination on a dense copy."""
    if matrix.ncols > oracle_cap:
        raise ResourceLimitError(
            f"rational elimination capped at {oracle_cap} columns, matrix has {matrix.ncols}"
        )
    dense = matrix.to_dense_rows()
    if not matrix.is_integer():
        dense = _clear_columns(dense)
    else:
        dense = [[int(v) for v in row] for row in dense]
    return bareiss_rank(dense)


def rank(
    matrix: SparseMatrix,
    fieldspec: FieldSpec,
    *,
    structural_bound: int | None = None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    cache: "RankCache | None" = None,
    method: str = "auto",
) -> RankCertificate:
    """Rank certificate for ``matrix`` over the given field.

    ``structural_bound`` is a caller-known upper bound on the rational
    rank; a modular rank attaining it (or min(nrows, ncols)) is promoted
    to certified-exact.  The bound must genuinely hold: it doubles as an
    early-exit cap, so an invalid bound is only detected (and raised)
    when the elimination happens to contradict it.
    """
    if matrix.nnz == 0 and structural_bound is None:
        structural_bound = 0  # structurally empty: rank 0 over every field
    key = None
    if cache is not None:
        key = matrix.canonical_key(fieldspec)
        hit = cache.get(key)
        if hit is not None:
            return _certify(hit, fieldspec, matrix, structural_bound)
    if isinstance(fieldspec, Rational):
        value = rational_rank(matrix, oracle_cap)
    else:
        cap = min(matrix.nrows, matrix.ncols)
        if structural_bound is not None:
            cap = min(cap, structural_bound)
        value = _rank_mod_p(matrix, fieldspec.p, cap=cap, method=method)
    if structural_bound is not None and value > structural_bound:
        raise InvalidInputError(
            f"computed rank {value} exceeds declared structural bound "
            f"{structural_bound}; the bound is invalid"
        )
    if cache is not None:
        cache.put(key, value)
    return _certify(value, fieldspec, matrix, structural_bound)


def _certify(value: int, fieldspec: FieldSpec, matrix: SparseMatrix, structural_bound: int | None) -> RankCertificate:
    if isinstance(fieldspec, Rational):
        return RankCertificate(value, "rational-exact", (), True, True, structural_bound)
    bound = min(matrix.nrows, matrix.ncols)
    if structural_bound is not None:
        bound = min(bound, structural_bound)
    return RankCertificate(
        value,
        "single-prime",
        (fieldspec.p,),
        True,
        value >= bound,
        structural_bound,
    )


def multi_prime_rank(
    matrix: SparseMatrix,
    primes: Sequence[int],
    *,
    structural_bound: int | None = None,
    cache: "RankCache | None" = None,
) -> RankCertificate:
    """Best modular lower bound over several primes (early exit on exactness)."""
    if not primes:
        raise InvalidInputError("multi_prime_rank needs at least one prime")
    best = -1
    used: list[int] = []
    bound = min(matrix.nrows, matrix.ncols)
    if structural_bound is not None:
        bound = min(bound, structural_bound)
    for p in primes:
        cert = rank(matrix, PrimeField(p), structural_bound=structural_bound, cache=cache)
        used.append(p)
        best = max(best, cert.rank)
        if best >= bound:
            break
    return RankCertificate(
        best,
        "multi-prime",
        tuple(used),
        True,
        best >= bound,
        structural_bound,
    )


def nullspace(
    matrix: SparseMatrix,
    fieldspec: FieldSpec,
    *,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> list[list[int]]:
    """Basis of the right nullspace (dense elimination; modest sizes).

    Over Q the vectors are integer-scaled with content 1; over F_p entries
    lie in [0, p).
    """
    if matrix.ncols > oracle_cap:
        raise ResourceLimitError(
            f"nullspace elimination capped at {oracle_cap} columns, matrix has {matrix.ncols}"
        )
    dense = matrix.to_dense_rows()
    echelon, pivots = rref(dense, fieldspec)
    free = [c for c in range(matrix.ncols) if c not in pivots]
    basis = []
    for c in free:
        if isinstance(fieldspec, PrimeField):
            vec = [0] * matrix.ncols
            vec[c] = 1
            for r, pc in enumerate(pivots):
                vec[pc] = (-echelon[r][c]) % fieldspec.p
            basis.append(vec)
        else:
            vec = [Fraction(0)] * matrix.ncols
            vec[c] = Fraction(1)
            for r, pc in enumerate(pivots):
                vec[pc] = -echelon[r][c]
            basis.append(integer_scaled(vec))
    return basis


class RankCache:
    """Line-delimited JSON cache of rank values keyed by matrix content hash."""

    FILENAME = "rank-cache.jsonl"

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self.path = os.path.join(directory, self.FILENAME)
        self._mem: dict[str, int] | None = None

    def _load(self) -> dict[str, int]:
        if self._mem is None:
            self._mem = {}
            if os.path.exists(self.path):
                with open(self.path, "r", encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if not line:
                            continue
                        record = json.loads(line)
                        self._mem[record["key"]] = int(record["rank"])
        return self._mem

    def get(self, key: str) -> int | None:
        return self._load().get(key)

    def put(self, key: str, value: int) -> None:
        mem = self._load()
        if mem.get(key) == value:
            return
        mem[key] = value
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"key": key, "rank": value}) + "\n")
