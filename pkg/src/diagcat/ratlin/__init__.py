"""Exact linear algebra over arbitrary-precision rationals.

The substrate for every rank, quotient dimension, normal form and
splitting computed by the package.  No floating point anywhere: vectors
carry ``fractions.Fraction`` (or plain ``int``) coefficients, and the row
reduction kernel works on integer rows with cleared denominators.

Two interchangeable kernels exist: a compiled extension
(``diagcat.ratlin._speedups``) and a pure-Python fallback
(``diagcat.ratlin._pykernel``).  The compiled one is picked at import
when available; set ``DIAGCAT_NO_SPEEDUPS=1`` to force the fallback.
Both produce identical results.

Vectors are sparse ``{column: coefficient}`` dicts (dense sequences are
accepted by the public entry points).  Subspaces are stored as canonical
integer RREF rows, so equal subspaces compare equal structurally.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

if os.environ.get("DIAGCAT_NO_SPEEDUPS") == "1":
    from . import _pykernel as _kernel
else:
    try:
        from . import _speedups as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as _kernel

Echelon = _kernel.Echelon


def backend_name() -> str:
    """Name of the active row-reduction kernel: "cython" or "python"."""
    return _kernel.BACKEND


# ---------------------------------------------------------------------------
# vector plumbing


def as_sparse(vec) -> dict:
    """Accept a dense sequence or sparse dict; return {col: nonzero coeff}."""
    if isinstance(vec, dict):
        return {c: v for c, v in vec.items() if v}
    return {c: v for c, v in enumerate(vec) if v}


def vec_to_int_row(vec) -> tuple[list[int], list[int]]:
    """Clear denominators: sorted integer row proportional to ``vec``."""
    sp = as_sparse(vec)
    if not sp:
        return [], []
    den = 1
    for v in sp.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    cols = sorted(sp)
    if den == 1:
        vals = [int(sp[c]) for c in cols]
    else:
        vals = [int(sp[c] * den) for c in cols]
    return cols, vals


def int_row_to_vec(cols, vals, scale=1) -> dict[int, Fraction]:
    return {c: Fraction(v, scale) for c, v in zip(cols, vals)}


def canonical_residual(cols, vals, scale) -> tuple[list[int], list[int]]:
    """Primitive integer row proportional to vals/scale (positive lead)."""
    if not cols:
        return [], []
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return list(cols), list(vals)


# ---------------------------------------------------------------------------
# matrices and subspaces


class RatMatrix:
    """Sparse exact matrix: at most one stored entry per (row, col), all nonzero."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in dict(entries).items():
                if v:
                    if not (0 <= r < rows and 0 <= c < cols):
                        raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
                    self.entries[(r, c)] = Fraction(v)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_row_list(cls, rows_data, cols: int) -> "RatMatrix":
        ent = {}
        for r, row in enumerate(rows_data):
            for c, v in as_sparse(row).items():
                ent[(r, c)] = v
        return cls(len(rows_data), cols, ent)

    def row_vectors(self) -> list[dict[int, Fraction]]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def col_vectors(self) -> list[dict[int, Fraction]]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def apply(self, vec) -> dict[int, Fraction]:
        """Matrix times column vector (vec indexed by columns)."""
        sp = as_sparse(vec)
        out: dict[int, Fraction] = {}
        for (r, c), v in self.entries.items():
            x = sp.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ent: dict[tuple[int, int], Fraction] = {}
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                ent[key] = ent.get(key, 0) + v * w
        return RatMatrix(self.rows, other.cols, {k: v for k, v in ent.items() if v})

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, 0) + v
        return RatMatrix(self.rows, self.cols, {k: v for k, v in ent.items() if v})

    def scaled(self, a) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, {k: v * a for k, v in self.entries.items()})

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


@dataclass(frozen=True)
class Subspace:
    """Canonical subspace: integer RREF rows, content 1, positive pivots.

    Two equal subspaces of the same ambient have identical ``basis``
    tuples, so equality and hashing are structural.
    """

    ambient: int
    basis: tuple  # tuple of rows; row = tuple of (col, int) pairs

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        return [row[0][0] for row in self.basis]

    def basis_vectors(self) -> list[dict[int, Fraction]]:
        return [{c: Fraction(v) for c, v in row} for row in self.basis]

    def contains_vector(self, vec) -> bool:
        ech = _echelon_from_rows(self.basis, self.ambient)
        cols, vals = vec_to_int_row(vec)
        rc, _, _ = ech.reduce(cols, vals)
        return not rc

    def contains(self, other: "Subspace") -> bool:
        if other.ambient != self.ambient:
            raise ValueError("ambient dimension mismatch")
        ech = _echelon_from_rows(self.basis, self.ambient)
        for row in other.basis:
            rc, _, _ = ech.reduce([c for c, _ in row], [v for _, v in row])
            if rc:
                return False
        return True


def _echelon_from_rows(rows, ncols):
    ech = Echelon(ncols)
    for row in rows:
        ech.add([c for c, _ in row], [v for _, v in row])
    return ech


def _rref_rows(ech) -> list[tuple]:
    """Back-eliminate a forward echelon into canonical RREF rows."""
    from . import _pykernel

    pivots = ech.pivots()
    reduced: dict[int, tuple[list[int], list[int]]] = {}
    for p in reversed(pivots):
        cols, vals = ech.row(p)
        # tail entries may hit later pivots; sweep them out
        i = 1
        while i < len(cols):
            c = cols[i]
            pr = reduced.get(c)
            if pr is None:
                i += 1
                continue
            pc, pv = pr
            a, b = pv[0], vals[i]
            g = gcd(a, b)
            a //= g
            b //= g
            if a < 0:
                a, b = -a, -b
            cols, vals = _pykernel.merge_rows(cols, vals, a, pc, pv, -b)
            i = _first_index_gt(cols, c)
        cols, vals = _pykernel.normalize_row(cols, vals)
        reduced[p] = (cols, vals)
    return [tuple(zip(*reduced[p])) for p in pivots]


def _first_index_gt(cols, c):
    lo, hi = 0, len(cols)
    while lo < hi:
        mid = (lo + hi) // 2
        if cols[mid] <= c:
            lo = mid + 1
        else:
            hi = mid
    return lo


def rref(matrix, ncols=None):
    """Row-reduce; returns (rank, Subspace of the row space, pivot columns).

    ``matrix`` is a RatMatrix or an iterable of vectors (dense or sparse).
    Deterministic: rows are processed in the given order, columns in
    natural order.
    """
    if isinstance(matrix, RatMatrix):
        rows = matrix.row_vectors()
        ncols = matrix.cols
    else:
        rows = list(matrix)
        if ncols is None:
            raise ValueError("ncols required for raw row iterables")
    ech = Echelon(ncols)
    for vec in rows:
        cols, vals = vec_to_int_row(vec)
        ech.add(cols, vals)
    basis = tuple(_rref_rows(ech))
    sub = Subspace(ncols, basis)
    return ech.rank, sub, sub.pivots()


def subspace_from_vectors(vectors, ambient) -> Subspace:
    return rref(vectors, ambient)[1]


def nullspace(matrix, ncols=None) -> Subspace:
    """Right kernel {v : row . v = 0 for every row}."""
    if isinstance(matrix, RatMatrix):
        rows = matrix.row_vectors()
        ncols = matrix.cols
    else:
        rows = list(matrix)
        if ncols is None:
            raise ValueError("ncols required for raw row iterables")
    _, sub, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    rdict = {row[0][0]: row for row in sub.basis}
    free = [c for c in range(ncols) if c not in pivot_set]
    kernel_vecs = []
    for f in free:
        vec = {f: Fraction(1)}
        for p in pivots:
            row = rdict[p]
            lead = row[0][1]
            for c, v in row[1:]:
                if c == f:
                    vec[p] = Fraction(-v, lead)
        kernel_vecs.append(vec)
    return subspace_from_vectors(kernel_vecs, ncols)


def quotient_dim(spanning, relations, ambient: int) -> int:
    """dim(span(spanning) / (span(spanning) ∩ span(relations))).

    All vectors live in one ambient coordinate system (the fixed
    spanning-set enumeration).  Equals rank(spanning ∪ relations) −
    rank(relations).
    """
    spanning = [as_sparse(v) for v in spanning]
    relations = [as_sparse(v) for v in relations]
    for v in spanning + relations:
        if v and max(v) >= ambient:
            raise ValueError("vector exceeds ambient dimension")
    ech = Echelon(ambient)
    for v in relations:
        ech.add(*vec_to_int_row(v))
    rank_rel = ech.rank
    for v in spanning:
        ech.add(*vec_to_int_row(v))
    return ech.rank - rank_rel


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise ValueError("ambient dimension mismatch")
    return subspace_from_vectors(
        [dict(row) for row in a.basis] + [dict(row) for row in b.basis], a.ambient
    )


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Exact intersection via the kernel of the stacked system."""
    if a.ambient != b.ambient:
        raise ValueError("ambient dimension mismatch")
    ra, rb = a.dim, b.dim
    if ra == 0 or rb == 0:
        return subspace_from_vectors([], a.ambient)
    # weights (alpha, beta) with alpha.A = beta.B ; columns = ra + rb
    rows_by_coord: dict[int, dict[int, Fraction]] = {}
    for i, row in enumerate(a.basis):
        for c, v in row:
            rows_by_coord.setdefault(c, {})[i] = Fraction(v)
    for j, row in enumerate(b.basis):
        for c, v in row:
            rows_by_coord.setdefault(c, {})[ra + j] = Fraction(-v)
    ker = nullspace(list(rows_by_coord.values()), ra + rb)
    vecs = []
    for kv in ker.basis_vectors():
        acc: dict[int, Fraction] = {}
        for i, w in kv.items():
            if i < ra:
                for c, v in a.basis[i]:
                    acc[c] = acc.get(c, 0) + w * v
        vecs.append(acc)
    return subspace_from_vectors(vecs, a.ambient)


def subspace_ops(a: Subspace, b: Subspace):
    """(sum, intersection, equal, contains) where contains means a ⊇ b."""
    s = subspace_sum(a, b)
    i = subspace_intersection(a, b)
    equal = a == b
    contains = s == a
    return s, i, equal, contains


def split_idempotent(e: RatMatrix):
    """Split V = im(e) ⊕ ker(e) for an exactly idempotent square matrix."""
    if e.rows != e.cols:
        raise ValueError("not square")
    if e @ e != e:
        raise ValueError("not idempotent")
    image = subspace_from_vectors(e.col_vectors(), e.rows)
    kernel = nullspace(e)
    if image.dim + kernel.dim != e.rows:
        raise AssertionError("idempotent split dimensions inconsistent")
    return image, kernel


def solve_in_span(rows, target, ambient):
    """Coefficients expressing target in span(rows), or None.

    Returns a list of Fractions (one per row) with
    sum(coeff_i * rows_i) == target.  Deterministic.
    """
    rows = [as_sparse(r) for r in rows]
    ech = Echelon(ambient + len(rows))
    # augmented columns track combination coefficients
    for i, r in enumerate(rows):
        aug = dict(r)
        aug[ambient + i] = 1
        ech.add(*vec_to_int_row(aug))
    cols, vals = vec_to_int_row(target)
    rc, rv, scale = ech.reduce(cols, vals)
    coeffs = [Fraction(0)] * len(rows)
    for c, v in zip(rc, rv):
        if c < ambient:
            return None
        coeffs[c - ambient] = Fraction(-v, scale)
    return coeffs
