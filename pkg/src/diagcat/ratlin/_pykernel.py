"""Sparse integer row reduction: the pure-Python computational core.

Every rank, quotient dimension, normal form and kernel in the package
funnels through incremental echelon maintenance over arbitrary-precision
integers.  A row is a pair of parallel lists ``(cols, vals)``, sorted by
column, all values nonzero.  Stored rows are primitive (content 1,
positive leading coefficient), which keeps results canonical and
coefficient growth under control.

Pivoting is restricted to columns ``< npivot``; columns beyond that bound
ride along unreduced.  Callers use the tail block to track combination
coefficients (augmented rows), so a row that reduces to zero on the pivot
block hands back the linear dependency that killed it.

The compiled twin in ``_speedups.pyx`` implements the same contract with
an int64 fast path; both backends must produce bit-identical results.
"""

from math import gcd

BACKEND = "python"


def row_gcd(vals):
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def merge_rows(c1, v1, a, c2, v2, b):
    """Return a*row1 + b*row2 as a new sorted sparse row."""
    out_c = []
    out_v = []
    i = j = 0
    n1 = len(c1)
    n2 = len(c2)
    while i < n1 and j < n2:
        ci = c1[i]
        cj = c2[j]
        if ci < cj:
            out_c.append(ci)
            out_v.append(a * v1[i])
            i += 1
        elif ci > cj:
            out_c.append(cj)
            out_v.append(b * v2[j])
            j += 1
        else:
            s = a * v1[i] + b * v2[j]
            if s:
                out_c.append(ci)
                out_v.append(s)
            i += 1
            j += 1
    while i < n1:
        out_c.append(c1[i])
        out_v.append(a * v1[i])
        i += 1
    while j < n2:
        out_c.append(c2[j])
        out_v.append(b * v2[j])
        j += 1
    return out_c, out_v


def normalize_row(cols, vals):
    """Divide out the content and make the leading value positive."""
    if not cols:
        return cols, vals
    g = row_gcd(vals)
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


# Renormalize mid-reduction once values outgrow this many bits; keeps
# intermediate entries small without paying a gcd sweep on every merge.
_RENORM_BITS = 256


class Echelon:
    """Incremental forward echelon with a fixed pivot block.

    ``npivot`` bounds the columns eligible as pivots.  ``add`` reduces an
    incoming row and either installs it (returning its pivot column) or
    returns the fully reduced residual, whose support lies entirely in
    non-pivot columns and/or the augmentation block.
    """

    def __init__(self, npivot):
        self.npivot = npivot
        self._rows = {}
        self.rank = 0

    def pivots(self):
        return sorted(self._rows)

    def row(self, p):
        cols, vals = self._rows[p]
        return list(cols), list(vals)

    def reduce(self, cols, vals):
        """Eliminate all pivot-column entries of the given row.

        Returns ``(cols, vals, scale)``: the true reduced vector is
        ``vals / scale`` entrywise (eliminations rescale the row to stay
        integral).  ``scale`` is a positive integer.
        """
        cols = list(cols)
        vals = list(vals)
        scale = 1
        npivot = self.npivot
        rows = self._rows
        i = 0
        while i < len(cols):
            c = cols[i]
            if c >= npivot:
                break
            prow = rows.get(c)
            if prow is None:
                i += 1
                continue
            pc, pv = prow
            a = pv[0]
            b = vals[i]
            g = gcd(a, b)
            a //= g
            b //= g
            if a < 0:
                a = -a
                b = -b
            cols, vals = merge_rows(cols, vals, a, pc, pv, -b)
            scale *= a
            if scale.bit_length() > _RENORM_BITS:
                g = gcd(scale, row_gcd(vals))
                if g > 1:
                    scale //= g
                    vals = [v // g for v in vals]
            # entries below c are untouched; resume at first col > c
            i = _bisect(cols, c)
        return cols, vals, scale

    def add(self, cols, vals):
        """Reduce and, if a pivot survives, install the row.

        Returns ``(pivot, residual)``.  ``pivot`` is the new pivot column
        or None; when None, ``residual = (cols, vals, scale)`` holds the
        reduced row (empty cols means the row was already in the span).
        """
        cols, vals, scale = self.reduce(cols, vals)
        if cols and cols[0] < self.npivot:
            cols, vals = normalize_row(cols, vals)
            self._rows[cols[0]] = (cols, vals)
            self.rank += 1
            return cols[0], None
        return None, (cols, vals, scale)


def _bisect(cols, c):
    lo = 0
    hi = len(cols)
    while lo < hi:
        mid = (lo + hi) // 2
        if cols[mid] <= c:
            lo = mid + 1
        else:
            hi = mid
    return lo
