"""Small dense linear algebra on lists of lists.

Exact routines work over Fraction; determinants clear denominators per row
and run fraction-free (Bareiss) elimination so intermediates stay integer.
Floating routines use partial pivoting. Sizes here are desk scale.
"""

import math
from fractions import Fraction

from znrank.errors import SingularSystem


def solve_exact(a, rhs):
    """Solve a x = rhs over Fractions. rhs may be a vector or a list of
    columns given as a matrix (list of rows). Raises SingularSystem."""
    n = len(a)
    vector = rhs and not isinstance(rhs[0], list)
    cols = [[x] for x in rhs] if vector else [list(r) for r in rhs]
    m = [[Fraction(x) for x in row] + [Fraction(x) for x in cols[i]] for i, row in enumerate(a)]
    width = len(m[0])
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularSystem("singular linear system")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    sol = [row[n:width] for row in m]
    return [row[0] for row in sol] if vector else sol


def solve_float(a, rhs):
    """Solve a x = rhs in floating point with partial pivoting."""
    n = len(a)
    vector = rhs and not isinstance(rhs[0], list)
    cols = [[x] for x in rhs] if vector else [list(r) for r in rhs]
    m = [[float(x) for x in row] + [float(x) for x in cols[i]] for i, row in enumerate(a)]
    width = len(m[0])
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(m[r][c]))
        if m[piv][c] == 0.0:
            raise SingularSystem("singular linear system")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0.0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    sol = [row[n:width] for row in m]
    return [row[0] for row in sol] if vector else sol


def det_bareiss_int(m):
    """Determinant of an integer matrix, fraction-free. Destroys m."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_exact(a):
    """Exact determinant of a Fraction matrix via per-row clearing plus
    integer Bareiss elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    denom = Fraction(1)
    rows = []
    for row in a:
        frs = [Fraction(x) for x in row]
        l = math.lcm(*(f.denominator for f in frs)) if frs else 1
        denom *= l
        rows.append([int(f * l) for f in frs])
    return Fraction(det_bareiss_int(rows), 1) / denom


def det_float(a):
    """Floating determinant with partial pivoting."""
    n = len(a)
    if n == 0:
        return 1.0
    m = [[float(x) for x in row] for row in a]
    det = 1.0
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(m[r][c]))
        if m[piv][c] == 0.0:
            return 0.0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f != 0.0:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det
