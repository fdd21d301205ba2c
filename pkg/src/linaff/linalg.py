"""Exact dense linear algebra over the supported rings.

Matrices are plain lists of rows of RingElem.  Determinants over Z/m are
computed by lifting to the integers (fraction-free Bareiss elimination)
and reducing, so no division inside the ring is ever needed; over fields
ordinary elimination with pivot inverses is used.  Kernel bases are only
defined over fields.
"""

from __future__ import annotations

from .errors import PreconditionError
from .rings import Ring, RingElem, Zmod


def identity_matrix(n: int, ring: Ring) -> list[list[RingElem]]:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def mat_mul(a, b, ring: Ring) -> list[list[RingElem]]:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero
            for t in range(inner):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def _bareiss_int_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix; exact."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
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
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _field_det(rows, ring: Ring) -> RingElem:
    n = len(rows)
    if n == 0:
        return ring.one
    m = [row[:] for row in rows]
    det = ring.one
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not m[r][col].is_zero:
                pivot = r
                break
        if pivot is None:
            return ring.zero
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = ring.inverse(m[col][col])
        for r in range(col + 1, n):
            if m[r][col].is_zero:
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


def determinant(rows, ring: Ring) -> RingElem:
    """Exact determinant of a square matrix over any supported ring."""
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise PreconditionError("determinant needs a square matrix")
    if isinstance(ring, Zmod) and not ring.is_field:
        lifted = [[e.value for e in row] for row in rows]
        return ring.from_int(_bareiss_int_det(lifted))
    if ring.is_field:
        return _field_det(rows, ring)
    # remaining case is Zmod with prime modulus handled above; anything
    # else would need its own lift
    lifted = [[e.value for e in row] for row in rows]
    return ring.from_int(_bareiss_int_det(lifted))


def _minor(rows, drop_row: int, drop_col: int):
    return [
        [e for j, e in enumerate(row) if j != drop_col]
        for i, row in enumerate(rows)
        if i != drop_row
    ]


def adjugate(rows, ring: Ring) -> list[list[RingElem]]:
    """adj(A) with adj(A)*A = det(A)*I; cofactor expansion, test scale."""
    n = len(rows)
    if n == 0:
        return []
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            cof = determinant(_minor(rows, j, i), ring)
            if (i + j) % 2:
                cof = -cof
            row.append(cof)
        adj.append(row)
    return adj


def rref(rows, cols: int, ring: Ring):
    """Reduced row echelon form over a field; returns (matrix, pivot columns)."""
    if not ring.is_field:
        raise PreconditionError("echelon reduction needs a field")
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    for col in range(cols):
        pivot = None
        for i in range(r, len(m)):
            if not m[i][col].is_zero:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ring.inverse(m[r][col])
        m[r] = [e * inv for e in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][col].is_zero:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def kernel_basis(rows, cols: int, ring: Ring) -> list[list[RingElem]]:
    """Basis of the right kernel over a field, one vector per free column.

    Vectors follow the reduced-echelon convention (free variable set to 1)
    and are emitted in ascending free-column order, so the result is
    deterministic.
    """
    reduced, pivots = rref(rows, cols, ring)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [ring.zero] * cols
        vec[free] = ring.one
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][free]
        basis.append(vec)
    return basis


def matrix_rank(rows, cols: int, ring: Ring) -> int:
    return len(rref(rows, cols, ring)[1])
