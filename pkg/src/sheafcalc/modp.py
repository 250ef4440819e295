"""Dense linear algebra over a prime field F_p.

Matrices are lists of row lists of ints in [0, p).  Sizes in this package
are tiny (dozens at most), so plain Gaussian elimination is the right tool;
exactness matters more than speed.
"""

from __future__ import annotations

from .errors import ValidationError


def check_prime(p: int) -> int:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValidationError(f"field characteristic must be prime, got {p}")
    return p


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> list[list[int]]:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    if a and b and len(a[0]) != len(b):
        raise ValidationError("matrix shape mismatch in product")
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            v = ai[k]
            if v:
                bk = b[k]
                for j in range(cols):
                    oi[j] = (oi[j] + v * bk[j]) % p
    return out


def row_echelon(m: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = [row[:] for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if a[i][c] % p), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: list[list[int]], p: int) -> int:
    if not m or not m[0]:
        return 0
    return len(row_echelon(m, p)[1])


def nullspace(m: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel, as a list of column vectors."""
    cols = len(m[0]) if m else 0
    if cols == 0:
        return []
    if not m:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    ech, pivots = row_echelon(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-ech[r][fc]) % p
        basis.append(v)
    return basis


def solve_in_span(basis_cols: list[list[int]], target: list[int], p: int) -> list[int] | None:
    """Coefficients expressing `target` in the span of `basis_cols`, or None."""
    n = len(target)
    k = len(basis_cols)
    aug = [[basis_cols[j][i] % p for j in range(k)] + [target[i] % p] for i in range(n)]
    ech, pivots = row_echelon(aug, p)
    if k in pivots:
        return None
    coeff = [0] * k
    for r, pc in enumerate(pivots):
        coeff[pc] = ech[r][k]
    return coeff
