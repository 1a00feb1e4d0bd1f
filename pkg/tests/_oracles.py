"""Independent brute-force oracles shared by the test modules.

Everything here is deliberately naive (plain Gaussian elimination over
Fraction, direct enumerations) and kept separate from the library code
paths it is used to check.
"""

from fractions import Fraction


def gauss_rank_rational(dense) -> int:
    """Plain Gaussian elimination rank over Q with Fraction arithmetic."""
    a = [[Fraction(v) for v in row] for row in dense]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def gauss_rank_mod_p(dense, p: int) -> int:
    """Plain Gaussian elimination rank over F_p."""
    a = [[int(v) % p for v in row] for row in dense]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def mat_vec(dense, vec):
    return [sum(row[j] * vec[j] for j in range(len(vec))) for row in dense]
