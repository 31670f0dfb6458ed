"""Independent reference computations used only by the tests."""

from fractions import Fraction


def _scalar(x, p):
    x = Fraction(str(x)) if not isinstance(x, (int, Fraction)) else Fraction(x)
    if p == 0:
        return x
    return x.numerator * pow(x.denominator, -1, p) % p


def rank(rows, p=0):
    """Row-reduction rank of a list-of-lists matrix over Q (p = 0) or F_p."""
    M = [[_scalar(x, p) for x in r] for r in rows]
    if not M or not M[0]:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c] if p == 0 else pow(int(M[r][c]), -1, p)
        M[r] = [x * inv if p == 0 else x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b if p == 0 else (a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def to_rows(A):
    return [[str(x) for x in row] for row in A.tolist()]


def homology(C):
    """dim H_n from ranks computed by the reference elimination."""
    p = C.field.p
    out = {}
    for n in C.degrees:
        out[n] = C.dim(n) - rank(to_rows(C.d(n)), p) - rank(to_rows(C.d(n + 1)), p)
    return out
