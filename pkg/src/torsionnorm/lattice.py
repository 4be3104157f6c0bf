"""Integer linear algebra on Z^m: gcds, kernels, unimodular inverses."""

from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd

from .errors import ZeroMap


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def content(phi):
    """Positive generator d of the image of phi: Z^m -> Z."""
    d = reduce(gcd, (abs(int(a)) for a in phi), 0)
    if d == 0:
        raise ZeroMap("phi must be a nonzero homomorphism")
    return d


def is_primitive(phi):
    return any(phi) and content(phi) == 1


def _l1_sphere(m, n):
    """All integer vectors of length m and 1-norm exactly n."""
    if m == 1:
        return [(n,), (-n,)] if n else [(0,)]
    out = []
    for a in range(-n, n + 1):
        for rest in _l1_sphere(m - 1, n - abs(a)):
            out.append((a,) + rest)
    return out


@lru_cache(maxsize=None)
def choose_beta(phi):
    """Lexicographically smallest vector of minimal 1-norm with phi(beta) = d."""
    phi = tuple(int(a) for a in phi)
    d = content(phi)
    n = 1
    while True:
        hits = [v for v in _l1_sphere(len(phi), n) if dot(phi, v) == d]
        if hits:
            return min(hits)
        n += 1


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_reduce(phi):
    """Unimodular U (list of columns) with phi . U = (d, 0, ..., 0)."""
    m = len(phi)
    cols = [[int(i == j) for i in range(m)] for j in range(m)]
    row = [int(a) for a in phi]
    for j in range(1, m):
        a, b = row[0], row[j]
        if b == 0:
            continue
        g, x, y = _ext_gcd(a, b)
        c0 = [x * p + y * q for p, q in zip(cols[0], cols[j])]
        cj = [(-b // g) * p + (a // g) * q for p, q in zip(cols[0], cols[j])]
        cols[0], cols[j] = c0, cj
        row[0], row[j] = g, 0
    if row[0] < 0:
        cols[0] = [-p for p in cols[0]]
        row[0] = -row[0]
    return [tuple(c) for c in cols]


@lru_cache(maxsize=None)
def kernel_basis(phi):
    """A Z-basis of ker(phi) (m - 1 vectors), each with positive leading entry."""
    out = []
    for v in column_reduce(phi)[1:]:
        lead = next(a for a in v if a)
        out.append(v if lead > 0 else tuple(-a for a in v))
    return tuple(out)


def phi_basis(phi):
    """Basis (kernel vectors..., beta) of Z^m adapted to phi."""
    phi = tuple(int(a) for a in phi)
    return kernel_basis(phi) + (choose_beta(phi),)


def solve_fraction(matrix, rhs):
    """Solve matrix . x = rhs exactly (square, invertible) over Q."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def int_det(matrix):
    n = len(matrix)
    if n == 0:
        return 1
    a = [[Fraction(v) for v in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return int(det)


def int_inverse(matrix):
    """Inverse of a unimodular integer matrix (rows)."""
    n = len(matrix)
    cols = [solve_fraction(matrix, [int(i == j) for i in range(n)]) for j in range(n)]
    inv = [[cols[j][i] for j in range(n)] for i in range(n)]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(v) for v in row) for row in inv)


def mat_mul(a, b):
    if not a:
        return a
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def mat_vec(a, v):
    return tuple(sum(r * x for r, x in zip(row, v)) for row in a)


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def primitive_vectors(m, bound):
    """All primitive integer vectors with entries in [-bound, bound]."""
    return [v for v in product(range(-bound, bound + 1), repeat=m) if any(v) and content(v) == 1]


def row_echelon_transform(matrix):
    """Unimodular U with U . matrix in row echelon form; returns (U, rank).

    ``matrix`` is a list of integer rows (n x r).
    """
    n = len(matrix)
    r = len(matrix[0]) if n else 0
    a = [list(map(int, row)) for row in matrix]
    u = [list(row) for row in identity(n)]
    rank = 0
    for c in range(r):
        if rank == n:
            break
        # gcd-combine all rows below into row `rank`
        for i in range(rank + 1, n):
            if a[i][c] == 0:
                continue
            p, q = a[rank][c], a[i][c]
            g, x, y = _ext_gcd(p, q)
            if g == 0:
                continue
            s, t = -q // g, p // g
            new_top = [x * v + y * w for v, w in zip(a[rank], a[i])]
            new_bot = [s * v + t * w for v, w in zip(a[rank], a[i])]
            a[rank], a[i] = new_top, new_bot
            ut = [x * v + y * w for v, w in zip(u[rank], u[i])]
            ub = [s * v + t * w for v, w in zip(u[rank], u[i])]
            u[rank], u[i] = ut, ub
        if a[rank][c] != 0:
            rank += 1
    return [tuple(row) for row in u], rank


def _is_primitive_set(cols, r):
    """Do the integer vectors ``cols`` (each of length r) extend to a basis of Z^r?"""
    if not cols:
        return True
    mat = [[c[i] for c in cols] for i in range(r)]
    u, rank = row_echelon_transform(mat)
    if rank < len(cols):
        return False
    top = [[sum(u[i][k] * mat[k][j] for k in range(r)) for j in range(len(cols))]
           for i in range(len(cols))]
    return abs(int_det(top)) == 1


def complete_basis(cols, r):
    """Extend a primitive set of vectors in Z^r to a basis (the given vectors first)."""
    if not cols:
        return [tuple(int(i == j) for i in range(r)) for j in range(r)]
    mat = [[c[i] for c in cols] for i in range(r)]
    u, _ = row_echelon_transform(mat)
    inv = int_inverse(u)
    extra = [tuple(inv[i][j] for i in range(r)) for j in range(len(cols), r)]
    return [tuple(c) for c in cols] + extra


def adapted_basis(basis, good, bound=2):
    """Re-choose a basis of the lattice spanned by ``basis`` so that as many
    leading vectors as possible satisfy the predicate ``good``.

    Returns (new_basis, count) where the first ``count`` vectors are good.
    Candidates are small integer combinations of the given basis.
    """
    r = len(basis)
    if r == 0:
        return [], 0
    m = len(basis[0])

    def combo(w):
        return tuple(sum(wi * b[k] for wi, b in zip(w, basis)) for k in range(m))

    if all(good(b) for b in basis):
        return [tuple(b) for b in basis], r
    cands = [w for w in product(range(-bound, bound + 1), repeat=r) if any(w)]
    cands.sort(key=lambda w: (sum(map(abs, w)), [-a for a in w]))
    chosen = []
    for w in cands:
        if len(chosen) == r:
            break
        if next(a for a in w if a) < 0:
            continue
        if not good(combo(w)):
            continue
        if _is_primitive_set(chosen + [w], r):
            chosen.append(w)
    count = len(chosen)
    coeffs = complete_basis(chosen, r)
    return [combo(w) for w in coeffs], count
