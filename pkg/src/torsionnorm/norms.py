"""Newton polytopes, support-function seminorms and dual norm balls.

All arithmetic is exact (integers and ``fractions.Fraction``).  The dual
polytope of a seminorm s is a polytope D whose width in direction phi,
``max phi(D) - min phi(D)``, equals s(phi); for a single polynomial it is
the Newton polytope.
"""

from fractions import Fraction
from functools import cmp_to_key
from math import floor, gcd

from . import lattice
from .dieudonne import phi_det
from .errors import NotASummand, ZeroMap, ZeroPolynomial
from .ore import NEG_INF, deg_frac
from .skew_laurent import SkewLaurentPoly


def _vec(v):
    return tuple(Fraction(a) for a in v)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _feasible(columns, target):
    """Exact phase-one simplex: is target a nonnegative combination of columns?"""
    rows = len(target)
    ncols = len(columns)
    # tableau rows: A x + art = b with b >= 0
    tab = []
    for r in range(rows):
        sgn = -1 if target[r] < 0 else 1
        row = [Fraction(sgn * columns[c][r]) for c in range(ncols)]
        row += [Fraction(int(r == j)) for j in range(rows)]
        row.append(Fraction(sgn * target[r]))
        tab.append(row)
    basis = [ncols + r for r in range(rows)]
    width = ncols + rows
    # objective: minimize sum of artificials -> reduced costs
    while True:
        cost = [Fraction(0)] * (width + 1)
        for r in range(rows):
            if basis[r] >= ncols:
                for c in range(width + 1):
                    cost[c] += tab[r][c]
        entering = next((c for c in range(ncols) if cost[c] > 0 and c not in basis), None)
        if entering is None:
            return cost[width] == 0
        best = None
        for r in range(rows):
            a = tab[r][entering]
            if a > 0:
                ratio = tab[r][width] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return cost[width] == 0
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(rows):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[r])]
        basis[r] = entering


def in_hull(point, points):
    """Exact test whether point lies in conv(points)."""
    if not points:
        return False
    cols = [tuple(p) + (1,) for p in points]
    return _feasible(cols, tuple(point) + (1,))


def hull_vertices(points):
    """Extreme points of conv(points), sorted lexicographically."""
    pts = sorted(set(_vec(p) for p in points))
    if len(pts) <= 2:
        return pts
    m = len(pts[0])
    if m == 1:
        return [pts[0], pts[-1]]
    if m == 2:
        lower, upper = [], []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        return sorted(set(lower[:-1] + upper[:-1]))
    return [p for i, p in enumerate(pts) if not in_hull(p, pts[:i] + pts[i + 1:])]


def _ccw(vertices):
    """2D vertices in counter-clockwise order starting from the lexicographic minimum."""
    if len(vertices) <= 2:
        return list(vertices)
    lower, upper = [], []
    pts = sorted(vertices)
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


class LatticePolytope:
    """Convex hull of finitely many rational points, stored by its vertices."""

    def __init__(self, points, dim=None):
        verts = hull_vertices(points)
        if dim is None:
            if not verts:
                raise ValueError("empty polytope needs an explicit dimension")
            dim = len(verts[0])
        self.dim = dim
        self.vertices = tuple(verts)

    @classmethod
    def _raw(cls, vertices, dim):
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.vertices = tuple(sorted(vertices))
        return obj

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({[tuple(str(a) for a in v) for v in self.vertices]})"

    def is_point(self):
        return len(self.vertices) == 1

    def is_integral(self):
        return all(a.denominator == 1 for v in self.vertices for a in v)

    def support(self, phi):
        return max(_dot(phi, v) for v in self.vertices)

    def width(self, phi):
        phi = _vec(phi)
        vals = [_dot(phi, v) for v in self.vertices]
        return max(vals) - min(vals)

    def translate(self, v):
        return LatticePolytope._raw([_add(p, _vec(v)) for p in self.vertices], self.dim)

    def negate(self):
        return LatticePolytope._raw([tuple(-a for a in p) for p in self.vertices], self.dim)

    def centroid(self):
        n = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / n for i in range(self.dim))

    def ccw(self):
        if self.dim != 2:
            raise ValueError("ccw order is only defined for polygons")
        return _ccw(list(self.vertices))

    def dimension(self):
        """Affine dimension of the polytope."""
        if len(self.vertices) <= 1:
            return 0
        base = self.vertices[0]
        rows = [list(_sub(v, base)) for v in self.vertices[1:]]
        rank = 0
        cols = self.dim
        for c in range(cols):
            piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for r in range(len(rows)):
                if r != rank and rows[r][c] != 0:
                    f = rows[r][c] / rows[rank][c]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
            rank += 1
        return rank

    def to_json(self):
        return [[_frac_json(a) for a in v] for v in self.vertices]


def _frac_json(a):
    a = Fraction(a)
    return int(a) if a.denominator == 1 else [a.numerator, a.denominator]


def newton(f):
    """Newton polytope: convex hull of the support."""
    if not f:
        raise ZeroPolynomial("the zero polynomial has no Newton polytope")
    return LatticePolytope(f.support(), f.ring.m)


def _phi_values(f, phi):
    return [sum(p * a for p, a in zip(phi, alpha)) for alpha in f.terms]


def seminorm(f, phi):
    """Width of the support of f in direction phi (0 for f = 0)."""
    phi = tuple(Fraction(a) if not isinstance(a, int) else a for a in phi)
    if not f:
        return Fraction(0)
    vals = _phi_values(f, phi)
    return Fraction(max(vals) - min(vals))


def torsion_seminorm(c, phi):
    """max{0, ||phi||_{f_n} - ||phi||_{f_d}} for a ClearedFraction."""
    return max(Fraction(0), seminorm(c.f_n, phi) - seminorm(c.f_d, phi))


def torsion_difference(c, phi):
    """Unclamped difference ||phi||_{f_n} - ||phi||_{f_d}."""
    return seminorm(c.f_n, phi) - seminorm(c.f_d, phi)


def deg_phi(B, phi, strategy="size"):
    """Degree in s of det(gamma_phi(B)); -inf for a singular matrix."""
    phi = tuple(int(a) for a in phi)
    if not any(phi):
        raise ZeroMap("phi must be nonzero")
    if isinstance(B, SkewLaurentPoly):
        B = [[B]]
    det = phi_det(B, phi, strategy)
    if det.is_zero:
        return NEG_INF
    return deg_frac(det.value)


def matrix_seminorm_from_deg(B, phi):
    """d * max{0, deg_phi(B)} where d is the content of phi."""
    deg = deg_phi(B, phi)
    if deg == NEG_INF:
        return NEG_INF
    return lattice.content(phi) * max(0, deg)


# Minkowski calculus ---------------------------------------------------------------


def _edges_2d(P):
    """Edge vectors of a polygon in ccw order as (primitive direction, length)."""
    vs = P.ccw()
    out = []
    if len(vs) < 2:
        return out
    for i, v in enumerate(vs):
        w = vs[(i + 1) % len(vs)]
        e = _sub(w, v)
        out.append(e)
    return out


def _half(e):
    x, y = e
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(a, b):
    """Compare two nonzero vectors by ccw angle in [0, 2 pi)."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cr = a[0] * b[1] - a[1] * b[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _primitive(e):
    num = [Fraction(a) for a in e]
    den = 1
    for a in num:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in num]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    prim = tuple(a // g for a in ints)
    return prim, Fraction(g, den)


def minkowski_sum(P, Q):
    return LatticePolytope([_add(p, q) for p in P.vertices for q in Q.vertices], P.dim)


def _difference_1d(P, Q):
    (a0,), (a1,) = P.vertices[0], P.vertices[-1]
    (b0,), (b1,) = Q.vertices[0], Q.vertices[-1]
    lo, hi = a0 - b0, a1 - b1
    if hi < lo:
        raise NotASummand("interval is shorter than the subtrahend")
    return LatticePolytope([(lo,), (hi,)], 1)


def _difference_2d(P, Q):
    if Q.is_point():
        return P.translate(tuple(-a for a in Q.vertices[0]))
    pe = {}
    for e in _edges_2d(P):
        d, ln = _primitive(e)
        pe[d] = pe.get(d, 0) + ln
    for e in _edges_2d(Q):
        d, ln = _primitive(e)
        rest = pe.get(d, 0) - ln
        if rest < 0:
            raise NotASummand("an edge of the subtrahend is missing from the polygon")
        if rest == 0:
            pe.pop(d, None)
        else:
            pe[d] = rest
    origin = (0, 0)
    verts = [origin]
    cur = origin
    for d in sorted(pe, key=cmp_to_key(_angle_cmp)):
        cur = _add(cur, tuple(a * pe[d] for a in d))
        verts.append(cur)
    if cur != origin:
        raise NotASummand("remaining edges do not close up")
    # lexicographic minima add under Minkowski sum
    shift = _sub(_sub(min(P.vertices), min(Q.vertices)), min(verts))
    return LatticePolytope([_add(v, shift) for v in verts], 2)


def _difference_general(P, Q):
    qv = Q.vertices
    cand = set()
    pts = list(P.vertices)
    for p in P.vertices:
        for q in qv:
            r = _sub(p, q)
            if all(in_hull(_add(r, q2), pts) for q2 in qv):
                cand.add(r)
    if not cand:
        raise NotASummand("no translate of the subtrahend fits inside the polytope")
    return LatticePolytope(cand, P.dim)


def minkowski(P, Q, op="sum"):
    """Minkowski sum, or difference R with R + Q = P (NotASummand otherwise)."""
    if P.dim != Q.dim:
        raise ValueError("polytopes of different dimension")
    if op == "sum":
        return minkowski_sum(P, Q)
    if op != "difference":
        raise ValueError(f"unknown operation {op!r}")
    if P.dim == 1:
        R = _difference_1d(P, Q)
    elif P.dim == 2:
        R = _difference_2d(P, Q)
    else:
        R = _difference_general(P, Q)
    if minkowski_sum(R, Q) != P:
        raise NotASummand("P - Q failed the round trip R + Q = P")
    return R


# norm balls -------------------------------------------------------------------------


class NormBall:
    """Dual polytope and unit ball of a (semi)norm given by a ClearedFraction.

    ``vertices`` lists the vertices of the ball in its compact directions,
    ``lineality`` spans the directions along which the seminorm vanishes.
    ``degenerate`` marks the zero seminorm (the ball is all of R^m) and
    ``clamped`` marks that the clamp at 0 was active.
    """

    def __init__(self, m, dual, vertices, lineality, degenerate=False, clamped=False):
        self.m = m
        self.dual = dual
        self.vertices = vertices
        self.lineality = lineality
        self.degenerate = degenerate
        self.clamped = clamped

    def norm(self, phi):
        if self.degenerate:
            return Fraction(0)
        return self.dual.width(phi)

    def to_json(self):
        out = {
            "dual_polytope": self.dual.to_json(),
            "degenerate": self.degenerate,
            "clamped": self.clamped,
            "lineality": [list(v) for v in self.lineality],
        }
        if self.vertices is not None:
            out["ball_vertices"] = [[_frac_json(a) for a in v] for v in self.vertices]
        return out

    def __repr__(self):
        return (f"NormBall(dual={self.dual}, degenerate={self.degenerate}, "
                f"lineality={self.lineality})")


def _center(D):
    c = D.centroid()
    return D.translate(tuple(-floor(a) for a in c))


def _integer_perp(v):
    """Primitive integer vector orthogonal to a 2D vector."""
    prim, _ = _primitive((-v[1], v[0]))
    return prim


def _ball_from_dual(D):
    m = D.dim
    sym = minkowski_sum(D, D.negate())
    dim = sym.dimension()
    if dim == 0:
        return None, [tuple(int(i == j) for j in range(m)) for i in range(m)], True
    if m == 1:
        L = sym.vertices[-1][0]
        return [(-1 / L,), (1 / L,)], [], False
    if m == 2:
        if dim == 1:
            v = sym.vertices[-1]
            vv = _dot(v, v)
            return [tuple(a / vv for a in v), tuple(-a / vv for a in v)], [_integer_perp(v)], False
        vs = sym.ccw()
        out = []
        for i, p in enumerate(vs):
            q = vs[(i + 1) % len(vs)]
            # a with a.p = a.q = 1
            det = p[0] * q[1] - p[1] * q[0]
            out.append(((q[1] - p[1]) / det, (p[0] - q[0]) / det))
        return sorted(out), [], False
    return None, [], False


def norm_ball(c):
    """Dual polytope N(f_n) - N(f_d) and the unit ball of the torsion seminorm."""
    m = c.ring.m
    Pn, Pd = newton(c.f_n), newton(c.f_d)
    try:
        dual = minkowski(Pn, Pd, "difference")
    except NotASummand:
        # the clamp may be active: zero seminorm in every direction
        if m == 1 or _all_nonpositive(c):
            zero = LatticePolytope([(0,) * m], m)
            basis = [tuple(int(i == j) for j in range(m)) for i in range(m)]
            return NormBall(m, zero, None, basis, degenerate=True, clamped=True)
        raise
    dual = _center(dual)
    vertices, lineality, degenerate = _ball_from_dual(dual)
    return NormBall(m, dual, vertices, lineality, degenerate=degenerate)


def _all_nonpositive(c):
    m = c.ring.m
    for phi in lattice.primitive_vectors(m, 3):
        if torsion_difference(c, phi) > 0:
            return False
    return True
