"""Dieudonne determinants over the tower field and denominator clearing.

The determinant of a square matrix over a skew field is only defined in the
abelianized unit group; we keep the ordered product of elimination pivots
(times the sign of the row permutation) as a representative.  Everything
downstream (degrees, seminorms) is invariant under commutators.
"""

from .errors import NotSquare, ZeroDeterminant, ZeroMap
from .ore import CrossedElement, Tower, TowerFraction
from .skew_laurent import SkewLaurentPoly


class DetResult:
    """Pivot-product representative of a Dieudonne determinant."""

    def __init__(self, value, sign, is_zero, tower, source=None):
        self.value = value
        self.sign = sign
        self.is_zero = is_zero
        self.tower = tower
        self.source = source

    def signed_value(self):
        """sign * value as a tower element."""
        if self.is_zero:
            return self.tower.top.zero
        if self.sign == 1:
            return self.value
        return self.tower.top.neg(self.value)

    def __repr__(self):
        if self.is_zero:
            return "DetResult(0)"
        return f"DetResult({'-' if self.sign < 0 else ''}{self.value})"


class ClearedFraction:
    """A pair (f_n, f_d) of nonzero Laurent polynomials standing for f_n * f_d^-1."""

    def __init__(self, f_n, f_d, phi=None, exact=True):
        if not f_n or not f_d:
            raise ZeroDeterminant("both parts of a cleared fraction must be nonzero")
        self.f_n = f_n
        self.f_d = f_d
        self.phi = phi
        self.exact = exact

    @property
    def kernel(self):
        """Is f_d supported on ker(phi) for the phi used when clearing?"""
        if self.phi is None:
            return False
        return all(sum(a * b for a, b in zip(self.phi, e)) == 0 for e in self.f_d.support())

    @property
    def ring(self):
        return self.f_n.ring

    def __repr__(self):
        return f"ClearedFraction(f_n={self.f_n}, f_d={self.f_d})"


def _as_tower_matrix(B, tower):
    rows = []
    for row in B:
        out = []
        for e in row:
            if isinstance(e, (TowerFraction, CrossedElement)):
                if e.level.tower is not tower:
                    raise ValueError("matrix entry lives in another tower")
                out.append(e)
            else:
                out.append(tower.from_ring(e))
        rows.append(out)
    return rows


def _check_square(B):
    n = len(B)
    if any(len(row) != n for row in B):
        raise NotSquare(f"matrix is not square ({n} rows, row lengths {[len(r) for r in B]})")
    return n


def _ring_of(B):
    for row in B:
        for e in row:
            if isinstance(e, SkewLaurentPoly):
                return e.ring
            if isinstance(e, (TowerFraction, CrossedElement)):
                return e.level.tower.ring
    return None


def dieudonne_det(B, tower=None, strategy="size", ring=None):
    """Gaussian elimination over the tower field.

    ``B`` is a list of rows whose entries are ring elements or tower
    fractions.  ``strategy`` is ``"size"`` (pivot of least total size in
    the column) or ``"first"`` (first nonzero entry).
    """
    n = _check_square(B)
    if tower is None:
        if ring is None:
            ring = _ring_of(B)
        if ring is None:
            raise ValueError("cannot determine the ring of an empty matrix")
        tower = Tower.for_ring(ring)
    F = tower.top
    A = _as_tower_matrix(B, tower)
    sign = 1
    pivots = []
    for col in range(n):
        cand = [r for r in range(col, n) if A[r][col]]
        if not cand:
            return DetResult(F.zero, 1, True, tower, B)
        if strategy == "first":
            p = cand[0]
        else:
            p = min(cand, key=lambda r: (F.size(A[r][col]), r))
        if p != col:
            A[col], A[p] = A[p], A[col]
            sign = -sign
        piv = A[col][col]
        pivots.append(piv)
        inv = F.inv(piv)
        for r in range(col + 1, n):
            e = A[r][col]
            if not e:
                continue
            factor = F.mul(e, inv)
            row_r, row_c = A[r], A[col]
            for c in range(col + 1, n):
                if row_c[c]:
                    row_r[c] = F.sub(row_r[c], F.mul(factor, row_c[c]))
            row_r[col] = F.zero
    value = F.one
    for piv in pivots:
        value = F.mul(value, piv)
    return DetResult(value, sign, False, tower, B)


# denominator clearing -----------------------------------------------------------


def clear(tower, x, L=None):
    """Integral (p, q) with x = p q^-1 at level L of the tower.

    Integral means every nested fraction has denominator 1, i.e. the
    element comes from the Laurent polynomial ring.
    """
    if L is None:
        L = tower.element_level(x)
    if L <= tower.flat:
        return tower.base_clear(x)
    if tower.is_crossed(L):
        return tower.crossed_clear(x)
    lev = tower.levels[L]
    below = lev.below
    if not x:
        return x, lev.one
    # right coefficients: n_i T^i = T^i sigma^-i(n_i)
    entries = []
    for p in (x.num, x.den):
        entries.append({i: lev.sigma(-i, c) for i, c in p.items()})
    if L - 1 <= tower.flat or tower.is_crossed(L - 1):
        # one commuting denominator for every coefficient at once
        q = tower.common_denominator([c for coeffs in entries for c in coeffs.values()])
        num = {i: lev.sigma(i, below.mul(c, q)) for i, c in entries[0].items()}
        den = {i: lev.sigma(i, below.mul(c, q)) for i, c in entries[1].items()}
        return TowerFraction(lev, num, lev.one_poly), TowerFraction(lev, den, lev.one_poly)
    # iterated common right denominator
    cleared = {}
    for which, coeffs in enumerate(entries):
        for i, c in coeffs.items():
            cleared[(which, i)] = clear(tower, c, L - 1)
    items = list(cleared.items())
    common = None
    numerators = {}
    for key, (p, q) in items:
        if common is None:
            common = q
            numerators[key] = p
            continue
        if _equal(tower, q, common, L - 1):
            numerators[key] = p
            continue
        w = _mul(tower, _inv(tower, common, L - 1), q, L - 1)
        u, v = clear(tower, w, L - 1)
        # common * u = q * v
        for k2 in numerators:
            numerators[k2] = _mul(tower, numerators[k2], u, L - 1)
        numerators[key] = _mul(tower, p, v, L - 1)
        common = _mul(tower, common, u, L - 1)
    num = {}
    den = {}
    for (which, i), p in numerators.items():
        target = num if which == 0 else den
        target[i] = lev.sigma(i, p)
    num = {i: c for i, c in num.items() if not below.is_zero(c)}
    den = {i: c for i, c in den.items() if not below.is_zero(c)}
    return TowerFraction(lev, num, lev.one_poly), TowerFraction(lev, den, lev.one_poly)


def _equal(tower, a, b, L):
    return tower.levels[L].key(a) == tower.levels[L].key(b)


def _mul(tower, a, b, L):
    return tower.levels[L].mul(a, b)


def _inv(tower, a, L):
    return tower.levels[L].inv(a)


def _row_content(row, tower):
    """Commuting scalar c (lcm of denominators over gcd of numerators) making c * row primitive."""
    F = tower.field
    comps = []
    for poly in row:
        for x in poly.values():
            comps.extend(a for a in (x.c if isinstance(x, CrossedElement) else (x,)) if a)
    if not comps:
        return None
    L = G = None
    for a in comps:
        d, n = a.den, a.num
        L = d if L is None else L * (d / L.gcd(d))
        G = n if G is None else G.gcd(n)
    from .scalars import RationalFunction
    c = RationalFunction(F, L, None, _reduced=True) / RationalFunction(F, G, None, _reduced=True)
    return None if F.key(c) == F.key(F.one) else c


def _scale_row(row, c, below):
    def scale(x):
        if isinstance(x, CrossedElement):
            return CrossedElement(below, tuple(c * a if a else a for a in x.c))
        return c * x
    return [{i: scale(x) for i, x in poly.items()} for poly in row]


# total coefficient size above which the Euclidean reduction is abandoned
PID_BUDGET = 3000


class _OverBudget(Exception):
    pass


def _pid_reduce(B, tower, budget=PID_BUDGET):
    """Triangularize over the Euclidean ring F_{m-1}[s^+-1] by row operations.

    Returns the product of the diagonal (a polynomial in s) times the sign,
    or None if the matrix is singular.  Raises _OverBudget when a row grows
    past ``budget`` coefficient terms.  When the ring below is commutative
    or a crossed product, rows are kept primitive by left multiplication
    with commuting scalars, whose product is divided out at the end.
    """
    F = tower.top
    below = F.below
    n = len(B)
    A = [[tower.from_ring(e).num for e in row] for row in B]
    normalize = tower.m - 1 <= tower.flat or tower.is_crossed(tower.m - 1)
    scale = None

    def tidy(r):
        nonlocal scale
        if not normalize:
            return
        c = _row_content(A[r], tower)
        if c is not None:
            A[r] = _scale_row(A[r], c, below)
            scale = c if scale is None else scale * c

    for r in range(n):
        tidy(r)
    sign = 1
    diag = []
    for col in range(n):
        while True:
            cand = [r for r in range(col, n) if A[r][col]]
            if not cand:
                return None
            p = min(cand, key=lambda r: (max(A[r][col]) - min(A[r][col]),
                                         sum(below.size(c) for c in A[r][col].values()), r))
            if p != col:
                A[col], A[p] = A[p], A[col]
                sign = -sign
            g = A[col][col]
            done = True
            for r in range(col + 1, n):
                if not A[r][col]:
                    continue
                q, rem = F.p_right_divmod(A[r][col], g)
                A[r] = [F.p_sub(A[r][c], F.p_mul(q, A[col][c])) for c in range(n)]
                tidy(r)
                if budget is not None and sum(below.size(c) for p in A[r] for c in p.values()) > budget:
                    raise _OverBudget
                if rem:
                    done = False
            if done:
                break
        diag.append(A[col][col])
    value = {0: below.one}
    for d in diag:
        value = F.p_mul(value, d)
    if sign < 0:
        value = F.p_neg(value)
    out = F.from_poly(value)
    if scale is not None:
        if tower.is_crossed(tower.m - 1):
            lifted = below.make((scale,) + (tower.field.zero,) * (below.size_ - 1))
        else:
            lifted = scale
        out = F.mul(out, F.inv(F.from_below(lifted)))
    return out


def clear_denominators(det, phi=None):
    """Write a determinant as f_n * f_d^-1 with f_d supported on ker(phi).

    ``phi`` defaults to the projection onto the last coordinate.  When the
    determinant is not already a Laurent polynomial in s = t^beta, the
    source matrix is triangularized over K(ker phi)[s^+-1] by Euclidean row
    operations; the diagonal product then only has denominators in
    K[ker phi].  That product agrees with the pivot representative up to
    commutators, which ``exact`` reports.  If the reduction swells past
    ``PID_BUDGET`` the pivot representative is cleared instead; ``kernel``
    on the result tells the two cases apart.
    """
    if det.is_zero:
        raise ZeroDeterminant("the determinant is zero")
    ring = det.tower.ring
    if phi is None:
        phi = tuple(int(i == ring.m - 1) for i in range(ring.m))
    phi = tuple(int(a) for a in phi)
    if not any(phi):
        raise ZeroMap("phi must be nonzero")
    tphi = Tower.for_phi(ring, phi)
    value = det.signed_value()
    if det.tower is not tphi:
        value = transfer(value, det.tower, tphi)
    if _polynomial_in_s(tphi, value) or det.source is None:
        p, q = clear(tphi, value)
        return ClearedFraction(tphi.to_ring(p), tphi.to_ring(q), phi, True)
    tpid = Tower.for_phi(ring, phi, generic_top=True)
    try:
        alt = _pid_reduce(det.source, tpid)
    except _OverBudget:
        # too much coefficient swell: keep the pivot representative, whose
        # denominator may involve s (all degrees and seminorms are unchanged)
        p, q = clear(tphi, value)
        return ClearedFraction(tphi.to_ring(p), tphi.to_ring(q), phi, True)
    if alt is None:
        raise ZeroDeterminant("the determinant is zero")
    p, q = clear(tpid, alt)
    f_n, f_d = tpid.to_ring(p), tpid.to_ring(q)
    F = tphi.top
    exact = tphi.from_ring(f_n) == F.mul(value, tphi.from_ring(f_d))
    return ClearedFraction(f_n, f_d, phi, exact)


def _polynomial_in_s(tower, x):
    """Is x a Laurent polynomial in the top variable over the field below?"""
    if isinstance(x, CrossedElement):
        lev = x.level
        pos = lev.field.k - 1
        return all(not a or all(not int(e[pos]) for e in a.den.to_dict()) for a in x.c)
    return tower.top.is_one_poly(x.den)


def transfer(x, src, dst):
    """Move a top-level element between two towers of the same ring."""
    p, q = clear(src, x)
    P = dst.from_ring(src.to_ring(p))
    Q = dst.from_ring(src.to_ring(q))
    return dst.top.mul(P, dst.top.inv(Q))


def cleared_from(tower, x, phi=None):
    """ClearedFraction of an arbitrary nonzero top-level tower element."""
    if not x:
        raise ZeroDeterminant("cannot clear zero")
    p, q = clear(tower, x)
    return ClearedFraction(tower.to_ring(p), tower.to_ring(q), phi)


def phi_det(B, phi, strategy="size"):
    """Dieudonne determinant of a ring matrix computed in the phi-adapted tower."""
    ring = _ring_of(B)
    return dieudonne_det(B, Tower.for_phi(ring, phi), strategy)
