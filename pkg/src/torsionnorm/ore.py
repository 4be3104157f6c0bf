"""Skew polynomials in one variable and the iterated skew fraction tower.

The quotient field of K[t^{+-1}] is built as K(T_1)(T_2)...(T_m) where
``T_i = t^(v_i)`` for a unimodular basis ``v_1, ..., v_m`` of Z^m
(the standard basis by default, ``T_1`` innermost).  Level ``L`` of the
tower holds right fractions ``num * den^-1`` of skew Laurent polynomials
in ``T_L`` over level ``L - 1``; multiplication uses ``T_L a = sigma_L(a) T_L``
where ``sigma_L`` is conjugation by ``T_L``.
"""

import itertools

from . import lattice
from .errors import DivisionByZero, ZeroInput
from .scalars import BaseField
from .skew_laurent import SkewLaurentPoly, mu_power

NEG_INF = float("-inf")


class OnePoly:
    """sum_i c_i T^i over the level below; ``c`` maps exponents to nonzero coefficients."""

    __slots__ = ("level", "c", "_key")

    def __init__(self, level, coeffs):
        self.level = level
        self.c = coeffs
        self._key = None

    def key(self):
        if self._key is None:
            bk = self.level.below.key
            self._key = tuple((i, bk(v)) for i, v in sorted(self.c.items()))
        return self._key

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, OnePoly) and self.level is other.level and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def low(self):
        return min(self.c)

    def high(self):
        return max(self.c)

    def length(self):
        """Top minus bottom exponent (the degree of a Laurent polynomial)."""
        return max(self.c) - min(self.c) if self.c else NEG_INF

    def __add__(self, other):
        return OnePoly(self.level, self.level.p_add(self.c, other.c))

    def __sub__(self, other):
        return OnePoly(self.level, self.level.p_sub(self.c, other.c))

    def __neg__(self):
        return OnePoly(self.level, self.level.p_neg(self.c))

    def __mul__(self, other):
        return OnePoly(self.level, self.level.p_mul(self.c, other.c))

    def __str__(self):
        return self.level.format_poly(self.c)

    def __repr__(self):
        return f"OnePoly({self})"


class TowerFraction:
    """Right fraction ``num * den^-1`` in canonical form.

    Canonical means: num and den right coprime, den has lowest exponent 0
    and leading coefficient 1.  Canonical forms are unique, so equality is
    structural.
    """

    __slots__ = ("level", "num", "den", "_key")

    def __init__(self, level, num, den):
        self.level = level
        self.num = num
        self.den = den
        self._key = None

    def key(self):
        if self._key is None:
            bk = self.level.below.key
            self._key = (tuple((i, bk(v)) for i, v in sorted(self.num.items())),
                         tuple((i, bk(v)) for i, v in sorted(self.den.items())))
        return self._key

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        return (isinstance(other, TowerFraction) and self.level is other.level
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def numerator(self):
        return OnePoly(self.level, self.num)

    def denominator(self):
        return OnePoly(self.level, self.den)

    def is_integral(self):
        return self.level.is_one_poly(self.den)

    def __add__(self, other):
        return self.level.add(self, other)

    def __sub__(self, other):
        return self.level.add(self, self.level.neg(other))

    def __neg__(self):
        return self.level.neg(self)

    def __mul__(self, other):
        return self.level.mul(self, other)

    def __truediv__(self, other):
        return self.level.mul(self, self.level.inv(other))

    def inverse(self):
        return self.level.inv(self)

    def degree(self):
        return deg_frac(self)

    def size(self):
        return self.level.size(self)

    def __str__(self):
        return self.level.format(self)

    def __repr__(self):
        return f"TowerFraction({self})"


class BaseLevel:
    """Level 0 of a tower: the base field K itself."""

    def __init__(self, tower, field, index=0):
        self.tower = tower
        self.field = field
        self.index = index
        K = field
        self.zero = K.zero
        self.one = K.one
        self.key = K.key
        self.inv = K.inv

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def is_zero(a):
        return not a

    def is_one(self, a):
        return a == self.one

    def eq(self, a, b):
        return a == b

    def size(self, a):
        return self.field.size(a)

    def from_base(self, k):
        return self.tower.embed(k)

    def lscale(self, k, a):
        return self.tower.embed(k) * a

    def rscale(self, a, k):
        return a * self.tower.embed(k)

    def format(self, a):
        return self.field.format(a)


class FieldLevel:
    """Level L >= 1: right fractions of skew Laurent polynomials in T_L."""

    def __init__(self, tower, index, below):
        self.tower = tower
        self.index = index
        self.below = below
        b = below
        self.one_poly = {0: b.one}
        self.zero = TowerFraction(self, {}, self.one_poly)
        self.one = TowerFraction(self, {0: b.one}, self.one_poly)
        self.trivial_twist = tower.twist_is_trivial(index)
        self._sigma_cache = {}

    # twist ---------------------------------------------------------------
    def sigma(self, n, a):
        """sigma_L^n on an element of the level below."""
        if n == 0 or self.trivial_twist:
            return a
        ck = (n, self.below.key(a))
        hit = self._sigma_cache.get(ck)
        if hit is None:
            hit = self.tower.conj(self.index, n, a, self.index - 1)
            if len(self._sigma_cache) > 100000:
                self._sigma_cache.clear()
            self._sigma_cache[ck] = hit
        return hit

    # polynomial arithmetic on dicts -----------------------------------------
    def is_one_poly(self, p):
        return len(p) == 1 and 0 in p and self.below.is_one(p[0])

    def p_add(self, f, g):
        b = self.below
        out = dict(f)
        for i, c in g.items():
            v = out.get(i)
            if v is None:
                out[i] = c
            else:
                s = b.add(v, c)
                if b.is_zero(s):
                    del out[i]
                else:
                    out[i] = s
        return out

    def p_neg(self, f):
        neg = self.below.neg
        return {i: neg(c) for i, c in f.items()}

    def p_sub(self, f, g):
        return self.p_add(f, self.p_neg(g))

    def p_mul(self, f, g):
        b = self.below
        out = {}
        sig = self.sigma
        for i, a in f.items():
            for j, c in g.items():
                v = b.mul(a, sig(i, c))
                k = i + j
                w = out.get(k)
                out[k] = v if w is None else b.add(w, v)
        return {k: v for k, v in out.items() if not b.is_zero(v)}

    def p_lscale(self, c, f):
        """c * f for c in the level below."""
        mul = self.below.mul
        return {i: mul(c, v) for i, v in f.items()}

    def p_rscale(self, f, c):
        """f * c = sum f_i sigma^i(c) T^i."""
        mul = self.below.mul
        return {i: mul(v, self.sigma(i, c)) for i, v in f.items()}

    def p_lshift(self, k, f):
        """T^k * f."""
        if k == 0:
            return f
        return {i + k: self.sigma(k, v) for i, v in f.items()}

    @staticmethod
    def p_rshift(f, k):
        """f * T^k."""
        if k == 0:
            return f
        return {i + k: v for i, v in f.items()}

    def p_mono(self, c, k):
        return {k: c}

    # Euclidean division ----------------------------------------------------
    def p_right_divmod(self, f, g, laurent=True):
        """(q, r) with f = q g + r and length(r) < length(g).

        With ``laurent=False`` supports are only shifted up to the
        nonnegative range, giving ordinary polynomial division for
        polynomial inputs.
        """
        if not g:
            raise DivisionByZero("division by the zero polynomial")
        if not f:
            return {}, {}
        b = self.below
        a0, b0 = min(f), min(g)
        if not laurent:
            a0, b0 = min(a0, 0), min(b0, 0)
        f0 = self.p_lshift(-a0, f)
        g0 = self.p_lshift(-b0, g)
        n = max(g0)
        gn = g0[n]
        q0 = {}
        r = f0
        inv_cache = {}
        while r:
            top = max(r)
            if top < n:
                break
            k = top - n
            inv = inv_cache.get(k)
            if inv is None:
                inv = inv_cache[k] = b.inv(self.sigma(k, gn))
            qk = b.mul(r[top], inv)
            q0[k] = qk
            # r -= (qk T^k) g0
            sub = {i + k: b.neg(b.mul(qk, self.sigma(k, v))) for i, v in g0.items()}
            r = self.p_add(r, sub)
            r.pop(top, None)
        q = {i + a0 - b0: self.sigma(a0, v) for i, v in q0.items()}
        r = self.p_lshift(a0, r)
        return q, r

    def p_left_divmod(self, f, g, laurent=True):
        """(q, r) with f = g q + r and length(r) < length(g)."""
        if not g:
            raise DivisionByZero("division by the zero polynomial")
        if not f:
            return {}, {}
        b = self.below
        a0, b0 = min(f), min(g)
        if not laurent:
            a0, b0 = min(a0, 0), min(b0, 0)
        f0 = self.p_rshift(f, -a0)
        g0 = self.p_rshift(g, -b0)
        n = max(g0)
        gn_inv = b.inv(g0[n])
        q0 = {}
        r = f0
        while r:
            top = max(r)
            if top < n:
                break
            k = top - n
            qk = self.sigma(-n, b.mul(gn_inv, r[top]))
            q0[k] = qk
            # r -= g0 (qk T^k)
            sub = {i + k: b.neg(b.mul(v, self.sigma(i, qk))) for i, v in g0.items()}
            r = self.p_add(r, sub)
            r.pop(top, None)
        q = {i - b0 + a0: self.sigma(-b0, v) for i, v in q0.items()}
        r = self.p_rshift(r, a0)
        return q, r

    def p_normalize_left(self, f):
        """Left unit multiple of f with lowest exponent 0 and leading coefficient 1."""
        f = self.p_lshift(-min(f), f)
        lc = f[max(f)]
        if self.below.is_one(lc):
            return f
        return self.p_lscale(self.below.inv(lc), f)

    def p_gcrd(self, f, g):
        """Greatest common right divisor, normalized by a left unit."""
        if not f:
            return self.p_normalize_left(g)
        if not g:
            return self.p_normalize_left(f)
        if len(f) == 1 or len(g) == 1:
            return self.one_poly
        while g:
            r = self.p_right_divmod(f, g)[1]
            f, g = g, (self.p_normalize_left(r) if r else r)
            if f and len(f) == 1:
                return self.one_poly
        return self.p_normalize_left(f)

    def p_lcrm(self, f, g):
        """(u, v, gcld) with f u = g v the least common right multiple."""
        b = self.below
        one = {0: b.one}
        r0, r1 = f, g
        x0, x1 = one, {}
        y0, y1 = {}, one
        while r1:
            q, r = self.p_left_divmod(r0, r1)
            x2 = self.p_sub(x0, self.p_mul(x1, q))
            y2 = self.p_sub(y0, self.p_mul(y1, q))
            if r:
                # keep remainders monic (right unit) to limit coefficient growth
                n = max(r)
                e = self.sigma(-n, b.inv(r[n]))
                r, x2, y2 = (self.p_rscale(p, e) for p in (r, x2, y2))
            x0, x1 = x1, x2
            y0, y1 = y1, y2
            r0, r1 = r1, r
        return x1, self.p_neg(y1), r0

    def p_lclm(self, f, g):
        """(u, v, gcrd) with u f = v g the least common left multiple."""
        one = {0: self.below.one}
        r0, r1 = f, g
        x0, x1 = one, {}
        y0, y1 = {}, one
        b = self.below
        while r1:
            q, r = self.p_right_divmod(r0, r1)
            x2 = self.p_sub(x0, self.p_mul(q, x1))
            y2 = self.p_sub(y0, self.p_mul(q, y1))
            if r:
                e = b.inv(r[max(r)])
                r, x2, y2 = (self.p_lscale(e, p) for p in (r, x2, y2))
            x0, x1 = x1, x2
            y0, y1 = y1, y2
            r0, r1 = r1, r
        return x1, self.p_neg(y1), r0

    # fractions -------------------------------------------------------------
    def _monic(self, num, den):
        """Right-multiply num, den by a unit so den is monic with lowest exponent 0."""
        low = min(den)
        if low:
            num = self.p_rshift(num, -low)
            den = self.p_rshift(den, -low)
        top = max(den)
        lc = den[top]
        b = self.below
        if not b.is_one(lc):
            e = self.sigma(-top, b.inv(lc))
            num = self.p_rscale(num, e)
            den = self.p_rscale(den, e)
        return num, den

    def make(self, num, den, reduced=False):
        """Canonical fraction num * den^-1 from polynomial dicts."""
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return self.zero
        if len(den) == 1:
            # den = c T^k is a unit
            (k, c), = den.items()
            e = self.sigma(-k, self.below.inv(c))
            num = self.p_rshift(self.p_rscale(num, e), -k)
            return TowerFraction(self, num, self.one_poly)
        if not reduced:
            g = self.p_gcrd(num, den)
            if not self.is_one_poly(g):
                num, r1 = self.p_right_divmod(num, g)
                den, r2 = self.p_right_divmod(den, g)
                assert not r1 and not r2
                if len(den) == 1:
                    return self.make(num, den, True)
        num, den = self._monic(num, den)
        return TowerFraction(self, num, den)

    def from_poly(self, poly):
        return TowerFraction(self, poly, self.one_poly) if poly else self.zero

    def from_below(self, a):
        if self.below.is_zero(a):
            return self.zero
        return TowerFraction(self, {0: a}, self.one_poly)

    def from_base(self, k):
        return self.from_below(self.below.from_base(k))

    def gen(self):
        return TowerFraction(self, {1: self.below.one}, self.one_poly)

    def is_zero(self, a):
        return not a.num

    def is_one(self, a):
        return a.key() == self.one.key()

    def eq(self, a, b):
        return a.key() == b.key()

    def key(self, a):
        return a.key()

    def size(self, a):
        s = self.below.size
        return sum(s(v) for v in a.num.values()) + sum(s(v) for v in a.den.values())

    def constant(self, a):
        """The level-below element if a is constant, else None."""
        if len(a.den) == 1 and len(a.num) == 1 and 0 in a.num:
            return a.num[0]
        return None

    def neg(self, a):
        if not a.num:
            return a
        return TowerFraction(self, self.p_neg(a.num), a.den)

    def add(self, a, c):
        if not a.num:
            return c
        if not c.num:
            return a
        one = self.is_one_poly
        if one(a.den) and one(c.den):
            return self.from_poly(self.p_add(a.num, c.num))
        if a.key()[1] == c.key()[1]:
            return self.make(self.p_add(a.num, c.num), a.den)
        # b u = d v
        u, v, _ = self.p_lcrm(a.den, c.den)
        num = self.p_add(self.p_mul(a.num, u), self.p_mul(c.num, v))
        return self.make(num, self.p_mul(a.den, u))

    def sub(self, a, c):
        return self.add(a, self.neg(c))

    def mul(self, a, c):
        if not a.num or not c.num:
            return self.zero
        one = self.is_one_poly
        if one(c.den):
            if one(a.den):
                return self.from_poly(self.p_mul(a.num, c.num))
            if len(c.num) == 1:
                # a b^-1 (k T^j) = a (T^-j k^-1 b)^-1 ... rewritten via units
                (j, k), = c.num.items()
                inv = self.below.inv(k)
                den = self.p_lshift(-j, self.p_lscale(inv, a.den))
                return self.make(a.num, den, reduced=True)
        if one(a.den) and len(a.num) == 1 and len(c.num) >= 1:
            return self.make(self.p_mul(a.num, c.num), c.den, reduced=True)
        if one(a.den):
            return self.make(self.p_mul(a.num, c.num), c.den)
        # b^-1 c = u v^-1 with b u = c v
        u, v, _ = self.p_lcrm(a.den, c.num)
        return self.make(self.p_mul(a.num, u), self.p_mul(c.den, v))

    def inv(self, a):
        if not a.num:
            raise DivisionByZero("inverse of zero")
        return self.make(a.den, a.num, reduced=True)

    def lscale(self, k, a):
        """k * a for k in the base field."""
        if not a.num:
            return a
        return TowerFraction(self, {i: self.below.lscale(k, v) for i, v in a.num.items()}, a.den)

    def rscale(self, a, k):
        """a * k for k in the base field."""
        return self.mul(a, self.from_base(k))

    # text ----------------------------------------------------------------------
    def format_poly(self, p):
        if not p:
            return "0"
        name = self.tower.var_names[self.index - 1]
        parts = []
        for i in sorted(p, reverse=True):
            c = self.below.format(p[i])
            if i == 0:
                parts.append(f"[{c}]" if self.index > 1 or " " in c else c)
            else:
                mono = name if i == 1 else f"{name}^{i}"
                parts.append(mono if c == "1" else f"[{c}]*{mono}")
        return " + ".join(parts)

    def format(self, a):
        if not a.num:
            return "0"
        if self.is_one_poly(a.den):
            return self.format_poly(a.num)
        return f"({self.format_poly(a.num)})*({self.format_poly(a.den)})^-1"


class CrossedElement:
    """sum_r c_r T^r over residues r in prod(Z/n_i), coefficients in the folded field."""

    __slots__ = ("level", "c", "_key")

    def __init__(self, level, coeffs):
        self.level = level
        self.c = coeffs
        self._key = None

    def key(self):
        if self._key is None:
            k = self.level.field.key
            self._key = tuple(k(a) for a in self.c)
        return self._key

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        return isinstance(other, CrossedElement) and self.level is other.level and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        return self.level.add(self, other)

    def __sub__(self, other):
        return self.level.sub(self, other)

    def __neg__(self):
        return self.level.neg(self)

    def __mul__(self, other):
        return self.level.mul(self, other)

    def __truediv__(self, other):
        return self.level.mul(self, self.level.inv(other))

    def is_zero(self):
        return not any(self.c)

    def inverse(self):
        return self.level.inv(self)

    def degree(self):
        return deg_frac(self)

    def size(self):
        return self.level.size(self)

    def __str__(self):
        return self.level.format(self)

    def __repr__(self):
        return f"CrossedElement({self})"


class CrossedLevel:
    """Skew field generated over the folded field by variables of finite twist order.

    If T_1, ..., T_d commute with each other and T_i twists by an
    automorphism of order n_i, the monomials u_i = T_i^{n_i} are central
    and the skew field is the crossed product sum_r F(u) T^r over the
    residues r in prod(Z/n_i).  F(u) is commutative and folded into one
    flint rational function field, so only the product rule is twisted
    and inverses come from a small linear system.
    """

    def __init__(self, tower, index, field, orders):
        self.tower = tower
        self.index = index
        self.field = field
        self.orders = tuple(orders)
        self.d = len(self.orders)
        self.vectors = tower.basis[index - 1:index - 1 + self.d]
        self.residues = list(itertools.product(*(range(n) for n in self.orders)))
        self.slot = {r: i for i, r in enumerate(self.residues)}
        self.size_ = len(self.residues)
        F = field
        self.zero = CrossedElement(self, (F.zero,) * self.size_)
        self.one = CrossedElement(self, (F.one,) + (F.zero,) * (self.size_ - 1))
        self.u = [F.gen(F.k - self.d + i) for i in range(self.d)]
        self._steps = [tuple(sum(r[i] * v[j] for i, v in enumerate(self.vectors)) for j in range(tower.m))
                       for r in self.residues]
        # product table: (slot of r+s reduced, carry monomial or None)
        self._table = {}
        for a, r in enumerate(self.residues):
            for b, s in enumerate(self.residues):
                t = []
                carry = None
                for i, n in enumerate(self.orders):
                    e = r[i] + s[i]
                    if e >= n:
                        e -= n
                        carry = self.u[i] if carry is None else carry * self.u[i]
                    t.append(e)
                self._table[a, b] = (self.slot[tuple(t)], carry)

    def sig(self, slot, a):
        return self.field.act(self._steps[slot], a)

    def make(self, coeffs):
        return CrossedElement(self, tuple(coeffs))

    def is_zero(self, x):
        return not any(x.c)

    def is_one(self, x):
        return x.key() == self.one.key()

    def key(self, x):
        return x.key()

    def size(self, x):
        s = self.field.size
        return sum(s(a) for a in x.c if a)

    def add(self, x, y):
        return CrossedElement(self, tuple(a + b for a, b in zip(x.c, y.c)))

    def neg(self, x):
        return CrossedElement(self, tuple(-a for a in x.c))

    def sub(self, x, y):
        return CrossedElement(self, tuple(a - b for a, b in zip(x.c, y.c)))

    def mul(self, x, y):
        F = self.field
        out = [F.zero] * self.size_
        for i, a in enumerate(x.c):
            if not a:
                continue
            for j, b in enumerate(y.c):
                if not b:
                    continue
                k, carry = self._table[i, j]
                v = a * self.sig(i, b)
                if carry is not None:
                    v = v * carry
                out[k] = out[k] + v
        return CrossedElement(self, tuple(out))

    def inv(self, x):
        F = self.field
        N = self.size_
        nz = [i for i, a in enumerate(x.c) if a]
        if not nz:
            raise DivisionByZero("inverse of zero")
        if nz == [0]:
            return CrossedElement(self, (F.inv(x.c[0]),) + (F.zero,) * (N - 1))
        # left inverse y x = 1 is linear in the coefficients of y
        rows = [[F.zero] * N + [F.one if k == 0 else F.zero] for k in range(N)]
        for j in range(N):
            for i in nz:
                k, carry = self._table[j, i]
                e = self.sig(j, x.c[i])
                if carry is not None:
                    e = e * carry
                rows[k][j] = rows[k][j] + e
        for col in range(N):
            piv = min((r for r in range(col, N) if rows[r][col]),
                      key=lambda r: F.size(rows[r][col]))
            rows[col], rows[piv] = rows[piv], rows[col]
            pinv = F.inv(rows[col][col])
            rows[col] = [e * pinv if e else e for e in rows[col]]
            for r in range(N):
                if r != col and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [e - f * w if w else e for e, w in zip(rows[r], rows[col])]
        return CrossedElement(self, tuple(rows[k][N] for k in range(N)))

    def _u_range(self, poly, pos):
        exps = [int(e[pos]) for e in poly.to_dict()]
        return min(exps), max(exps)

    def weighted_width(self, x, weights):
        """deg - ord for the grading giving T_i weight ``weights[i]``.

        Variables of the folded field below this level get weight zero.
        Terms from distinct residues cannot cancel (their gradings are
        read off from disjoint monomial supports), so the extreme degrees
        are attained termwise.
        """
        F = self.field
        base = F.k - self.d
        lo = hi = None
        for s, a in enumerate(x.c):
            if not a:
                continue
            r = self.residues[s]
            shift = sum(w * e for w, e in zip(weights, r))
            top = bot = shift
            for i, w in enumerate(weights):
                if not w:
                    continue
                scale = w * self.orders[i]
                nlo, nhi = self._u_range(a.num, base + i)
                dlo, dhi = self._u_range(a.den, base + i)
                if scale > 0:
                    top += scale * (nhi - dhi)
                    bot += scale * (nlo - dlo)
                else:
                    top += scale * (nlo - dlo)
                    bot += scale * (nhi - dhi)
            hi = top if hi is None else max(hi, top)
            lo = bot if lo is None else min(lo, bot)
        if hi is None:
            return NEG_INF
        return hi - lo

    def width(self, x):
        """Length in the top variable."""
        return self.weighted_width(x, (0,) * (self.d - 1) + (1,))

    def from_base(self, k):
        F = self.field
        return CrossedElement(self, (self.tower.embed(k),) + (F.zero,) * (self.size_ - 1))

    def lscale(self, k, x):
        e = self.tower.embed(k)
        return CrossedElement(self, tuple(e * a for a in x.c))

    def rscale(self, x, k):
        e = self.tower.embed(k)
        return CrossedElement(self, tuple(a * self.sig(i, e) if a else a for i, a in enumerate(x.c)))

    def format(self, x):
        names = self.tower.var_names[self.index - 1:self.index - 1 + self.d]
        parts = []
        for s, a in enumerate(x.c):
            if not a:
                continue
            fa = self.field.format(a)
            mono = "*".join(n if e == 1 else f"{n}^{e}"
                            for n, e in zip(names, self.residues[s]) if e)
            if not mono:
                parts.append(fa)
            else:
                parts.append(mono if fa == "1" else f"({fa})*{mono}")
        return " + ".join(parts) if parts else "0"


def _matrix_order(action, v, bound=12):
    """Order of the action matrix of v (None if larger than ``bound``)."""
    for n in range(1, bound + 1):
        if action.is_identity(tuple(n * a for a in v)):
            return n
    return None


MAX_CROSSED_DIM = 16


def _low_order_beta(action, beta, kernel):
    """beta + (small kernel combination) whose twist has the least order."""
    best = None
    for combo in itertools.product((0, 1, -1), repeat=len(kernel)):
        v = tuple(b + sum(c * k[j] for c, k in zip(combo, kernel)) for j, b in enumerate(beta))
        n = _matrix_order(action, v)
        rank = (n is None, n or 0, sum(abs(a) for a in v))
        if best is None or rank < best[0]:
            best = (rank, v)
    return best[1]


class Tower:
    """The skew fraction field of a SkewLaurentRing built along a basis of Z^m.

    When the ring has a trivial cocycle, the lowest levels whose variables
    act trivially on K form a commutative field K(T_1, ..., T_c); these are
    folded into a single flint-backed rational function field.  If all
    remaining variables twist by automorphisms of finite order, they form
    one crossed-product level on top.  Otherwise a single finite-order
    level may still be stored as a crossed product, and the rest use
    generic Ore fraction arithmetic.
    """

    def __init__(self, ring, basis=None, fold=True, generic_top=False):
        m = ring.m
        if basis is None:
            basis = lattice.identity(m)
        basis = tuple(tuple(int(a) for a in v) for v in basis)
        if len(basis) != m:
            raise ValueError("basis must have m vectors")
        cols = tuple(tuple(basis[c][r] for c in range(m)) for r in range(m))
        if abs(lattice.int_det(cols)) != 1:
            raise ValueError("basis is not unimodular")
        self.ring = ring
        self.m = m
        self.basis = basis
        self.coords = lattice.int_inverse(cols)
        self.standard = basis == lattice.identity(m)
        if self.standard:
            self.var_names = ring.names
        else:
            self.var_names = tuple(f"T{i + 1}" for i in range(m))
        self._unit_cache = {}
        K = ring.base
        c = 0
        orders = ()
        if fold and ring.trivial_cocycle:
            while c < m - 1 and K.action.is_identity(basis[c]):
                c += 1
            stop = m - 1 if generic_top else m
            if c < stop:
                rest = [_matrix_order(K.action, v) for v in basis[c:stop]]
                dim = 1
                for n in rest:
                    dim = dim * n if n else None
                    if dim is None:
                        break
                if dim is not None and dim <= MAX_CROSSED_DIM:
                    orders = tuple(rest)
                elif rest[0] and rest[0] > 1 and c < stop - 1:
                    orders = (rest[0],)
        self.flat = c
        self.generic_top = generic_top
        self.orders = orders
        self.cyc = c + 1 if orders else None
        self.cyc_top = c + len(orders) if orders else None
        extra = c + len(orders)
        if extra:
            k = K.k
            mats = []
            for M in K.action.matrices:
                big = [list(row) + [0] * extra for row in M]
                big += [[0] * k + [int(i == j) for j in range(extra)] for i in range(extra)]
                mats.append(big)
            names = K.names + self.var_names[:c]
            names += tuple(self.var_names[c + i] if n == 1 else f"{self.var_names[c + i]}_{n}"
                              for i, n in enumerate(orders))
            self.field = BaseField(k + extra, mats, names=names)
        else:
            self.field = K
        base = BaseLevel(self, self.field, c)
        self.levels = [base] * (c + 1)
        if orders:
            self.levels += [CrossedLevel(self, c + 1, self.field, orders)] * len(orders)
        for L in range(len(self.levels), m + 1):
            self.levels.append(FieldLevel(self, L, self.levels[-1]))
        self.top = self.levels[-1]

    @classmethod
    def for_ring(cls, ring, basis=None):
        cache = ring.__dict__.setdefault("_towers", {})
        key = None if basis is None else tuple(tuple(v) for v in basis)
        hit = cache.get(key)
        if hit is None:
            b = basis
            if b is None:
                b = lattice.identity(ring.m)
                K = ring.base
                if ring.trivial_cocycle and not K.action.trivial:
                    b, _ = lattice.adapted_basis(b, lambda v: K.action.is_identity(tuple(v)))
            hit = cache[key] = cls(ring, b)
        return hit

    @classmethod
    def for_phi(cls, ring, phi, generic_top=False):
        """Tower whose top variable is s = t^beta; lower levels span ker(phi).

        With ``generic_top`` the top level is always an Ore fraction field
        over K(ker phi), as needed for Euclidean elimination in s.
        """
        phi = tuple(int(a) for a in phi)
        cache = ring.__dict__.setdefault("_phi_towers", {})
        hit = cache.get((phi, generic_top))
        if hit is None:
            kernel = list(lattice.kernel_basis(phi))
            K = ring.base
            beta = lattice.choose_beta(phi)
            if ring.trivial_cocycle and not K.action.trivial:
                kernel, _ = lattice.adapted_basis(kernel, lambda v: K.action.is_identity(tuple(v)))
                beta = _low_order_beta(K.action, beta, kernel)
            basis = tuple(kernel) + (beta,)
            if generic_top:
                hit = cls(ring, basis, generic_top=True)
            else:
                hit = cls.for_ring(ring, basis)
            cache[(phi, generic_top)] = hit
        return hit

    def level(self, L):
        return self.levels[L]

    def is_crossed(self, L):
        return self.cyc is not None and self.cyc <= L <= self.cyc_top

    def __repr__(self):
        return f"Tower({self.ring!r}, basis={self.basis})"

    # twist data ------------------------------------------------------------------
    def _tpow(self, L, n):
        return mu_power(self.ring, self.basis[L - 1], n)

    def unit(self, L, n, j, i):
        """N in K with T_L^n T_j^i T_L^-n = N T_j^i."""
        key = (L, n, j, i)
        hit = self._unit_cache.get(key)
        if hit is None:
            conj = self._tpow(L, n) * self._tpow(j, i) * self._tpow(L, -n)
            plain = self._tpow(j, i)
            (_, c), = conj.terms.items()
            (_, c0), = plain.terms.items()
            hit = c * self.ring.base.inv(c0)
            self._unit_cache[key] = hit
        return hit

    def twist_is_trivial(self, L):
        K = self.ring.base
        if not K.action.is_identity(self.basis[L - 1]):
            return False
        return all(self.unit(L, 1, j, 1) == K.one for j in range(1, L))

    def conj(self, L, n, a, j):
        """T_L^n a T_L^-n for an element a of level j < L."""
        step = tuple(n * v for v in self.basis[L - 1])
        if j <= self.flat:
            return self.field.act(step, a)
        lev = self.levels[j]
        if self.is_crossed(j):
            # trivial cocycle: T_L commutes with the crossed variables
            act = self.field.act
            return CrossedElement(lev, tuple(act(step, c) if c else c for c in a.c))
        below = lev.below
        if not a.num:
            return a
        one = self.ring.base.one

        def image(p):
            out = {}
            for i, c in p.items():
                img = self.conj(L, n, c, j - 1)
                N = self.unit(L, n, j, i)
                out[i] = img if N == one else below.rscale(img, N)
            return out

        num = image(a.num)
        if lev.is_one_poly(a.den):
            return TowerFraction(lev, num, lev.one_poly)
        den = image(a.den)
        return lev.make(num, den, reduced=True)

    # base field <-> folded field -------------------------------------------------------
    def embed(self, a):
        """An element of K as an element of the (possibly folded) base level."""
        if self.field is self.ring.base:
            return a
        return self.field.pad(a, self.ring.base)

    def _split_base(self, a):
        """Write a folded-field element as {T-exponents: K coefficient}; None if not integral."""
        K = self.ring.base
        k = K.k
        if self.field is K:
            return {(): a} if a else {}
        if not a:
            return {}
        den = a.den.to_dict()
        # the denominator may carry a monomial in the T variables (a unit)
        shifts = {tuple(int(x) for x in e[k:]) for e in den}
        if len(shifts) != 1:
            return None
        (w,) = shifts
        if k == 0:
            (_, d), = den.items()
            return {tuple(int(x) - y for x, y in zip(e, w)): K(int(c)) / K(int(d))
                    for e, c in a.num.to_dict().items()}
        dpoly = K.ctx.from_dict({e[:k]: c for e, c in den.items()})
        groups = {}
        for e, c in a.num.to_dict().items():
            groups.setdefault(tuple(int(x) - y for x, y in zip(e[k:], w)), {})[e[:k]] = c
        from .scalars import RationalFunction
        return {w: RationalFunction(K, K.ctx.from_dict(g), dpoly) for w, g in groups.items()}

    def _alpha(self, w, r=()):
        """Exponent vector of the folded monomial with T-exponents w, times T^r on the crossed level."""
        c = self.flat
        coeffs = list(w[:c]) + [0] * (self.m - c)
        for i, n in enumerate(self.orders):
            coeffs[c + i] = w[c + i] * n + (r[i] if r else 0)
        return tuple(int(sum(coeffs[i] * self.basis[i][j] for i in range(self.m))) for j in range(self.m))

    def _base_to_ring(self, a, r=()):
        parts = self._split_base(a)
        if parts is None:
            raise ValueError("element is not integral")
        return SkewLaurentPoly(self.ring, {self._alpha(w, r): coeff for w, coeff in parts.items()})

    def _strip_monomial(self, den):
        """(T-monomial, rest) with den = monomial * rest; rest has no monomial factor in T."""
        k = self.ring.base.k
        exps = [tuple(int(x) for x in e[k:]) for e in den.to_dict()]
        low = tuple(min(col) for col in zip(*exps)) if exps and exps[0] else ()
        if not any(low):
            return None, den
        ctx = self.field.ctx
        mono = ctx.from_dict({(0,) * k + low: 1})
        return mono, den / mono

    def base_clear(self, a):
        """(p, q) integral base-level elements with a = p q^-1."""
        if self.field is self.ring.base:
            return a, self.field.one
        F = self.field
        from .scalars import RationalFunction
        mono, rest = self._strip_monomial(a.den)
        one = F.one.num
        p = RationalFunction(F, a.num, mono if mono is not None else one, _reduced=True)
        return p, RationalFunction(F, rest, None, _reduced=True)

    def _content_free(self, poly):
        """poly with its monomial content removed (monomials are units)."""
        exps = [tuple(int(x) for x in e) for e in poly.to_dict()]
        low = tuple(min(col) for col in zip(*exps))
        if any(low):
            poly = poly / self.field.ctx.from_dict({low: 1})
        return poly

    def common_denominator(self, xs):
        """Integral q at the base or crossed level with x q integral for every x in xs.

        q is the lcm of all denominators together with their images under
        the twisting group, so it is invariant up to a unit and can be moved
        past the T^r.
        """
        F = self.field
        from .scalars import RationalFunction
        crossed = self.cyc is not None and any(isinstance(x, CrossedElement) for x in xs)
        lev = self.levels[self.cyc] if crossed else None
        L = None
        for x in xs:
            for a in (x.c if isinstance(x, CrossedElement) else (x,)):
                if not a or a.den.is_one():
                    continue
                _, rest = self._strip_monomial(a.den)
                if rest.is_one():
                    continue
                imgs = [rest]
                if lev is not None:
                    d = RationalFunction(F, rest, None, _reduced=True)
                    imgs = [self._content_free(lev.sig(j, d).num) for j in range(lev.size_)]
                for g in imgs:
                    L = g if L is None else L * (g / L.gcd(g))
        D = F.one if L is None else RationalFunction(F, L, None, _reduced=True)
        if lev is not None:
            return lev.make((D,) + (F.zero,) * (lev.size_ - 1))
        return D

    def crossed_clear(self, x):
        """(p, q) integral crossed elements with x = p q^-1."""
        lev = self.levels[self.cyc]
        q = self.common_denominator([x])
        return lev.mul(x, q), q

    # ring <-> tower ------------------------------------------------------------------
    def _coords(self, alpha):
        return tuple(lattice.dot(row, alpha) for row in self.coords)

    def from_ring(self, f, L=None):
        """Embed a ring element into level L (default top) of the tower."""
        if L is None:
            L = self.m
        if not isinstance(f, SkewLaurentPoly):
            f = self.ring(f)
        k = self.ring.base.k
        c = self.flat
        crossed = self.is_crossed(L)
        if L <= c or crossed:
            F = self.field
            lev = self.levels[L]
            comps = [F.zero] * (lev.size_ if crossed else 1)
            for alpha, a in f.terms.items():
                w = self._coords(alpha)
                if any(w[L:]):
                    raise ValueError("element does not lie in the requested level")
                qs, rs = [], []
                for i, n in enumerate(self.orders):
                    q, r = divmod(w[c + i], n)
                    qs.append(q)
                    rs.append(r)
                slot = lev.slot[tuple(rs)] if crossed else 0
                mono = F.monomial((0,) * k + tuple(w[:c]) + tuple(qs))
                comps[slot] = comps[slot] + self.embed(a) * mono
            if crossed:
                return CrossedElement(lev, tuple(comps))
            return comps[0]
        lev = self.levels[L]
        row = self.coords[L - 1]
        groups = {}
        for alpha, a in f.terms.items():
            i = lattice.dot(row, alpha)
            groups.setdefault(i, {})[alpha] = a
        poly = {}
        for i, terms in groups.items():
            part = SkewLaurentPoly(self.ring, terms, _clean=True)
            if i:
                part = part * self._tpow(L, -i)
            poly[i] = self.from_ring(part, L - 1)
        return lev.from_poly(poly)

    def element_level(self, a):
        if isinstance(a, TowerFraction):
            return a.level.index
        if isinstance(a, CrossedElement):
            return self.cyc_top
        return self.flat

    def to_ring(self, a, L=None):
        """The ring element equal to an integral tower element."""
        if L is None:
            L = self.element_level(a)
        if L <= self.flat:
            return self._base_to_ring(a)
        if self.is_crossed(L):
            lev = self.levels[L]
            out = self.ring.zero
            for s, comp in enumerate(a.c):
                if comp:
                    out = out + self._base_to_ring(comp, lev.residues[s])
            return out
        lev = self.levels[L]
        if not lev.is_one_poly(a.den):
            raise ValueError("element is not integral")
        out = self.ring.zero
        for i, c in a.num.items():
            part = self.to_ring(c, L - 1)
            out = out + (part * self._tpow(L, i) if i else part)
        return out

    def poly_to_ring(self, p, L):
        return self.to_ring(TowerFraction(self.levels[L], p, self.levels[L].one_poly), L)

    def is_integral(self, a, L=None):
        if L is None:
            L = self.element_level(a)
        if L <= self.flat:
            return self._split_base(a) is not None
        if self.is_crossed(L):
            return all(self._split_base(comp) is not None for comp in a.c)
        lev = self.levels[L]
        return lev.is_one_poly(a.den) and all(self.is_integral(c, L - 1) for c in a.num.values())


def standard_tower(ring):
    return Tower.for_ring(ring)


def frac_arith(a, b, op):
    """Field operation ``op`` in {add, mul, inv, neg} on tower elements."""
    lev = a.level
    if op == "neg":
        return lev.neg(a)
    if op == "inv":
        return lev.inv(a)
    if b.level is not lev:
        raise ValueError("fractions from different tower levels")
    if op == "add":
        return lev.add(a, b)
    if op == "mul":
        return lev.mul(a, b)
    raise ValueError(f"unknown operation {op!r}")


def deg_frac(a):
    """length(num) - length(den); -inf for zero."""
    if isinstance(a, CrossedElement):
        return a.level.width(a)
    if not a.num:
        return NEG_INF
    return (max(a.num) - min(a.num)) - (max(a.den) - min(a.den))


def right_divide(f, g, laurent=False):
    """Quotient and remainder with f = q*g + r.

    Supports are shifted to the nonnegative range and r has smaller degree
    than g; with ``laurent=True`` both are shifted to start at exponent 0,
    so the remainder is only shorter than g.
    """
    lev = f.level
    q, r = lev.p_right_divmod(f.c, g.c, laurent)
    return OnePoly(lev, q), OnePoly(lev, r)


def left_divide(f, g, laurent=False):
    """Quotient and remainder with f = g*q + r (see :func:`right_divide`)."""
    lev = f.level
    q, r = lev.p_left_divmod(f.c, g.c, laurent)
    return OnePoly(lev, q), OnePoly(lev, r)


class EuclidResult:
    def __init__(self, gcd, multiple, u, v):
        self.gcd = gcd
        self.multiple = multiple
        self.u = u
        self.v = v

    def __iter__(self):
        return iter((self.gcd, self.multiple, self.u, self.v))

    def __repr__(self):
        return f"EuclidResult(gcd={self.gcd}, multiple={self.multiple}, u={self.u}, v={self.v})"


def gcrd_lclm(f, g):
    """Extended skew Euclid producing f*u = g*v = the least common right multiple.

    The returned ``gcd`` is the matching greatest common left divisor, so
    ``length(multiple) = length(f) + length(g) - length(gcd)``.
    """
    if not f or not g:
        raise ZeroInput("both polynomials must be nonzero")
    lev = f.level
    u, v, gcd = lev.p_lcrm(f.c, g.c)
    multiple = lev.p_mul(f.c, u)
    return EuclidResult(OnePoly(lev, gcd), OnePoly(lev, multiple), OnePoly(lev, u), OnePoly(lev, v))


def gcld_lcrm(f, g):
    return gcrd_lclm(f, g)


def gcrd(f, g):
    """Greatest common right divisor (normalized)."""
    if not f or not g:
        raise ZeroInput("both polynomials must be nonzero")
    lev = f.level
    return OnePoly(lev, lev.p_gcrd(f.c, g.c))


def lclm(f, g):
    """Least common left multiple: returns (multiple, u, v) with u*f = v*g = multiple."""
    if not f or not g:
        raise ZeroInput("both polynomials must be nonzero")
    lev = f.level
    u, v, _ = lev.p_lclm(f.c, g.c)
    return OnePoly(lev, lev.p_mul(u, f.c)), OnePoly(lev, u), OnePoly(lev, v)
