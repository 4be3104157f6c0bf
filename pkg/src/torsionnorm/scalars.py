"""Exact arithmetic in the coefficient field K.

K is either the rationals (``k = 0``) or the rational function field
Q(x_1, ..., x_k) on which Z^m acts by monomial substitutions
``x^v -> x^(M v)``.  Rationals are ``flint.fmpq`` values; rational
functions are :class:`RationalFunction` instances kept in lowest terms.
"""

from fractions import Fraction
from functools import lru_cache

import flint

from . import lattice
from ._expr import Evaluator, parse_expression
from .errors import DivisionByZero, ValidationError


class ActionData:
    """A Z^m-action on exponent vectors of x_1..x_k by commuting unimodular matrices."""

    def __init__(self, matrices, k=None):
        mats = tuple(tuple(tuple(int(v) for v in row) for row in mat) for mat in matrices)
        if k is None:
            k = len(mats[0]) if mats else 0
        for i, mat in enumerate(mats):
            if len(mat) != k or any(len(row) != k for row in mat):
                raise ValidationError(f"action matrix {i} is not {k}x{k}", path=f"action[{i}]")
            if k and abs(lattice.int_det(mat)) != 1:
                raise ValidationError(f"action matrix {i} is not invertible over Z", path=f"action[{i}]")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if lattice.mat_mul(mats[i], mats[j]) != lattice.mat_mul(mats[j], mats[i]):
                    raise ValidationError(f"action matrices {i} and {j} do not commute",
                                          path=f"action[{j}]")
        self.k = k
        self.matrices = mats
        self.m = len(mats)
        self._inverses = tuple(lattice.int_inverse(mat) if k else mat for mat in mats)
        self.trivial = all(mat == lattice.identity(k) for mat in mats)

    @classmethod
    def trivial_action(cls, m, k=0):
        return cls([lattice.identity(k)] * m, k)

    def __eq__(self, other):
        return isinstance(other, ActionData) and (self.k, self.matrices) == (other.k, other.matrices)

    def __hash__(self):
        return hash((self.k, self.matrices))

    def __repr__(self):
        return f"ActionData({[list(map(list, mat)) for mat in self.matrices]!r}, k={self.k})"

    @lru_cache(maxsize=4096)
    def matrix(self, alpha):
        """The matrix prod_i M_i^alpha_i acting on exponent vectors."""
        result = lattice.identity(self.k)
        for mat, inv, a in zip(self.matrices, self._inverses, alpha):
            step = mat if a > 0 else inv
            for _ in range(abs(a)):
                result = lattice.mat_mul(step, result)
        return result

    def is_identity(self, alpha):
        return self.trivial or not any(alpha) or self.matrix(tuple(alpha)) == lattice.identity(self.k)


def _signed(field, num, den):
    """RationalFunction from a coprime pair, fixing the sign of den."""
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    if num.is_zero():
        return field.zero
    return RationalFunction(field, num, den, _reduced=True)


class RationalFunction:
    """num/den with integer polynomials, gcd-free and den with positive leading coefficient."""

    __slots__ = ("field", "num", "den", "_key")

    def __init__(self, field, num, den=None, _reduced=False):
        self.field = field
        ctx = field.ctx
        if den is None:
            den = ctx.from_dict({field._zero_exp: 1})
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = ctx.from_dict({field._zero_exp: 1})
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
                if den.leading_coefficient() < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den
        self._key = None

    # conversions -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field is not self.field:
                raise TypeError("rational functions from different fields")
            return other
        return self.field(other)

    def key(self):
        if self._key is None:
            self._key = (tuple(sorted(self.num.to_dict().items())), tuple(sorted(self.den.to_dict().items())))
        return self._key

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero():
            return o
        if o.num.is_zero():
            return self
        F = self.field
        d1, d2 = self.den, o.den
        if d1 == d2:
            if d1.is_one():
                return RationalFunction(F, self.num + o.num, d1, _reduced=True)
            return RationalFunction(F, self.num + o.num, d1)
        # Henrici: only gcds of the smaller pieces are needed
        g = d1.gcd(d2)
        if g.is_one():
            return _signed(F, self.num * d2 + o.num * d1, d1 * d2)
        e1, e2 = d1 / g, d2 / g
        t = self.num * e2 + o.num * e1
        if t.is_zero():
            return F.zero
        g2 = t.gcd(g)
        if not g2.is_one():
            t = t / g2
            d2 = d2 / g2
        return _signed(F, t, e1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        n1, n2 = self.num, o.num
        if n1.is_zero() or n2.is_zero():
            return self.field.zero
        d1, d2 = self.den, o.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        return _signed(self.field, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return RationalFunction(self.field, num, den, _reduced=True)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return other.field is self.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return self.field.format(self)

    def __repr__(self):
        return f"RationalFunction({self.field.format(self)!r})"


class BaseField:
    """The coefficient field K with its Z^m-action.

    ``k = 0`` gives the rationals with trivial action.
    """

    def __init__(self, k=0, action=None, names=None, m=None):
        if action is None:
            action = ActionData.trivial_action(m or 0, k)
        elif not isinstance(action, ActionData):
            action = ActionData(action, k)
        if action.k != k:
            raise ValidationError(f"action matrices are {action.k}x{action.k} but k = {k}")
        self.k = k
        self.action = action
        self.m = action.m
        if names is None:
            names = ("x",) if k == 1 else tuple(f"x{i + 1}" for i in range(k))
        self.names = tuple(names)
        self._zero_exp = (0,) * k
        if k:
            self.ctx = flint.fmpz_mpoly_ctx.get(self.names, "deglex")
            self.zero = RationalFunction(self, self.ctx.from_dict({}))
            self.one = RationalFunction(self, self.ctx.from_dict({self._zero_exp: 1}))
        else:
            self.ctx = None
            self.zero = flint.fmpq(0)
            self.one = flint.fmpq(1)
        self._act_cache = {}

    @property
    def is_rationals(self):
        return self.k == 0

    def __repr__(self):
        if self.k == 0:
            return "BaseField(QQ)"
        return f"BaseField(QQ({', '.join(self.names)}), action={self.action!r})"

    def __eq__(self, other):
        return isinstance(other, BaseField) and (self.k, self.action, self.names) == (
            other.k, other.action, other.names)

    def __hash__(self):
        return hash((self.k, self.action, self.names))

    # element construction ---------------------------------------------
    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if self.k == 0:
            if isinstance(value, flint.fmpq):
                return value
            if isinstance(value, Fraction):
                return flint.fmpq(value.numerator, value.denominator)
            if isinstance(value, int):
                return flint.fmpq(value)
            raise TypeError(f"cannot convert {value!r} to a rational")
        if isinstance(value, RationalFunction):
            if value.field is not self:
                raise TypeError("rational function from another field")
            return value
        if isinstance(value, flint.fmpq):
            value = Fraction(int(value.p), int(value.q))
        if isinstance(value, (int, Fraction)):
            value = Fraction(value)
            return RationalFunction(
                self,
                self.ctx.from_dict({self._zero_exp: value.numerator}),
                self.ctx.from_dict({self._zero_exp: value.denominator}),
                _reduced=True,
            )
        raise TypeError(f"cannot convert {value!r} to an element of {self!r}")

    def gen(self, i):
        exp = tuple(int(j == i) for j in range(self.k))
        return RationalFunction(self, self.ctx.from_dict({exp: 1}), _reduced=True)

    def pad(self, a, small):
        """Image of an element of ``small`` (a field on the first variables) in this field."""
        if small.k == 0:
            return self(a)
        pad = (0,) * (self.k - small.k)
        num = self.ctx.from_dict({e + pad: c for e, c in a.num.to_dict().items()})
        den = self.ctx.from_dict({e + pad: c for e, c in a.den.to_dict().items()})
        return RationalFunction(self, num, den, _reduced=True)

    def monomial(self, exponent, coeff=1):
        """coeff * x^exponent for an integer (possibly negative) exponent vector."""
        if self.k == 0:
            return self(coeff)
        coeff = Fraction(coeff)
        pos = tuple(max(e, 0) for e in exponent)
        neg = tuple(max(-e, 0) for e in exponent)
        num = self.ctx.from_dict({pos: coeff.numerator})
        den = self.ctx.from_dict({neg: coeff.denominator})
        return RationalFunction(self, num, den, _reduced=(coeff.numerator != 0))

    # field operations -------------------------------------------------
    def inv(self, a):
        if self.k == 0:
            if a == 0:
                raise DivisionByZero("inverse of zero")
            return 1 / a
        return a.inv()

    def is_one(self, a):
        return a == self.one

    def key(self, a):
        """Hashable canonical key for an element."""
        return a if self.k == 0 else a.key()

    def size(self, a):
        if self.k == 0:
            return 1
        return len(a.num) + len(a.den)

    def act(self, alpha, a):
        """gamma_alpha(a): substitute x^v -> x^(M_alpha v)."""
        if self.k == 0 or self.action.trivial or not any(alpha) or not a:
            return a
        alpha = tuple(alpha)
        ck = (alpha, a.key())
        hit = self._act_cache.get(ck)
        if hit is not None:
            return hit
        mat = self.action.matrix(alpha)
        if mat == lattice.identity(self.k):
            res = a
        else:
            num, sn = self._substitute(a.num, mat)
            den, sd = self._substitute(a.den, mat)
            # a = (num x^-sn) / (den x^-sd)
            num = num * self.ctx.from_dict({sd: 1})
            den = den * self.ctx.from_dict({sn: 1})
            res = RationalFunction(self, num, den)
        if len(self._act_cache) > 200000:
            self._act_cache.clear()
        self._act_cache[ck] = res
        return res

    def _substitute(self, poly, mat):
        images = {}
        for exp, c in poly.terms():
            images[lattice.mat_vec(mat, exp)] = c
        shift = tuple(max(0, -min(v[j] for v in images)) for j in range(self.k))
        shifted = {tuple(a + s for a, s in zip(v, shift)): c for v, c in images.items()}
        return self.ctx.from_dict(shifted), shift

    # text --------------------------------------------------------------
    def parse(self, text):
        return parse_expression(text, _FieldEvaluator(self))

    def format(self, a):
        if self.k == 0:
            return str(a)
        num = _format_mpoly(a.num, self.names)
        if a.den.is_one():
            return num
        den = _format_mpoly(a.den, self.names)
        if len(a.num) > 1:
            num = f"({num})"
        if not _is_atom(den):
            den = f"({den})"
        return f"{num}/{den}"

    def is_constant(self, a):
        return self.k == 0 or (a.num.total_degree() <= 0 and a.den.total_degree() <= 0)


def _is_atom(text):
    """A single name, power or integer: safe after '/' without parentheses."""
    return "*" not in text and " " not in text and not text.startswith("-")


def _format_monomial(exp, names):
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_mpoly(poly, names):
    if poly.is_zero():
        return "0"
    out = ""
    for i, (exp, c) in enumerate(sorted(poly.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True)):
        c = int(c)
        mono = _format_monomial(exp, names)
        mag = abs(c)
        body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else str(mag))
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


class _FieldEvaluator(Evaluator):
    def __init__(self, field):
        self.field = field

    def integer(self, n):
        return self.field(n)

    def name(self, ident):
        if ident in self.field.names:
            return self.field.gen(self.field.names.index(ident))
        raise KeyError(ident)

    def div(self, a, b):
        return a * self.field.inv(b)

    def power(self, a, n):
        if n < 0:
            a = self.field.inv(a)
            n = -n
        result = self.field.one
        for _ in range(n):
            result = result * a
        return result


def field_arith(a, b, op):
    """Field operation on two elements of the same base field.

    ``op`` is one of ``add``, ``mul``, ``inv``, ``neg`` (unary ops ignore ``b``).
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        if not a:
            raise DivisionByZero("inverse of zero")
        return 1 / a if isinstance(a, flint.fmpq) else a.inv()
    raise ValueError(f"unknown operation {op!r}")


def apply_action(field, alpha, a):
    """The automorphism gamma_alpha of K applied to ``a``."""
    return field.act(tuple(alpha), a)
