"""Multivariable skew Laurent polynomials K[t_1^{+-1}, ..., t_m^{+-1}].

Monomials are normal ordered, ``t^alpha = t_1^alpha_1 ... t_m^alpha_m``.
Scalars are moved past monomials with ``t^alpha a = gamma_alpha(a) t^alpha``
and generators commute up to units of K, ``t_j t_i = lam_ij t_i t_j`` for
``i < j``.  Products of normal ordered monomials pick up the cocycle
``t^alpha t^beta = c(alpha, beta) t^(alpha + beta)``.
"""

from . import lattice
from ._expr import Evaluator, parse_expression
from .errors import DivisionByZero, RingMismatch, ValidationError
from .scalars import BaseField


def _add_vec(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg_vec(a):
    return tuple(-x for x in a)


class SkewLaurentRing:
    """The ring K[t^{+-1}] of rank m twisted by the base field action.

    ``commutators`` maps pairs ``(i, j)`` with ``i < j`` (0-based) to the unit
    ``lam_ij`` of K with ``t_j t_i = lam_ij t_i t_j``; missing pairs are 1.
    """

    def __init__(self, base=None, m=None, commutators=None, names=None):
        if base is None:
            base = BaseField(0, m=m or 0)
        if m is None:
            m = base.m
        if base.m not in (0, m):
            raise ValidationError(f"base field has an action of rank {base.m}, ring has rank {m}")
        if base.m == 0 and m > 0:
            base = BaseField(base.k, m=m, names=base.names)
        self.base = base
        self.m = m
        if names is None:
            names = ("t",) if m == 1 else tuple(f"t{i + 1}" for i in range(m))
        self.names = tuple(names)
        self.commutators = {}
        for (i, j), lam in (commutators or {}).items():
            if not 0 <= i < j < m:
                raise ValidationError(f"commutator index ({i}, {j}) out of range")
            lam = base(lam)
            if not lam:
                raise ValidationError(f"commutator ({i}, {j}) is zero")
            if lam != base.one:
                self.commutators[(i, j)] = lam
        self._check_commutators()
        self.trivial_cocycle = not self.commutators
        self.commutative = self.trivial_cocycle and base.action.trivial
        self._cocycle_cache = {}
        self._rho_cache = {}
        self.zero = SkewLaurentPoly(self, {})
        self.one = SkewLaurentPoly(self, {(0,) * m: base.one})

    def _check_commutators(self):
        if self.m < 3 or not self.commutators:
            return
        K = self.base
        e = lambda i: tuple(int(r == i) for r in range(self.m))
        for i in range(self.m):
            for j in range(i + 1, self.m):
                for k in range(j + 1, self.m):
                    lij, lik, ljk = (self.lam(i, j), self.lam(i, k), self.lam(j, k))
                    lhs = ljk * K.act(e(j), lik) * lij
                    rhs = K.act(e(k), lij) * lik * K.act(e(i), ljk)
                    if lhs != rhs:
                        raise ValidationError(
                            f"commutators of generators {i + 1}, {j + 1}, {k + 1} are inconsistent")

    def lam(self, i, j):
        return self.commutators.get((i, j), self.base.one)

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, SkewLaurentRing) and self.m == other.m and self.base == other.base
                and self.names == other.names
                and {k: self.base.key(v) for k, v in self.commutators.items()}
                == {k: other.base.key(v) for k, v in other.commutators.items()})

    def __hash__(self):
        return hash((self.base, self.m, self.names))

    def __repr__(self):
        return f"SkewLaurentRing({self.base!r}, m={self.m})"

    # elements ------------------------------------------------------------
    def __call__(self, value):
        if isinstance(value, SkewLaurentPoly):
            if value.ring != self:
                raise RingMismatch("polynomial from another ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, dict):
            return SkewLaurentPoly(self, {tuple(a): self.base(c) for a, c in value.items()})
        return self.constant(value)

    def constant(self, a):
        return self.monomial((0,) * self.m, a)

    def monomial(self, alpha, coeff=None):
        coeff = self.base.one if coeff is None else self.base(coeff)
        if len(alpha) != self.m:
            raise ValueError(f"exponent {alpha} has wrong length for rank {self.m}")
        return SkewLaurentPoly(self, {tuple(int(a) for a in alpha): coeff})

    def gen(self, i):
        return self.monomial(tuple(int(r == i) for r in range(self.m)))

    def gens(self):
        return [self.gen(i) for i in range(self.m)]

    # cocycle ---------------------------------------------------------------
    def act(self, alpha, a):
        return self.base.act(alpha, a)

    def _rho(self, p, i, top):
        """Unit rho with t_top^p t_i t_top^-p = rho t_i (i < top)."""
        key = (p, i, top)
        hit = self._rho_cache.get(key)
        if hit is not None:
            return hit
        K = self.base
        lam = self.lam(i, top)
        e = [0] * self.m
        if p == 0:
            res = K.one
        elif p > 0:
            e[top] = p - 1
            res = K.act(tuple(e), lam) * self._rho(p - 1, i, top)
        else:
            e[top] = p
            res = K.inv(K.act(tuple(e), lam)) * self._rho(p + 1, i, top)
        self._rho_cache[key] = res
        return res

    def _power_unit(self, rho, i, b):
        """Coefficient N with (rho t_i)^b = N t_i^b."""
        K = self.base
        res = K.one
        e = [0] * self.m
        if b > 0:
            for r in range(b):
                e[i] = r
                res = res * K.act(tuple(e), rho)
        else:
            for r in range(1, -b + 1):
                e[i] = -r
                res = res * K.inv(K.act(tuple(e), rho))
        return res

    def cocycle(self, alpha, beta):
        """The unit c(alpha, beta) with t^alpha t^beta = c(alpha, beta) t^(alpha + beta)."""
        if self.trivial_cocycle:
            return self.base.one
        alpha, beta = tuple(alpha), tuple(beta)
        key = (alpha, beta)
        hit = self._cocycle_cache.get(key)
        if hit is None:
            hit = self._cocycle(alpha, beta, self.m)
            self._cocycle_cache[key] = hit
        return hit

    def _cocycle(self, alpha, beta, top):
        # only the first ``top`` coordinates are nonzero
        K = self.base
        if top <= 1:
            return K.one
        last = top - 1
        p = alpha[last]
        head_a = alpha[:last] + (0,) * (self.m - last)
        head_b = beta[:last] + (0,) * (self.m - last)
        u = K.one
        if p and any(head_b):
            prefix = [0] * self.m
            for i in range(last):
                if beta[i]:
                    rho = self._rho(p, i, last)
                    if rho != K.one:
                        u = u * K.act(tuple(prefix), self._power_unit(rho, i, beta[i]))
                prefix[i] = beta[i]
        return K.act(head_a, u) * self._cocycle(head_a, head_b, last)

    def monomial_product(self, alpha, a, beta, b):
        """(a t^alpha)(b t^beta) as (coefficient, exponent)."""
        c = a * self.base.act(alpha, b)
        if not self.trivial_cocycle:
            c = c * self.cocycle(alpha, beta)
        return c, _add_vec(alpha, beta)

    # text ------------------------------------------------------------------
    def parse(self, text):
        return parse_expression(text, _PolyEvaluator(self))

    def format(self, f):
        if not f.terms:
            return "0"
        K = self.base
        parts = []
        for alpha in sorted(f.terms, reverse=True):
            c = f.terms[alpha]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.names, alpha) if e)
            cs = K.format(c)
            if K.k and (len(c.num) > 1 or not c.den.is_one()) and mono:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


class SkewLaurentPoly:
    """Sparse element sum a_alpha t^alpha with no zero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, _clean=False):
        self.ring = ring
        if not _clean:
            terms = {a: c for a, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    def _check(self, other):
        if not isinstance(other, SkewLaurentPoly):
            return self.ring(other)
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch("polynomials over different rings")
        return other

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SkewLaurentPoly):
            try:
                other = self.ring(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            K = self.ring.base
            self._hash = hash(frozenset((a, K.key(c)) for a, c in self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            v = terms.get(a)
            if v is None:
                terms[a] = c
            else:
                s = v + c
                if s:
                    terms[a] = s
                else:
                    del terms[a]
        return SkewLaurentPoly(self.ring, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return SkewLaurentPoly(self.ring, {a: -c for a, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        ring = self.ring
        terms = {}
        if ring.commutative:
            for a, c in self.terms.items():
                for b, d in other.terms.items():
                    e = _add_vec(a, b)
                    terms[e] = terms[e] + c * d if e in terms else c * d
        else:
            for a, c in self.terms.items():
                for b, d in other.terms.items():
                    v, e = ring.monomial_product(a, c, b, d)
                    terms[e] = terms[e] + v if e in terms else v
        return SkewLaurentPoly(ring, terms)

    def __rmul__(self, other):
        return self._check(other) * self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # structure -----------------------------------------------------------
    def support(self):
        return set(self.terms)

    def coefficient(self, alpha):
        return self.terms.get(tuple(alpha), self.ring.base.zero)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_unit(self):
        return self.is_monomial()

    def leading(self):
        """The single (exponent, coefficient) pair of a monomial."""
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self.terms.items()))

    def inverse(self):
        """Inverse of a monomial unit a t^alpha."""
        if not self.terms:
            raise DivisionByZero("inverse of zero")
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible in the Laurent ring")
        ring = self.ring
        K = ring.base
        alpha, a = self.leading()
        neg = _neg_vec(alpha)
        v = K.inv(K.act(neg, a) * ring.cocycle(neg, alpha))
        return SkewLaurentPoly(ring, {neg: v}, _clean=True)

    def map_coefficients(self, fn):
        return SkewLaurentPoly(self.ring, {a: fn(c) for a, c in self.terms.items()})

    def size(self):
        K = self.ring.base
        return sum(K.size(c) for c in self.terms.values())

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"SkewLaurentPoly({self.ring.format(self)!r})"


class _PolyEvaluator(Evaluator):
    def __init__(self, ring):
        self.ring = ring

    def integer(self, n):
        return self.ring.constant(n)

    def name(self, ident):
        ring = self.ring
        if ident in ring.names:
            return ring.gen(ring.names.index(ident))
        aliases = {"t": 0} if ring.m == 1 else {}
        if ring.m == 1 and ident == "t1":
            aliases["t1"] = 0
        if ident in aliases:
            return ring.gen(aliases[ident])
        K = ring.base
        if ident in K.names:
            return ring.constant(K.gen(K.names.index(ident)))
        if K.k == 1 and ident == "x1":
            return ring.constant(K.gen(0))
        raise KeyError(ident)

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        if not b.is_monomial():
            raise ValueError("can only divide by a monomial")
        return a * b.inverse()

    def power(self, a, n):
        if n < 0 and not a.is_monomial():
            raise ValueError("negative powers are only allowed for monomials")
        return a ** n


class OneVarView:
    """A polynomial written as sum_i c_i s^i over the kernel subring of phi.

    ``s`` is the monomial ``mu = t^beta`` with ``phi(beta) = d`` and each
    ``c_i`` is supported on ker(phi).  Multiplication follows
    ``s c = (mu c mu^-1) s``.
    """

    def __init__(self, ring, phi, coeffs):
        self.ring = ring
        self.phi = tuple(int(a) for a in phi)
        self.d = lattice.content(self.phi)
        self.beta = lattice.choose_beta(self.phi)
        self.coeffs = {i: c for i, c in coeffs.items() if c}

    def __eq__(self, other):
        return (isinstance(other, OneVarView) and self.ring == other.ring and self.phi == other.phi
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs[i] + c if i in coeffs else c
        return OneVarView(self.ring, self.phi, coeffs)

    def __mul__(self, other):
        coeffs = {}
        for i, a in self.coeffs.items():
            mu_i = mu_power(self.ring, self.beta, i)
            mu_inv = mu_power(self.ring, self.beta, -i)
            for j, b in other.coeffs.items():
                c = a * (mu_i * b * mu_inv)
                coeffs[i + j] = coeffs[i + j] + c if i + j in coeffs else c
        return OneVarView(self.ring, self.phi, coeffs)

    def degree(self):
        """Top minus bottom s-exponent; -inf for zero."""
        if not self.coeffs:
            return float("-inf")
        return max(self.coeffs) - min(self.coeffs)

    def __repr__(self):
        inner = ", ".join(f"{i}: {c}" for i, c in sorted(self.coeffs.items()))
        return f"OneVarView(phi={self.phi}, d={self.d}, beta={self.beta}, {{{inner}}})"


def mu_power(ring, beta, i):
    """(t^beta)^i as an element of the ring (a monomial with a unit coefficient)."""
    cache = ring.__dict__.setdefault("_mu_cache", {})
    key = (beta, i)
    hit = cache.get(key)
    if hit is None:
        mu = ring.monomial(beta)
        hit = mu ** i
        cache[key] = hit
    return hit


def sl_arith(f, g, op):
    """Ring operation ``op`` in {add, mul, neg} (``neg`` ignores ``g``)."""
    if op == "neg":
        return -f
    if g is not None and f.ring != g.ring:
        raise RingMismatch("polynomials over different rings")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def gamma_phi(f, phi):
    """Regroup f as a one-variable skew Laurent polynomial in s = t^beta."""
    phi = tuple(int(a) for a in phi)
    d = lattice.content(phi)
    beta = lattice.choose_beta(phi)
    ring = f.ring
    groups = {}
    for alpha, a in f.terms.items():
        i = lattice.dot(phi, alpha) // d
        groups.setdefault(i, {})[alpha] = a
    coeffs = {}
    for i, terms in groups.items():
        part = SkewLaurentPoly(ring, terms, _clean=True)
        coeffs[i] = part * mu_power(ring, beta, -i) if i else part
    return OneVarView(ring, phi, coeffs)


def gamma_phi_inverse(view):
    ring = view.ring
    out = ring.zero
    for i, c in view.coeffs.items():
        out = out + (c * mu_power(ring, view.beta, i) if i else c)
    return out


def support(f):
    return f.support()
