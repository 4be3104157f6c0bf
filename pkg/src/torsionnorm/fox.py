"""Group presentations, Fox calculus and torsion of deficiency-one presentations.

Words use letter syntax: each lowercase letter is a generator, the
matching uppercase letter its inverse (``abAB`` is the commutator).
Representations are psi-compatible, ``g -> A_g t^psi(g)`` with ``A_g`` an
invertible d x d matrix over K; abelian and metabelian ones can be built
automatically.
"""

from fractions import Fraction

from . import lattice
from .dieudonne import ClearedFraction, dieudonne_det, clear, phi_det
from .errors import (InvalidRep, NoPivotGenerator, NotDeficiencyOne, ParseError,
                     ValidationError, ZeroMap, ZeroTorsion)
from .norms import NEG_INF, norm_ball, torsion_seminorm
from .ore import Tower, deg_frac
from .scalars import BaseField
from .skew_laurent import SkewLaurentRing


class FreeWord:
    """A word in the free group as a tuple of (generator index, +-1) letters."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        out = []
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +-1")
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((int(g), e))
        self.letters = tuple(out)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other):
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord((g, -e) for g, e in reversed(self.letters))

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def exponent_sums(self, n):
        out = [0] * n
        for g, e in self.letters:
            out[g] += e
        return out

    def format(self, names):
        return "".join(names[g] if e > 0 else names[g].upper() for g, e in self.letters) or "1"

    def __repr__(self):
        return f"FreeWord({self.letters})"


def parse_word(text, names, line=None, path=None):
    """Parse a letter word; whitespace is ignored and ``1`` is the empty word."""
    index = {g: i for i, g in enumerate(names)}
    letters = []
    for col, ch in enumerate(text, start=1):
        if ch.isspace() or ch in "*.":
            continue
        if ch == "1" and text.strip() == "1":
            continue
        g = ch.lower()
        if not ch.isalpha() or g not in index:
            raise ParseError(f"unknown generator letter {ch!r}", text, line, col, path)
        letters.append((index[g], 1 if ch.islower() else -1))
    return FreeWord(letters)


class Presentation:
    """<g_1, ..., g_n | r_1, ..., r_k> with single-letter generator names."""

    def __init__(self, generators, relators, name=None):
        if isinstance(generators, int):
            generators = "abcdefghijklmnopqrstuvwxyz"[:generators]
        generators = tuple(generators)
        for g in generators:
            if len(g) != 1 or not g.isalpha() or not g.islower():
                raise ValidationError(f"generator names must be single lowercase letters, got {g!r}")
        if len(set(generators)) != len(generators):
            raise ValidationError("generator names must be distinct")
        self.generators = generators
        self.n = len(generators)
        rels = []
        for i, r in enumerate(relators):
            if isinstance(r, str):
                r = parse_word(r, generators, line=i + 1)
            rels.append(r)
        self.relators = tuple(rels)
        self.name = name

    @classmethod
    def parse(cls, generators, relators, path=None):
        rels = []
        for i, r in enumerate(relators):
            sub = None if path is None else f"{path}[{i}]"
            rels.append(parse_word(r, tuple(generators), line=i + 1, path=sub))
        return cls(generators, rels)

    @property
    def deficiency(self):
        return self.n - len(self.relators)

    def relation_matrix(self):
        return [r.exponent_sums(self.n) for r in self.relators]

    def __repr__(self):
        rels = ", ".join(r.format(self.generators) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def fox_derivative(w, i):
    """The free derivative d w / d g_i as {FreeWord: integer coefficient}."""
    out = {}
    prefix = []
    for g, e in w:
        if g == i:
            if e > 0:
                key = FreeWord(prefix)
                out[key] = out.get(key, 0) + 1
            else:
                key = FreeWord(prefix + [(g, -1)])
                out[key] = out.get(key, 0) - 1
        prefix.append((g, e))
    return {k: v for k, v in out.items() if v}


# matrices over the ring ---------------------------------------------------------


def _identity(ring, d):
    return [[ring.one if i == j else ring.zero for j in range(d)] for i in range(d)]


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for r in range(k):
                a, b = A[i][r], B[r][j]
                if a and b:
                    acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else A[i][0].ring.zero)
        out.append(row)
    return out


def _mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _field_inverse(K, A):
    """Inverse of a d x d matrix over the commutative field K (None if singular)."""
    d = len(A)
    rows = [list(A[i]) + [K.one if i == j else K.zero for j in range(d)] for i in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if rows[r][col]), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = K.inv(rows[col][col])
        rows[col] = [e * inv for e in rows[col]]
        for r in range(d):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [e - f * w for e, w in zip(rows[r], rows[col])]
    return [row[d:] for row in rows]


class CompatibleRep:
    """g -> A_g t^psi(g) into d x d matrices over a skew Laurent ring.

    ``psi`` lists one exponent vector per generator and ``units`` one
    invertible d x d matrix over K per generator (identity if omitted).
    The relators are checked to map to the identity.
    """

    def __init__(self, presentation, ring, psi, units=None, name=None):
        self.presentation = presentation
        self.ring = ring
        self.name = name
        n = presentation.n
        psi = [tuple(int(a) for a in v) for v in psi]
        if len(psi) != n or any(len(v) != ring.m for v in psi):
            raise InvalidRep(f"psi must give {n} vectors of length {ring.m}")
        self.psi = psi
        K = ring.base
        if units is None:
            units = [[[K.one]] for _ in range(n)]
        if len(units) != n:
            raise InvalidRep(f"expected {n} unit matrices, got {len(units)}")
        self.d = len(units[0])
        self.units = []
        self.unit_inverses = []
        for g, A in enumerate(units):
            A = [[K(a) for a in row] for row in A]
            if len(A) != self.d or any(len(row) != self.d for row in A):
                raise InvalidRep(f"unit matrix of generator {presentation.generators[g]} is not {self.d}x{self.d}")
            Ainv = _field_inverse(K, A)
            if Ainv is None:
                raise InvalidRep(f"unit matrix of generator {presentation.generators[g]} is singular")
            self.units.append(A)
            self.unit_inverses.append(Ainv)
        self._letter = {}
        for g in range(n):
            mono = ring.monomial(psi[g])
            inv_mono = ring.monomial(tuple(-a for a in psi[g]))
            self._letter[(g, 1)] = [[ring.constant(a) * mono for a in row] for row in self.units[g]]
            self._letter[(g, -1)] = [[inv_mono * ring.constant(a) for a in row]
                                     for row in self.unit_inverses[g]]
        self.check()

    def letter(self, g, e):
        return self._letter[(g, e)]

    def image(self, w):
        out = _identity(self.ring, self.d)
        for g, e in w:
            out = _mat_mul(out, self._letter[(g, e)])
        return out

    def check(self):
        """Raise InvalidRep unless psi kills all relators and rho(r) = 1."""
        p = self.presentation
        ident = _identity(self.ring, self.d)
        for j, r in enumerate(p.relators):
            sums = r.exponent_sums(p.n)
            image = tuple(sum(s * v[c] for s, v in zip(sums, self.psi)) for c in range(self.ring.m))
            if any(image):
                raise InvalidRep(f"psi does not kill relator {j + 1} ({r.format(p.generators)})")
            if not _mat_eq(self.image(r), ident):
                raise InvalidRep(f"relator {j + 1} ({r.format(p.generators)}) does not map to the identity")

    # constructors ----------------------------------------------------------
    @classmethod
    def abelianization(cls, presentation, names=None):
        """The free abelianization pi -> H_1(pi)/torsion = Z^m over Q."""
        psi = abelianization_map(presentation)
        m = len(psi[0]) if psi else 0
        ring = SkewLaurentRing(m=m, names=names)
        return cls(presentation, ring, psi, name="abelian")

    @classmethod
    def metabelian(cls, presentation, action, psi, exponents, names=None, field_names=None):
        """g -> x^{u_g} t^{psi(g)} over Q(x_1..x_k) with t_i acting by ``action[i]``.

        This is the data of a homomorphism to Z^k semidirect Z^m.
        """
        k = len(exponents[0]) if exponents else 0
        K = BaseField(k, action, names=field_names)
        ring = SkewLaurentRing(K, len(action), names=names)
        units = [[[K.monomial(tuple(int(a) for a in u), 1)]] for u in exponents]
        return cls(presentation, ring, psi, units, name="metabelian")


def integer_kernel(matrix, n):
    """Basis (rows) of {v in Z^n : matrix v = 0} in echelon form."""
    if not matrix:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    transposed = [[row[i] for row in matrix] for i in range(n)]
    u, rank = lattice.row_echelon_transform(transposed)
    basis = [list(row) for row in u[rank:]]
    if not basis:
        return []
    v, r2 = lattice.row_echelon_transform(basis)
    basis = [[sum(v[i][k] * basis[k][j] for k in range(len(basis))) for j in range(n)]
             for i in range(len(basis))]
    # positive pivots, reduced entries above them
    pivots = []
    for row in basis:
        c = next(j for j, a in enumerate(row) if a)
        if row[c] < 0:
            row[:] = [-a for a in row]
        pivots.append(c)
    for i, c in enumerate(pivots):
        for h in range(i):
            q = basis[h][c] // basis[i][c]
            if q:
                basis[h] = [a - q * b for a, b in zip(basis[h], basis[i])]
    return [tuple(row) for row in basis]


def abelianization_map(presentation):
    """psi(g_i) in Z^m with psi onto the free part of the abelianization."""
    n = presentation.n
    N = integer_kernel(presentation.relation_matrix(), n)
    return [tuple(row[i] for row in N) for i in range(n)]


def alexander_matrix(presentation, rep):
    """Block matrix whose (j, i) block is rho(d r_j / d g_i)."""
    ring = rep.ring
    d = rep.d
    n = presentation.n
    rows = []
    for r in presentation.relators:
        blocks = [[[ring.zero] * d for _ in range(d)] for _ in range(n)]
        prefix = _identity(ring, d)
        for g, e in r:
            step = rep.letter(g, e)
            after = _mat_mul(prefix, step)
            term = prefix if e > 0 else after
            sign = 1 if e > 0 else -1
            blk = blocks[g]
            for a in range(d):
                for b in range(d):
                    if term[a][b]:
                        blk[a][b] = blk[a][b] + term[a][b] if sign > 0 else blk[a][b] - term[a][b]
            prefix = after
        for a in range(d):
            rows.append([blocks[i][a][b] for i in range(n) for b in range(d)])
    return rows


def _one_minus(rep, h):
    ring = rep.ring
    img = rep.letter(h, 1)
    return [[(ring.one if i == j else ring.zero) - img[i][j] for j in range(rep.d)]
            for i in range(rep.d)]


def _field_det(K, A):
    d = len(A)
    rows = [list(r) for r in A]
    det = K.one
    for col in range(d):
        piv = next((r for r in range(col, d) if rows[r][col]), None)
        if piv is None:
            return K.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = K.inv(rows[col][col])
        for r in range(col + 1, d):
            if rows[r][col]:
                f = rows[r][col] * inv
                rows[r] = [e - f * w for e, w in zip(rows[r], rows[col])]
    return det


def choose_pivot(rep):
    """First generator with psi(h) = 0 and det(1 - A_h) != 0 over K, else the
    first generator with det(1 - rho(h)) != 0 over the skew field."""
    K = rep.ring.base
    n = rep.presentation.n
    for h in range(n):
        if not any(rep.psi[h]):
            A = [[(K.one if i == j else K.zero) - rep.units[h][i][j] for j in range(rep.d)]
                 for i in range(rep.d)]
            if _field_det(K, A):
                return h
    for h in range(n):
        if not dieudonne_det(_one_minus(rep, h), ring=rep.ring).is_zero:
            return h
    raise NoPivotGenerator("no generator h with det(1 - rho(h)) invertible")


class TorsionResult:
    """Torsion tau = det(B_2) det(1 - rho(h))^-1, or zero.

    ``cleared`` is a ClearedFraction (None when tau = 0), ``pivot`` the
    index of h, ``value`` the element of the skew field and ``verified``
    the outcome of the cross-multiplication check f_n = tau f_d.
    """

    def __init__(self, rep, pivot, cleared, value, tower, det_b2, det_h, verified):
        self.rep = rep
        self.pivot = pivot
        self.cleared = cleared
        self.value = value
        self.tower = tower
        self.det_b2 = det_b2
        self.det_h = det_h
        self.verified = verified

    @property
    def is_zero(self):
        return self.cleared is None

    @property
    def provenance(self):
        p = self.rep.presentation
        return {"pivot": p.generators[self.pivot], "deleted_column": self.pivot}

    def __repr__(self):
        if self.is_zero:
            return "TorsionResult(0)"
        return f"TorsionResult({self.cleared.f_n} / {self.cleared.f_d})"


def torsion(presentation, rep, h="auto"):
    """Torsion of a deficiency-one presentation twisted by ``rep``."""
    p = presentation
    if p.deficiency != 1:
        raise NotDeficiencyOne(
            f"torsion needs n - 1 relators; got {len(p.relators)} for {p.n} generators")
    if h == "auto" or h is None:
        h = choose_pivot(rep)
    elif isinstance(h, str):
        if h not in p.generators:
            raise NoPivotGenerator(f"unknown pivot generator {h!r}")
        h = p.generators.index(h)
    ring = rep.ring
    tower = Tower.for_ring(ring)
    F = tower.top
    d = rep.d
    det_h = dieudonne_det(_one_minus(rep, h), tower)
    if det_h.is_zero:
        raise NoPivotGenerator(f"det(1 - rho({p.generators[h]})) vanishes")
    A = alexander_matrix(p, rep)
    keep = [c for c in range(p.n * d) if c // d != h]
    B2 = [[row[c] for c in keep] for row in A]
    if B2:
        det_b2 = dieudonne_det(B2, tower)
    else:
        det_b2 = None
    if det_b2 is not None and det_b2.is_zero:
        return TorsionResult(rep, h, None, F.zero, tower, det_b2, det_h, True)
    top = det_b2.signed_value() if det_b2 is not None else F.one
    value = F.mul(top, F.inv(det_h.signed_value()))
    num, den = clear(tower, value)
    f_n, f_d = tower.to_ring(num), tower.to_ring(den)
    verified = tower.from_ring(f_n) == F.mul(value, tower.from_ring(f_d))
    return TorsionResult(rep, h, ClearedFraction(f_n, f_d), value, tower, det_b2, det_h, verified)


def delta_bar(presentation, rep, phi, method="newton", result=None):
    """max{0, degree of the torsion in direction phi} (times the content of phi).

    ``method="newton"`` reads it off the cleared fraction; ``method="deg"``
    recomputes both determinants in the phi-adapted tower.  Returns
    NEG_INF when the torsion vanishes.
    """
    phi = tuple(int(a) for a in phi)
    if not any(phi):
        raise ZeroMap("phi must be nonzero")
    if len(phi) != rep.ring.m:
        raise ValidationError(f"phi has length {len(phi)}, expected {rep.ring.m}")
    if result is None:
        result = torsion(presentation, rep)
    if result.is_zero:
        return NEG_INF
    if method == "newton":
        return torsion_seminorm(result.cleared, phi)
    if method != "deg":
        raise ValueError(f"unknown method {method!r}")
    c = lattice.content(phi)
    prim = tuple(a // c for a in phi)
    h = result.pivot
    A = alexander_matrix(presentation, rep)
    keep = [col for col in range(presentation.n * rep.d) if col // rep.d != h]
    B2 = [[row[col] for col in keep] for row in A]
    deg = -deg_frac(phi_det(_one_minus(rep, h), prim).value)
    if B2:
        deg += deg_frac(phi_det(B2, prim).value)
    return Fraction(c * max(0, deg))


class PresentationNorm:
    """The torsion seminorm of a presentation, valid for all phi at once."""

    def __init__(self, result):
        if result.is_zero:
            raise ZeroTorsion("the torsion vanishes; delta_bar is -inf everywhere")
        self.result = result
        self.cleared = result.cleared
        self.ball = norm_ball(self.cleared)

    def __call__(self, phi):
        return torsion_seminorm(self.cleared, phi)

    @property
    def dual(self):
        return self.ball.dual


def presentation_norm(presentation, rep, result=None):
    if result is None:
        result = torsion(presentation, rep)
    return PresentationNorm(result)


# name used by the operation contract
harvey_norm = presentation_norm


# bundled presentations ------------------------------------------------------------

KNOWN = {
    "unknot": ("a", []),
    "trefoil": ("ab", ["abaBAB"]),
    "figure-eight": ("ab", ["abABaBAbaB"]),
    "hopf": ("ab", ["abAB"]),
    "whitehead": ("ab", ["abaBABabABAbabAB"]),
}


def known_presentation(name):
    try:
        gens, rels = KNOWN[name]
    except KeyError:
        raise ValidationError(f"unknown presentation {name!r}; choose from {sorted(KNOWN)}") from None
    return Presentation(gens, rels, name=name)
