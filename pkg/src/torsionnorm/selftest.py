"""A small bundled property suite, runnable from the command line.

Each check draws seeded random data (``TORSIONNORM_SEED`` overrides the
seed) and counts passes and failures of an exact identity.
"""

from fractions import Fraction

from . import lattice
from .dieudonne import clear_denominators, dieudonne_det
from .fox import CompatibleRep, delta_bar, known_presentation, torsion
from .norms import matrix_seminorm_from_deg, seminorm, torsion_seminorm
from .randoms import (commutative_ring, random_matrix, random_phi, random_poly, rng,
                      seed_from_env, twisted_ring)


def _newton_additivity(r, rounds):
    R = twisted_ring(2)
    ok = bad = 0
    for _ in range(rounds):
        f, g = random_poly(r, R), random_poly(r, R)
        fg = f * g
        for _ in range(5):
            phi = random_phi(r, 2)
            if seminorm(fg, phi) == seminorm(f, phi) + seminorm(g, phi):
                ok += 1
            else:
                bad += 1
    return ok, bad


def _two_paths(r, rounds):
    ok = bad = 0
    for R in (commutative_ring(2), twisted_ring(2)):
        for _ in range(rounds):
            B = random_matrix(r, R, 2)
            det = dieudonne_det(B)
            if det.is_zero:
                continue
            c = clear_denominators(det)
            for phi in lattice.primitive_vectors(2, 1):
                if torsion_seminorm(c, phi) == matrix_seminorm_from_deg(B, phi):
                    ok += 1
                else:
                    bad += 1
    return ok, bad


def _cofactor(r, rounds):
    R = commutative_ring(2)
    ok = bad = 0
    for _ in range(rounds):
        B = random_matrix(r, R, 3)
        expected = R.zero
        for p in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)):
            term = B[0][p[0]] * B[1][p[1]] * B[2][p[2]]
            expected = expected + term if p[3] > 0 else expected - term
        det = dieudonne_det(B)
        if det.is_zero:
            same = not expected
        else:
            T = det.tower
            same = bool(expected) and det.signed_value() == T.from_ring(expected)
        ok, bad = (ok + 1, bad) if same else (ok, bad + 1)
    return ok, bad


def _triangle(r, rounds):
    R = twisted_ring(2)
    ok = bad = 0
    for _ in range(rounds):
        B = random_matrix(r, R, 2)
        det = dieudonne_det(B)
        if det.is_zero:
            continue
        c = clear_denominators(det)
        p, q = random_phi(r, 2), random_phi(r, 2)
        s = tuple(a + b for a, b in zip(p, q))
        lhs = torsion_seminorm(c, s) if any(s) else Fraction(0)
        if lhs <= torsion_seminorm(c, p) + torsion_seminorm(c, q):
            ok += 1
        else:
            bad += 1
    return ok, bad


def _knots(r, rounds):
    expected = {"unknot": 0, "trefoil": 1, "figure-eight": 1}
    ok = bad = 0
    for name, value in expected.items():
        P = known_presentation(name)
        rep = CompatibleRep.abelianization(P)
        res = torsion(P, rep)
        for method in ("newton", "deg"):
            if delta_bar(P, rep, (1,), method, res) == value:
                ok += 1
            else:
                bad += 1
    return ok, bad


CHECKS = [
    ("newton_additivity", _newton_additivity, 20),
    ("two_path_equality", _two_paths, 3),
    ("cofactor_determinant", _cofactor, 5),
    ("triangle_inequality", _triangle, 6),
    ("knot_delta_bar", _knots, 1),
]


def run(seed=None):
    """Run every check; returns {"passed", "failed", "seed", "checks"}."""
    if seed is None:
        seed = seed_from_env()
    r = rng(seed)
    checks = []
    passed = failed = 0
    for name, fn, rounds in CHECKS:
        ok, bad = fn(r, rounds)
        checks.append({"name": name, "passed": ok, "failed": bad})
        passed += ok
        failed += bad
    return {"passed": passed, "failed": failed, "seed": seed, "checks": checks}
