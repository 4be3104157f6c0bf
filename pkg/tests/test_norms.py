from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_width
from torsionnorm import lattice
from torsionnorm.dieudonne import ClearedFraction, clear_denominators, dieudonne_det
from torsionnorm.errors import NotASummand, ZeroMap, ZeroPolynomial
from torsionnorm.norms import (NEG_INF, LatticePolytope, deg_phi, matrix_seminorm_from_deg,
                               minkowski, newton, norm_ball, seminorm, torsion_seminorm)
from torsionnorm.randoms import commutative_ring, random_matrix, random_phi, random_poly, rng, twisted_ring
from torsionnorm.skew_laurent import SkewLaurentRing

R1 = SkewLaurentRing(m=1)


def poly_points(*pts):
    return LatticePolytope(pts)


def test_newton_examples(R2):
    assert newton(R2("1 + t1 + t1*t2^2")).vertices == ((0, 0), (1, 0), (1, 2))
    assert newton(R2("3*t1^2*t2^-1")).vertices == ((2, -1),)
    assert newton(R2("(t1 - 1)*(t2 - 1)")).vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
    with pytest.raises(ZeroPolynomial):
        newton(R2.zero)


def test_hull_drops_interior_points():
    P = LatticePolytope([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)])
    assert P.vertices == ((0, 0), (0, 2), (2, 0), (2, 2))


def test_seminorm_examples(R2):
    assert seminorm(R2("1 + t1*t2^2"), (1, 1)) == 3
    assert seminorm(R2("5*t1^3*t2"), (2, -7)) == 0
    assert seminorm(R2("t1 + t2"), (1, 1)) == 0
    assert seminorm(R2.zero, (1, 0)) == 0
    assert seminorm(R2("1 + t1*t2^2"), (Fraction(1, 2), 0)) == Fraction(1, 2)


def test_torsion_seminorm_examples():
    t = R1("t")
    trefoil = ClearedFraction(t * t - t + R1.one, t - R1.one)
    assert torsion_seminorm(trefoil, (1,)) == 1
    same = ClearedFraction(t - R1.one, t - R1.one)
    assert torsion_seminorm(same, (1,)) == 0
    clamp = ClearedFraction(R1.one, t - R1.one)
    assert torsion_seminorm(clamp, (1,)) == 0


def test_deg_phi_examples(R2):
    assert deg_phi(R2("t1 + t2"), (1, 0)) == 1
    f = R2("t1 - t2")
    assert deg_phi([[f, f], [f, f]], (1, 1)) == NEG_INF
    assert matrix_seminorm_from_deg([[f, f], [f, f]], (1, 1)) == NEG_INF
    with pytest.raises(ZeroMap):
        deg_phi(R2("t1"), (0, 0))


def test_two_paths_random_2x2(R2):
    r = rng()
    for _ in range(5):
        B = random_matrix(r, R2, 2)
        c = clear_denominators(dieudonne_det(B))
        assert torsion_seminorm(c, (1, 1)) == matrix_seminorm_from_deg(B, (1, 1))


def test_minkowski_examples(R2):
    seg = lambda a, b: LatticePolytope([(a,), (b,)])
    assert minkowski(seg(0, 2), seg(0, 1), "difference") == seg(0, 1)
    P = poly_points((0, 0), (2, 1), (1, 3))
    assert minkowski(P, poly_points((1, -1)), "sum") == P.translate((1, -1))
    lhs = newton(R2("(t1 - 1)*(t2 - 1)"))
    assert lhs == minkowski(newton(R2("t1 - 1")), newton(R2("t2 - 1")), "sum")
    assert minkowski(lhs, newton(R2("t2 - 1")), "difference") == newton(R2("t1 - 1"))


def test_minkowski_not_a_summand():
    square = poly_points((0, 0), (1, 0), (0, 1), (1, 1))
    diagonal = poly_points((0, 0), (1, 1))
    with pytest.raises(NotASummand):
        minkowski(square, diagonal, "difference")
    with pytest.raises(NotASummand):
        minkowski(LatticePolytope([(0,), (1,)]), LatticePolytope([(0,), (2,)]), "difference")


def test_norm_ball_unit_square(R2):
    c = ClearedFraction(R2("(t1 - 1)*(t2 - 1)"), R2.one)
    ball = norm_ball(c)
    assert ball.dual.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert sorted(ball.vertices) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    r = rng()
    for _ in range(20):
        a, b = r.randint(-9, 9), r.randint(-9, 9)
        assert ball.norm((a, b)) == abs(a) + abs(b)


def test_norm_ball_degenerate(R2):
    f = R2("t1 + 3*t2 - 1")
    ball = norm_ball(ClearedFraction(f, f))
    assert ball.degenerate and not ball.clamped
    assert ball.norm((4, 5)) == 0
    assert len(ball.lineality) == 2


def test_norm_ball_trefoil():
    t = R1("t")
    ball = norm_ball(ClearedFraction(t * t - t + R1.one, t - R1.one))
    assert ball.vertices == [(-1,), (1,)]
    assert ball.norm((3,)) == 3
    # the clamp m = 1: 1 / (t - 1) gives the zero seminorm
    zero = norm_ball(ClearedFraction(R1.one, t - R1.one))
    assert zero.degenerate and zero.clamped


def test_norm_ball_rank_one_dual(R2):
    """A segment as dual polytope: the ball is a strip with one lineality direction."""
    ball = norm_ball(ClearedFraction(R2("t1*t2 - 1"), R2.one))
    assert ball.lineality == [(-1, 1)] or ball.lineality == [(1, -1)]
    assert ball.norm((1, -1)) == 0 and ball.norm((1, 1)) == 2


def test_newton_additivity_and_minkowski(W2):
    r = rng()
    for _ in range(40):
        f, g = random_poly(r, W2, terms=4), random_poly(r, W2, terms=4)
        fg = f * g
        assert newton(fg) == minkowski(newton(f), newton(g), "sum")
        for _ in range(5):
            phi = random_phi(r, 2)
            assert seminorm(fg, phi) == seminorm(f, phi) + seminorm(g, phi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=8),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_width_matches_brute_force(points, phi):
    R = commutative_ring(2)
    f = sum((R.monomial(p) for p in set(points)), R.zero)
    assert seminorm(f, phi) == brute_width(list(set(points)), phi)
    assert newton(f).width(phi) == brute_width(list(set(points)), phi)


def test_monomial_unit_invariance(W2):
    r = rng()
    for _ in range(20):
        f_n, f_d = random_poly(r, W2), random_poly(r, W2)
        c = ClearedFraction(f_n, f_d)
        mono = W2.monomial((r.randint(-3, 3), r.randint(-3, 3)), W2.base("x + 2"))
        u = random_poly(r, W2)
        for other in (ClearedFraction(f_n * u, f_d * u), ClearedFraction(mono * f_n, f_d),
                      ClearedFraction(f_n, f_d * mono)):
            for phi in lattice.primitive_vectors(2, 2):
                assert torsion_seminorm(other, phi) == torsion_seminorm(c, phi)


def test_homogeneity(W2):
    r = rng()
    f = random_poly(r, W2, terms=4)
    for _ in range(10):
        phi = random_phi(r, 2)
        k = r.randint(1, 5)
        assert seminorm(f, tuple(k * a for a in phi)) == k * seminorm(f, phi)
        assert seminorm(f, tuple(-a for a in phi)) == seminorm(f, phi)


def test_integral_dual_vertices():
    r = rng()
    for ring in (commutative_ring(2), twisted_ring(2)):
        for _ in range(6):
            B = random_matrix(r, ring, 2)
            d = dieudonne_det(B)
            if d.is_zero:
                continue
            ball = norm_ball(clear_denominators(d))
            assert ball.dual.is_integral()


points2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(points2, points2)
def test_minkowski_difference_round_trip(a, b):
    P, Q = LatticePolytope(a, 2), LatticePolytope(b, 2)
    assert minkowski(minkowski(P, Q, "sum"), Q, "difference") == P
    assert minkowski(minkowski(P, Q, "sum"), P, "difference") == Q


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3))
def test_minkowski_difference_round_trip_3d(a, b):
    P, Q = LatticePolytope(a, 3), LatticePolytope(b, 3)
    assert minkowski(minkowski(P, Q, "sum"), Q, "difference") == P
