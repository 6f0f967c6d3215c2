import cmath
import itertools
import random
from fractions import Fraction as F

import pytest

from renormhopf.resolvents import (DegenerateConfiguration, DepressedCubic, DepressedQuartic,
                                   circumcircle_meet, covariant_resolvent, cubic_residual,
                                   pair_sums, perturbed_pentagon, point, regular_pentagon,
                                   resolvent_cubic, solve_cubic, solve_quartic, star_check)


def rand_frac(rng, lo=-20, hi=20):
    return F(rng.randint(lo, hi), rng.randint(1, 9))


def multiset_close(found, expected, tol=1e-9):
    remaining = [complex(x) for x in expected]
    for z in found:
        k = min(range(len(remaining)), key=lambda i: abs(remaining[i] - z))
        if abs(remaining[k] - z) > tol:
            return False
        remaining.pop(k)
    return True


def cubic_from_values(alpha, beta, gamma):
    """Monic cubic with the given roots, expanded by elementary symmetric functions."""
    e1 = alpha + beta + gamma
    e2 = alpha * beta + alpha * gamma + beta * gamma
    e3 = alpha * beta * gamma
    return (1, -e1, e2, -e3)


def test_cubic_examples():
    sol = solve_cubic(DepressedCubic(F(-1), F(1)))
    assert multiset_close(sol.roots, [1, 1, -2], 1e-7)
    assert all(cubic_residual(DepressedCubic(F(-1), F(1)), x) < 1e-9 for x in sol.roots)
    assert solve_cubic(DepressedCubic(F(0), F(0))).roots == (0j, 0j, 0j)


def test_cubic_root_recovery_and_pairing():
    rng = random.Random(1)
    for _ in range(100):
        a, b = rand_frac(rng), rand_frac(rng)
        c = DepressedCubic.from_roots([a, b, -a - b])
        sol = solve_cubic(c)
        assert max(cubic_residual(c, x) for x in sol.roots) < 1e-9
        for u, v in sol.pairs:
            assert abs(u * v + complex(c.p)) < 1e-12 * max(1.0, abs(complex(c.p)))


def test_resolvent_cubic_example():
    qt = DepressedQuartic.from_roots([F(1), F(-1), F(2), F(-2)])
    assert (qt.p, qt.q, qt.r) == (-5, 0, 4)
    assert resolvent_cubic(qt) == (1, 5, -16, -80)
    assert sorted(pair_sums([1, -1, 2, -2])) == [-5, -4, 4]
    assert resolvent_cubic(DepressedQuartic(F(0), F(0), F(0))) == (1, 0, 0, 0)


def test_resolvent_cubic_identity_exact():
    rng = random.Random(7)
    for _ in range(100):
        a, b, c = rand_frac(rng), rand_frac(rng), rand_frac(rng)
        roots = [a, b, c, -a - b - c]
        qt = DepressedQuartic.from_roots(roots)
        assert resolvent_cubic(qt) == cubic_from_values(*pair_sums(roots))


def test_pair_sums_orbit():
    roots = [F(3), F(-1, 2), F(5, 7), F(-45, 14)]
    base = sorted(pair_sums(roots))
    for perm in itertools.permutations(roots):
        assert sorted(pair_sums(perm)) == base


def test_quartic_examples():
    roots = solve_quartic(DepressedQuartic(F(-5), F(0), F(4)))
    assert multiset_close(roots, [1, -1, 2, -2])
    assert multiset_close(solve_quartic(DepressedQuartic(F(0), F(0), F(0))), [0, 0, 0, 0])


def test_quartic_recovery():
    rng = random.Random(9)
    for _ in range(100):
        a, b, c = rand_frac(rng, -9, 9), rand_frac(rng, -9, 9), rand_frac(rng, -9, 9)
        roots = [a, b, c, -a - b - c]
        qt = DepressedQuartic.from_roots(roots)
        found = solve_quartic(qt)
        scale = qt.scale
        assert multiset_close([z / scale for z in found], [float(x) / scale for x in roots], 1e-6)
        assert max(abs(complex(qt(z))) / scale ** 4 for z in found) < 1e-9


def test_covariant_resolvent_examples():
    assert covariant_resolvent(F(1), F(2), F(3), F(5)) == -1
    assert covariant_resolvent(F(3), F(5), F(7), F(11)) == -1
    with pytest.raises(DegenerateConfiguration):
        covariant_resolvent(F(0), F(1), F(2), F(3))


def test_covariant_resolvent_affine_covariance():
    rng = random.Random(13)
    checked = 0
    while checked < 100:
        lam, z = rand_frac(rng), rand_frac(rng)
        pts = [rand_frac(rng) for _ in range(4)]
        if lam == 0 or pts[0] + pts[3] == pts[1] + pts[2]:
            continue
        moved = [lam * p + z for p in pts]
        assert covariant_resolvent(*moved) == lam * covariant_resolvent(*pts) + z
        checked += 1


def test_circumcircle_meet_matches_resolvent():
    rng = random.Random(21)
    checked = 0
    while checked < 100:
        pts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(4)]
        try:
            meet = circumcircle_meet(*pts)
            alpha = covariant_resolvent(*pts, tol=1e-6)
        except DegenerateConfiguration:
            continue
        assert abs(meet - alpha) < 1e-9 * max(1.0, abs(alpha))
        checked += 1


def test_circumcircle_meet_degenerate():
    # AC and BD parallel
    with pytest.raises(DegenerateConfiguration):
        circumcircle_meet(0, 1j, 2, 1 + 1j)
    # square labelled so that a + d = b + c
    square = (0, 1, 1j, 1 + 1j)
    with pytest.raises(DegenerateConfiguration):
        circumcircle_meet(*square)
    with pytest.raises(DegenerateConfiguration):
        covariant_resolvent(*square)


def test_star_regular_pentagon():
    result = star_check(*regular_pentagon())
    assert result.max_deviation < 1e-12
    assert len(result.points) == 5
    assert set(result.to_json()) == {"points", "maxDeviation"}


def test_star_random_pentagons():
    rng = random.Random(42)
    worst = max(star_check(*perturbed_pentagon(rng)).max_deviation for _ in range(100))
    assert worst < 1e-9


def test_star_is_translation_and_scale_invariant():
    pts = perturbed_pentagon(random.Random(3))
    a = star_check(*pts)
    b = star_check(*[3 * z + (2 - 5j) for z in pts])
    assert all(abs(x - y) < 1e-9 for x, y in zip(a.points, b.points))


def test_star_degenerate():
    with pytest.raises(DegenerateConfiguration):
        star_check(0, 1, 2, 3j, 1 + 4j)
    with pytest.raises(ValueError):
        star_check(0, 1, 2j)
    with pytest.raises(ValueError):
        point(complex("nan"))


def test_cube_roots_of_unity_used_consistently():
    sol = solve_cubic(DepressedCubic(F(1), F(0)))  # x^3 + 3x
    assert multiset_close(sol.roots, [0, cmath.sqrt(-3), -cmath.sqrt(-3)])
