"""Cubic and quartic equations by resolvents, and two circle constructions.

Points of the plane are Python ``complex`` numbers.  Polynomial identities
are available in exact rational arithmetic; the radical solutions are
computed in floating complex arithmetic and judged by residuals at unit
scale.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = complex | float | Fraction | int

J = complex(-0.5, math.sqrt(3) / 2)  # primitive cube root of unity


class DegenerateConfiguration(ValueError):
    """The geometric construction is undefined for these points."""


def point(x) -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"point {x!r} is not finite")
    return z


# -- cubic ----------------------------------------------------------------------

@dataclass(frozen=True)
class DepressedCubic:
    """``x^3 + 3 p x + 2 q``."""

    p: Fraction
    q: Fraction

    def __call__(self, x):
        return x ** 3 + 3 * self.p * x + 2 * self.q

    @property
    def scale(self) -> float:
        return max(1.0, abs(3 * self.p) ** 0.5, abs(2 * self.q) ** (1 / 3))

    @classmethod
    def from_roots(cls, roots: Sequence[Fraction]) -> DepressedCubic:
        a, b, c = roots
        if a + b + c != 0:
            raise ValueError("roots of a depressed cubic sum to zero")
        return cls(Fraction(a * b + a * c + b * c) / 3, Fraction(-a * b * c) / 2)


@dataclass(frozen=True)
class CubicSolution:
    roots: tuple[complex, complex, complex]
    pairs: tuple[tuple[complex, complex], ...]


def _cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3)


def solve_cubic(c: DepressedCubic) -> CubicSolution:
    """Cardano: ``x = u + v`` with ``u^3, v^3`` the roots of ``z^2 + 2qz - p^3`` and ``uv = -p``."""
    p, q = complex(c.p), complex(c.q)
    s = cmath.sqrt(p ** 3 + q ** 2)
    alpha, beta = -q - s, -q + s
    big = alpha if abs(alpha) >= abs(beta) else beta
    u = _cbrt(big)
    if u == 0:
        return CubicSolution((0j, 0j, 0j), ((0j, 0j),) * 3)
    pairs = []
    for k in range(3):
        uk = u * J ** k
        pairs.append((uk, -p / uk))
    return CubicSolution(tuple(a + b for a, b in pairs), tuple(pairs))


def cubic_residual(c: DepressedCubic, x: complex) -> float:
    """``|x^3 + 3px + 2q|`` after rescaling so the coefficients are of unit size."""
    return abs(complex(c(x))) / c.scale ** 3


# -- quartic ----------------------------------------------------------------------

@dataclass(frozen=True)
class DepressedQuartic:
    """``X^4 + p X^2 + q X + r``."""

    p: Fraction
    q: Fraction
    r: Fraction

    def __call__(self, x):
        return x ** 4 + self.p * x ** 2 + self.q * x + self.r

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.p) ** 0.5, abs(self.q) ** (1 / 3), abs(self.r) ** 0.25)

    @classmethod
    def from_roots(cls, roots: Sequence[Fraction]) -> DepressedQuartic:
        a, b, c, d = roots
        if a + b + c + d != 0:
            raise ValueError("roots of a depressed quartic sum to zero")
        e2 = sum(x * y for x, y in itertools.combinations(roots, 2))
        e3 = sum(x * y * z for x, y, z in itertools.combinations(roots, 3))
        return cls(Fraction(e2), Fraction(-e3), Fraction(a * b * c * d))


def resolvent_cubic(qt: DepressedQuartic) -> tuple:
    """Coefficients ``(1, -p, -4r, 4pr - q^2)`` of the cubic whose roots are ``ab+cd, ac+bd, ad+bc``."""
    p, q, r = qt.p, qt.q, qt.r
    return (1, -p, -4 * r, 4 * p * r - q * q)


def pair_sums(roots: Sequence) -> tuple:
    """``(ab+cd, ac+bd, ad+bc)``."""
    a, b, c, d = roots
    return (a * b + c * d, a * c + b * d, a * d + b * c)


def _monic_cubic_roots(coeffs) -> tuple[complex, ...]:
    _, b, c, d = (complex(x) for x in coeffs)
    # shift X = y - b/3 to reach y^3 + 3 P y + 2 Q
    P = (3 * c - b * b) / 9
    Q = (2 * b ** 3 - 9 * b * c + 27 * d) / 54
    sol = _solve_cubic_complex(P, Q)
    return tuple(y - b / 3 for y in sol)


def _solve_cubic_complex(p: complex, q: complex) -> tuple[complex, ...]:
    s = cmath.sqrt(p ** 3 + q ** 2)
    alpha, beta = -q - s, -q + s
    u = _cbrt(alpha if abs(alpha) >= abs(beta) else beta)
    if u == 0:
        return (0j, 0j, 0j)
    return tuple(u * J ** k - p / (u * J ** k) for k in range(3))


def solve_quartic(qt: DepressedQuartic) -> tuple[complex, complex, complex, complex]:
    """Roots from one root ``alpha = ab + cd`` of the resolvent cubic.

    ``ab`` and ``cd`` solve ``z^2 - alpha z + r``; with ``a + b = S`` and
    ``c + d = -S`` the relation ``ab(c+d) + cd(a+b) = -q`` gives
    ``S = q / (ab - cd)``, and ``S^2 = alpha - p`` covers ``ab = cd``.
    Every resolvent root is tried and the smallest residual wins.
    """
    p, q, r = complex(qt.p), complex(qt.q), complex(qt.r)
    best = None
    for alpha in _monic_cubic_roots(resolvent_cubic(qt)):
        disc = cmath.sqrt(alpha * alpha - 4 * r)
        ab, cd = (alpha + disc) / 2, (alpha - disc) / 2
        candidates = []
        if abs(ab - cd) > 1e-12 * qt.scale ** 2:
            candidates.append(q / (ab - cd))
        root = cmath.sqrt(alpha - p)
        candidates.extend([root, -root])
        for S in candidates:
            d1 = cmath.sqrt(S * S - 4 * ab)
            d2 = cmath.sqrt(S * S - 4 * cd)
            roots = ((S + d1) / 2, (S - d1) / 2, (-S + d2) / 2, (-S - d2) / 2)
            err = max(quartic_residual(qt, x) for x in roots)
            if best is None or err < best[0]:
                best = (err, roots)
    return tuple(sorted(best[1], key=lambda z: (round(z.real, 9), round(z.imag, 9))))


def quartic_residual(qt: DepressedQuartic, x: complex) -> float:
    return abs(complex(qt(x))) / qt.scale ** 4


# -- affine-covariant resolvent ---------------------------------------------------

def covariant_resolvent(a, b, c, d, tol: float = 1e-12):
    """``(ad - bc) / (a + d - b - c)``; exact for rationals, complex otherwise."""
    den = a + d - b - c
    if isinstance(den, (Fraction, int)):
        if den == 0:
            raise DegenerateConfiguration("a + d = b + c")
        return Fraction(a * d - b * c) / den
    size = max(1.0, *(abs(complex(x)) for x in (a, b, c, d)))
    if abs(den) <= tol * size:
        raise DegenerateConfiguration("a + d = b + c")
    return (a * d - b * c) / den


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def line_intersection(p1: complex, p2: complex, p3: complex, p4: complex, tol: float = 1e-12) -> complex:
    """Meeting point of line ``p1 p2`` and line ``p3 p4``."""
    d1, d2 = p2 - p1, p4 - p3
    den = _cross(d1, d2)
    if abs(den) <= tol * max(1.0, abs(d1) * abs(d2)):
        raise DegenerateConfiguration("lines are parallel")
    t = _cross(p3 - p1, d2) / den
    return p1 + t * d1


def circumcenter(a: complex, b: complex, c: complex, tol: float = 1e-12) -> complex:
    ab, ac = b - a, c - a
    den = 2 * _cross(ab, ac)
    if abs(den) <= tol * max(1.0, abs(ab) * abs(ac)):
        raise DegenerateConfiguration("collinear points have no circumcircle")
    n1, n2 = abs(ab) ** 2, abs(ac) ** 2
    # solve for the centre relative to a
    ox = (ac.imag * n1 - ab.imag * n2) / den
    oy = (ab.real * n2 - ac.real * n1) / den
    return a + complex(ox, oy)


def reflect(z: complex, p: complex, q: complex) -> complex:
    """Mirror image of ``z`` in the line through ``p`` and ``q``."""
    d = q - p
    if d == 0:
        raise DegenerateConfiguration("reflection line is undefined")
    w = (z - p) / d
    return p + w.conjugate() * d


def second_intersection(shared: complex, tri1: Sequence[complex], tri2: Sequence[complex]) -> complex:
    """The other common point of two circumcircles passing through ``shared``."""
    o1 = circumcenter(*tri1)
    o2 = circumcenter(*tri2)
    if abs(o1 - o2) <= 1e-12 * max(1.0, abs(o1)):
        raise DegenerateConfiguration("the two circles coincide")
    return reflect(shared, o1, o2)


def circumcircle_meet(A, B, C, D) -> complex:
    """Second meeting point of the circles through ``A B J`` and ``J C D``, ``J = AC ∩ BD``."""
    A, B, C, D = (point(x) for x in (A, B, C, D))
    Jp = line_intersection(A, C, B, D)
    return second_intersection(Jp, (A, B, Jp), (Jp, C, D))


# -- five-point star ----------------------------------------------------------------

def normalize(points: Sequence[complex]) -> list[complex]:
    """Translate the centroid to 0 and scale the RMS radius to 1."""
    pts = [complex(z) for z in points]
    c = sum(pts) / len(pts)
    rms = math.sqrt(sum(abs(z - c) ** 2 for z in pts) / len(pts))
    if rms == 0:
        raise DegenerateConfiguration("all points coincide")
    return [(z - c) / rms for z in pts]


def concyclic_deviation(points: Sequence[complex]) -> float:
    """Circle through the first three points; largest radial miss of the rest."""
    a, b, c, *rest = points
    o = circumcenter(a, b, c)
    R = abs(a - o)
    return max((abs(abs(z - o) - R) for z in rest), default=0.0)


@dataclass(frozen=True)
class StarResult:
    points: tuple[complex, ...]
    max_deviation: float

    def to_json(self) -> dict:
        return {"points": [[z.real, z.imag] for z in self.points], "maxDeviation": self.max_deviation}


def star_check(*tips) -> StarResult:
    """Second intersections of circumcircles of consecutive outer triangles of a pentagram.

    The star is drawn on the five points taken in cyclic order: its lines
    join each point to the next-but-one.  The outer triangle at point ``i``
    is cut off by the line through its two neighbours.  Adjacent outer
    triangles share one inner vertex of the star; their circumcircles meet
    once more, and the five such points are returned after unit-scale
    normalisation together with their deviation from one circle.
    """
    if len(tips) == 1:
        tips = tuple(tips[0])
    P = [point(z) for z in tips]
    if len(P) != 5:
        raise ValueError("a star needs five points")
    for i, j, k in itertools.combinations(range(5), 3):
        u, v = P[j] - P[i], P[k] - P[i]
        if abs(_cross(u, v)) <= 1e-9 * max(1.0, abs(u) * abs(v)):
            raise DegenerateConfiguration(f"points {i}, {j}, {k} are collinear")

    def at(i):
        return P[i % 5]

    def triangle(i):
        base = (at(i - 1), at(i + 1))
        x1 = line_intersection(at(i), at(i + 2), *base)
        x2 = line_intersection(at(i), at(i - 2), *base)
        return (at(i), x1, x2), x1

    out = []
    for i in range(5):
        tri, shared = triangle(i)
        nxt, _ = triangle(i + 1)
        out.append(second_intersection(shared, tri, nxt))
    pts = normalize(out)
    return StarResult(tuple(pts), concyclic_deviation(pts))


def regular_pentagon(radius: float = 1.0, phase: float = 0.0) -> list[complex]:
    return [radius * cmath.exp(1j * (phase + 2 * math.pi * k / 5)) for k in range(5)]


def perturbed_pentagon(rng, amplitude: float = 0.15) -> list[complex]:
    base = regular_pentagon(phase=rng.uniform(0, 2 * math.pi))
    return [z + complex(rng.uniform(-amplitude, amplitude), rng.uniform(-amplitude, amplitude)) for z in base]


__all__ = [
    "DegenerateConfiguration", "DepressedCubic", "DepressedQuartic", "CubicSolution", "solve_cubic",
    "cubic_residual", "resolvent_cubic", "pair_sums", "solve_quartic", "quartic_residual",
    "covariant_resolvent", "line_intersection", "circumcenter", "circumcircle_meet", "star_check",
    "StarResult", "normalize", "concyclic_deviation", "regular_pentagon", "perturbed_pentagon",
]
