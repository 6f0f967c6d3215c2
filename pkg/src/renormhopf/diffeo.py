"""Formal diffeomorphisms ``g + a_1 g^3 + a_2 g^5 + ...`` tangent to the identity.

Coefficients are rationals or Laurent series in eps (a "loop" of
diffeomorphisms).  Only odd powers occur, so a series is stored through the
variable ``x = g^2``: ``f(g) = g (1 + a_1 x + a_2 x^2 + ...)``, known up to
``a_N`` (that is, through ``g^(2N+1)``).

Two independent Birkhoff routes are provided: a direct degreewise
pole-splitting of the composition equations, and the generic Hopf-algebra
recursion run on the Faa di Bruno coordinate algebra.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import algebra
from .algebra import UNIT, HopfInstance, Tensor
from .hopf import Character, birkhoff
from .laurent import DEFAULT_PARAMS, LaurentSeries, ParamPoly, TruncationError
from .trees import corolla, ladder


class DiffeoDomainError(ValueError):
    """The series is not of the form ``g + O(g^3)`` with odd powers only."""


def _is_zero(c) -> bool:
    if isinstance(c, LaurentSeries):
        return c.is_zero()
    return c == 0


def _series_mul(a: list, b: list, n: int) -> list:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if _is_zero(x):
            continue
        for j in range(0, n + 1 - i):
            y = b[j]
            if _is_zero(y):
                continue
            out[i + j] = out[i + j] + x * y
    return out


@dataclass(frozen=True)
class FormalDiffeo:
    """``g + sum_{n=1..N} a_n g^(2n+1)``; ``coeffs[n-1] = a_n``."""

    coeffs: tuple

    @property
    def order(self) -> int:
        """Largest coefficient index ``N`` known (through ``g^(2N+1)``)."""
        return len(self.coeffs)

    @classmethod
    def identity(cls, order: int) -> FormalDiffeo:
        return cls(tuple([0] * order))

    @classmethod
    def from_power_series(cls, coeffs: dict[int, object], order: int) -> FormalDiffeo:
        """Build from ``{power of g: coefficient}``, checking the normalisation."""
        for p, c in coeffs.items():
            if _is_zero(c):
                continue
            if p == 1:
                continue
            if p < 1 or p % 2 == 0:
                raise DiffeoDomainError(f"term g^{p} is not allowed (odd powers >= 3 only)")
        lin = coeffs.get(1, 0)
        one = lin.regular_part() == 1 and lin.is_pole_free() if isinstance(lin, LaurentSeries) else lin == 1
        if not one:
            raise DiffeoDomainError(f"linear coefficient is {lin}, expected 1")
        return cls(tuple(coeffs.get(2 * n + 1, 0) for n in range(1, order + 1)))

    def a(self, n: int):
        return self.coeffs[n - 1]

    def _x_series(self, n: int) -> list:
        return [1] + list(self.coeffs[:n]) + [0] * max(0, n - self.order)

    def truncate(self, order: int) -> FormalDiffeo:
        return FormalDiffeo(self.coeffs[:order])

    def map(self, fn) -> FormalDiffeo:
        return FormalDiffeo(tuple(fn(c) for c in self.coeffs))

    def __str__(self) -> str:
        parts = ["g"]
        for n, c in enumerate(self.coeffs, 1):
            if not _is_zero(c):
                parts.append(f"({c})*g^{2 * n + 1}")
        parts.append(f"O(g^{2 * self.order + 3})")
        return " + ".join(parts)

    def equals(self, other: FormalDiffeo) -> bool:
        """Coefficientwise equality up to the common order (truncation-aware for series)."""
        n = min(self.order, other.order)
        for x, y in zip(self.coeffs[:n], other.coeffs[:n]):
            d = x - y
            if not _is_zero(d):
                return False
        return True


def compose(f: FormalDiffeo, h: FormalDiffeo) -> FormalDiffeo:
    """``f(h(g))`` through the smaller of the two orders."""
    n = min(f.order, h.order)
    hx = h._x_series(n)
    # f(h) = h * (1 + sum_m a_m h^(2m)) = g * hx * (1 + sum_m a_m x^m hx^(2m))
    hx2 = _series_mul(hx, hx, n)
    inner = [1] + [0] * n
    power = [1] + [0] * n
    for m in range(1, n + 1):
        power = _series_mul(power, hx2, n)
        am = f.a(m)
        if _is_zero(am):
            continue
        for k in range(0, n + 1 - m):
            if not _is_zero(power[k]):
                inner[m + k] = inner[m + k] + am * power[k]
    out = _series_mul(hx, inner, n)
    return FormalDiffeo(tuple(out[1:]))


def invert_diffeo(f: FormalDiffeo) -> FormalDiffeo:
    """Compositional inverse ``h`` with ``f(h(g)) = g``, degree by degree."""
    if not isinstance(f, FormalDiffeo):
        raise DiffeoDomainError("expected a formal diffeomorphism")
    n = f.order
    h = [0] * n
    for k in range(1, n + 1):
        probe = compose(f, FormalDiffeo(tuple(h[:k]) + (0,) * (n - k)))
        h[k - 1] = -probe.a(k)
    return FormalDiffeo(tuple(h))


# -- Birkhoff, direct route ------------------------------------------------------

@dataclass
class DiffeoBirkhoff:
    """``loop = positive o negative^-1`` with ``negative`` pure pole."""

    negative: FormalDiffeo
    positive: FormalDiffeo

    def reconstruct(self) -> FormalDiffeo:
        return compose(self.positive, invert_diffeo(self.negative))

    def renormalized_coupling(self) -> FormalDiffeo:
        """The positive part at ``eps = 0``: a diffeomorphism with constant coefficients."""
        def at_zero(c):
            if isinstance(c, LaurentSeries):
                v = c.constant_term()
                return v.constant() if v.is_constant() else v
            return c
        return self.positive.map(at_zero)


def _as_series(c, params) -> LaurentSeries:
    return c if isinstance(c, LaurentSeries) else LaurentSeries.constant(c, None, params)


def birkhoff_diffeo(loop: FormalDiffeo, params=DEFAULT_PARAMS) -> DiffeoBirkhoff:
    """Opposed Birkhoff decomposition solved coefficient by coefficient.

    From ``positive = loop o negative`` the ``n``-th coefficient reads
    ``l_n + x_n + P_n`` with ``P_n`` fixed by lower coefficients; the pole
    part of ``l_n + P_n`` goes to ``x_n = -T(l_n + P_n)``.
    """
    n = loop.order
    loop = loop.map(lambda c: _as_series(c, params))
    neg = [LaurentSeries.zero(None, params)] * n
    pos = [LaurentSeries.zero(None, params)] * n
    for k in range(1, n + 1):
        trial = compose(loop, FormalDiffeo(tuple(neg[: k - 1]) + (LaurentSeries.zero(None, params),) * (n - k + 1)))
        bar = trial.a(k)
        if bar.order is not None and bar.order < -1:
            raise TruncationError(f"coefficient a_{k} = {bar} is too short to split")
        neg[k - 1] = -bar.pole_part()
        pos[k - 1] = bar + neg[k - 1]
    return DiffeoBirkhoff(FormalDiffeo(tuple(neg)), FormalDiffeo(tuple(pos)))


# -- Faa di Bruno coordinate algebra ---------------------------------------------

class FaaDiBrunoInstance(HopfInstance):
    """Coordinates ``a_n`` on odd formal diffeomorphisms.

    ``D a_n = sum_m [g^(2n+1)] f(g)^(2m+1) (x) a_m`` with ``a_0 = 1`` and
    the left factor read as a polynomial in the coordinates.  With this
    convention the convolution of characters is composition in the order
    ``(p * q) <-> f_q o f_p``.
    """

    name = "faa-di-bruno"

    def degree(self, g: int) -> int:
        return g

    def sort_key(self, g: int):
        return (g,)

    def generators(self, degree: int) -> list[int]:
        return [degree] if degree >= 1 else []

    def render(self, g: int) -> str:
        return f"a{g}"

    def generator_coproduct(self, n: int) -> Tensor:
        cache = self.__dict__.setdefault("_gen_cache", {})
        if n in cache:
            return cache[n]
        # f(g)/g = 1 + sum a_k x^k as a series of algebra elements
        base = [algebra.element(UNIT)] + [algebra.element((k,)) for k in range(1, n + 1)]
        out: dict = defaultdict(Fraction)
        for m in range(0, n + 1):
            power = [algebra.element(UNIT)] + [{} for _ in range(n)]
            for _ in range(2 * m + 1):
                nxt = [{} for _ in range(n + 1)]
                for i, x in enumerate(power):
                    if not x:
                        continue
                    for j in range(0, n + 1 - i):
                        nxt[i + j] = algebra.add(nxt[i + j], algebra.multiply(self, x, base[j]))
                power = nxt
            right = UNIT if m == 0 else (m,)
            for mono, c in power[n - m].items():
                out[(mono, right)] += c
        result = {k: v for k, v in out.items() if v}
        cache[n] = result
        return result


FAA_DI_BRUNO = FaaDiBrunoInstance()


def character_of(f: FormalDiffeo, params=DEFAULT_PARAMS) -> Character:
    return Character(FAA_DI_BRUNO, lambda n: _as_series(f.a(n), params), params, "diffeo")


def diffeo_of(ch: Character, order: int) -> FormalDiffeo:
    return FormalDiffeo(tuple(ch.gen(n) for n in range(1, order + 1)))


def birkhoff_diffeo_hopf(loop: FormalDiffeo, params=DEFAULT_PARAMS) -> DiffeoBirkhoff:
    """The same decomposition via the generic recursion on coordinates."""
    pair = birkhoff(character_of(loop, params))
    return DiffeoBirkhoff(diffeo_of(pair.negative, loop.order), diffeo_of(pair.positive, loop.order))


# -- toy effective coupling ------------------------------------------------------

def _binomial_minus_three_halves(k: int) -> Fraction:
    """Coefficient of ``u^k`` in ``(1 - u)^(-3/2)``."""
    c = Fraction(1)
    for j in range(k):
        c *= Fraction(2 * j + 3, 2 * (j + 1))
    return c


def effective_coupling_toy(phi: Character, loops: int, order: int | None = None) -> FormalDiffeo:
    """``g (1 + sum phi(t_l) g^(2l)) (1 - sum phi(s_l) g^(2l))^(-3/2)``.

    Vertex stand-ins ``t_l`` are ladders and self-energy stand-ins ``s_l``
    are corollas with ``l`` vertices.  Coefficients beyond ``loops`` are
    kept up to ``order`` (default ``loops``).
    """
    params = phi.params
    n = loops if order is None else order
    if n == 0:
        return FormalDiffeo(())
    zero = LaurentSeries.zero(None, params)
    vert = [LaurentSeries.one(params)] + [phi.gen(ladder(l)) if l <= loops else zero for l in range(1, n + 1)]
    self_e = [zero] + [phi.gen(corolla(l)) if l <= loops else zero for l in range(1, n + 1)]
    factor = [LaurentSeries.one(params)] + [zero] * n
    power = [LaurentSeries.one(params)] + [zero] * n
    for k in range(1, n + 1):
        power = _series_mul(power, self_e, n)
        ck = _binomial_minus_three_halves(k)
        factor = [factor[i] + power[i] * ck for i in range(n + 1)]
    out = _series_mul(vert, factor, n)
    return FormalDiffeo(tuple(out[1:]))


def random_loop(rng, order: int, max_pole: int | None = None, params=DEFAULT_PARAMS,
                denominators: Sequence[int] = (1, 2, 3, 5)) -> FormalDiffeo:
    """Random loop with exact Laurent-polynomial coefficients; ``a_n`` has a pole of order <= n."""
    coeffs = []
    for n in range(1, order + 1):
        top = n if max_pole is None else min(n, max_pole)
        terms = {k: Fraction(rng.randint(-9, 9), rng.choice(denominators)) for k in range(-top, 3)}
        coeffs.append(LaurentSeries(terms, None, params))
    return FormalDiffeo(tuple(coeffs))


def random_rational_diffeo(rng, order: int, denominators: Sequence[int] = (1, 2, 3, 7)) -> FormalDiffeo:
    return FormalDiffeo(tuple(Fraction(rng.randint(-9, 9), rng.choice(denominators)) for _ in range(order)))


__all__ = [
    "DiffeoDomainError", "FormalDiffeo", "compose", "invert_diffeo", "DiffeoBirkhoff",
    "birkhoff_diffeo", "FaaDiBrunoInstance", "FAA_DI_BRUNO", "character_of", "diffeo_of",
    "birkhoff_diffeo_hopf", "effective_coupling_toy", "random_loop", "random_rational_diffeo",
    "ParamPoly",
]
