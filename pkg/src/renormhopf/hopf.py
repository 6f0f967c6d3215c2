"""Characters, convolution, Birkhoff decomposition and BPHZ.

Everything here is generic over :class:`~renormhopf.algebra.HopfInstance`.
Linear maps into Laurent series are :class:`Functional` objects evaluated
on monomials; :class:`Character` and :class:`InfinitesimalCharacter` are
given on generators and extended multiplicatively, respectively by zero on
products.

Memo tables only ever receive the one value a key can have, so concurrent
readers see the same results with or without the cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import algebra
from .algebra import UNIT, HopfInstance, InstanceError, Monomial
from .laurent import (DEFAULT_ORDER, DEFAULT_PARAMS, LaurentSeries, TruncationError,
                      exp_scaled)
from .trees import TREES, RootedTree, subtree_weights


def _one(params) -> LaurentSeries:
    return LaurentSeries.one(params)


def _zero(params) -> LaurentSeries:
    return LaurentSeries.zero(None, params)


class Functional:
    """A linear map from the algebra to Laurent series, given on monomials."""

    kind = "functional"

    def __init__(self, instance: HopfInstance, on_monomial: Callable[[Monomial], LaurentSeries],
                 params: tuple[str, ...] = DEFAULT_PARAMS, name: str = ""):
        self.instance = instance
        self.params = params
        self.name = name
        self._on_monomial = on_monomial
        self._memo: dict = {}

    def __call__(self, m: Monomial) -> LaurentSeries:
        if not isinstance(m, tuple):
            m = (m,)
        if m not in self._memo:
            self._memo[m] = self._evaluate(m)
        return self._memo[m]

    def _evaluate(self, m: Monomial) -> LaurentSeries:
        return self._on_monomial(m)

    def on_element(self, e: algebra.Element) -> LaurentSeries:
        total = _zero(self.params)
        for m, c in e.items():
            total = total + self(m) * c
        return total

    def __repr__(self) -> str:
        return f"<{self.kind} {self.name or ''} on {self.instance.name}>"


class Character(Functional):
    """Algebra homomorphism: unit goes to 1, products to products."""

    kind = "character"

    def __init__(self, instance: HopfInstance, on_generator: Callable, params=DEFAULT_PARAMS, name=""):
        super().__init__(instance, None, params, name)
        self._on_generator = on_generator

    def _evaluate(self, m: Monomial) -> LaurentSeries:
        if not m:
            return _one(self.params)
        if len(m) == 1:
            return self._on_generator(m[0])
        out = _one(self.params)
        for g in m:
            out = out * self((g,))
        return out

    def gen(self, g) -> LaurentSeries:
        return self((g,))


class InfinitesimalCharacter(Functional):
    """Linear map vanishing on the unit and on products of two or more generators."""

    kind = "infinitesimal"

    def __init__(self, instance: HopfInstance, on_generator: Callable, params=DEFAULT_PARAMS, name=""):
        super().__init__(instance, None, params, name)
        self._on_generator = on_generator

    def _evaluate(self, m: Monomial) -> LaurentSeries:
        if len(m) != 1:
            return _zero(self.params)
        return self._on_generator(m[0])

    def gen(self, g) -> LaurentSeries:
        return self((g,))


def counit(instance: HopfInstance, params=DEFAULT_PARAMS) -> Character:
    return Character(instance, lambda g: _zero(params), params, "counit")


def _same_instance(f: Functional, g: Functional) -> None:
    if f.instance is not g.instance or f.params != g.params:
        raise InstanceError("functionals live on different algebras or parameter contexts")


def convolve(f: Functional, g: Functional) -> Functional:
    """``(f*g)(X) = sum f(X') g(X'')`` over the coproduct of ``X``.

    The product of two characters is a character and is returned as one.
    """
    _same_instance(f, g)
    inst = f.instance

    def on_monomial(m):
        total = _zero(f.params)
        for (a, b), c in inst.coproduct(m).items():
            fa = f(a)
            if fa.is_zero():
                continue
            gb = g(b)
            if gb.is_zero():
                continue
            total = total + fa * gb * c
        return total

    name = f"({f.name}*{g.name})"
    if isinstance(f, Character) and isinstance(g, Character):
        return Character(inst, lambda x: on_monomial((x,)), f.params, name)
    return Functional(inst, on_monomial, f.params, name)


def inverse_character(f: Character) -> Character:
    """``f o S``, the convolution inverse of a character."""
    inst = f.instance
    return Character(inst, lambda g: f.on_element(algebra.antipode_monomial(inst, (g,))),
                     f.params, f"{f.name}^-1")


def scale_functional(f: Functional, c) -> Functional:
    c = Fraction(c)
    return Functional(f.instance, lambda m: f(m) * c, f.params, f"{c}*{f.name}")


def add_functionals(*fs: Functional) -> Functional:
    first = fs[0]
    for g in fs[1:]:
        _same_instance(first, g)

    def on_monomial(m):
        total = _zero(first.params)
        for g in fs:
            total = total + g(m)
        return total

    return Functional(first.instance, on_monomial, first.params, "+".join(g.name for g in fs))


# -- toy Feynman rules ----------------------------------------------------------

def _toy_tree_value(t: RootedTree, param, order: int, params) -> LaurentSeries:
    n = t.size
    weights = subtree_weights(t)
    work = order + n
    if work < 0:
        raise TruncationError(f"order {order} leaves no known coefficient for a pole of order {n}")
    series = exp_scaled(n, param, work, params)
    denom = 1
    for w in weights:
        series = series * LaurentSeries.geometric(w, work, params)
        denom *= w
    return series * LaurentSeries.monomial(-n, Fraction(1, denom), None, params)


def toy_character(param: str = "L", order: int = DEFAULT_ORDER, params=DEFAULT_PARAMS) -> Character:
    """Toy dimensionally regularised rules on rooted trees.

    ``phi(t) = exp(|t| eps L) * prod_v g(w(v) eps)`` with ``g(a) = 1/(a(1-a))``
    and ``w(v)`` the size of the subtree at ``v``; known through ``eps^order``.
    """
    if order < -1:
        raise TruncationError("truncation order must be at least -1")
    return Character(TREES, lambda t: _toy_tree_value(t, param, order, params), params,
                     f"toy[{param}]")


def toy_graph_character(instance, param: str = "L", order: int = DEFAULT_ORDER,
                        params=DEFAULT_PARAMS) -> Character:
    """Toy rules on graphs: the tree toy character pulled back along ``tree_image``.

    Scales like ``exp(loops * eps * L)``; vanishes on convergent graphs and on
    anything carrying the constant two-point structure.
    """
    from .graphs import tree_image

    tree_phi = toy_character(param, order, params)

    def value(g):
        total = _zero(params)
        for forest, c in tree_image(g).items():
            total = total + tree_phi(forest) * c
        return total

    return Character(instance, value, params, f"toy-graph[{param}]")


def perturbed_character(f: Character, generator, extra: LaurentSeries) -> Character:
    """``f`` with ``extra`` added to its value on one generator (negative controls)."""
    return Character(f.instance, lambda g: f.gen(g) + extra if g == generator else f.gen(g),
                     f.params, f"{f.name}+perturbation")


# -- Birkhoff decomposition ----------------------------------------------------

class _BirkhoffEngine:
    """The recursion on arbitrary monomials, without assuming multiplicativity."""

    def __init__(self, f: Character):
        self.f = f
        self.inst = f.instance
        self.memo: dict[Monomial, tuple[LaurentSeries, LaurentSeries]] = {}

    def split(self, m: Monomial) -> tuple[LaurentSeries, LaurentSeries]:
        if m in self.memo:
            return self.memo[m]
        params = self.f.params
        if not m:
            result = (_one(params), _one(params))
        else:
            bar = self.f(m)
            for (a, b), c in self.inst.reduced_coproduct(m).items():
                fb = self.f(b)
                if fb.is_zero():
                    continue
                minus_a = self.split(a)[0]
                if minus_a.is_zero():
                    continue
                bar = bar + minus_a * fb * c
            if bar.order is not None and bar.order < -1:
                raise TruncationError(
                    f"pole part of {self.inst.render_mono(m)} is not determined at order {bar.order}")
            minus = -bar.pole_part()
            result = (minus, bar + minus)
        self.memo[m] = result
        return result


@dataclass
class BirkhoffPair:
    """``phi = negative^-1 * positive`` with ``negative`` pure pole on generators."""

    negative: Character
    positive: Character
    original: Character
    engine: _BirkhoffEngine

    def negative_on(self, m: Monomial) -> LaurentSeries:
        """Negative part on a monomial, by the recursion itself rather than by products."""
        return self.engine.split(m)[0]

    def positive_on(self, m: Monomial) -> LaurentSeries:
        return self.engine.split(m)[1]


def birkhoff(f: Character) -> BirkhoffPair:
    """Recursive Birkhoff decomposition.

    ``phi_-(X) = -T(phi(X) + sum phi_-(X') phi(X''))`` and
    ``phi_+(X) = phi(X) + phi_-(X) + sum phi_-(X') phi(X'')``, with ``T`` the
    pole-part projection.
    """
    engine = _BirkhoffEngine(f)
    neg = Character(f.instance, lambda g: engine.split((g,))[0], f.params, f"{f.name}_-")
    pos = Character(f.instance, lambda g: engine.split((g,))[1], f.params, f"{f.name}_+")
    return BirkhoffPair(neg, pos, f, engine)


def birkhoff_defects(pair: BirkhoffPair, generators: Iterable) -> list[str]:
    """Check the characterisation that pins the decomposition down uniquely.

    On each generator: the negative part is a pure pole, and the product
    ``negative * phi`` computed by plain convolution has no pole.
    """
    f = pair.original
    inst = f.instance
    out = []
    prod = convolve(pair.negative, f)
    for g in generators:
        neg = pair.negative.gen(g)
        if not neg.is_pure_pole():
            out.append(f"{inst.render(g)}: negative part {neg} is not a pure pole")
        if not prod.gen(g).is_pole_free():
            out.append(f"{inst.render(g)}: negative*phi = {prod.gen(g)} has a pole")
        if not prod.gen(g).agrees_with(pair.positive.gen(g)):
            out.append(f"{inst.render(g)}: negative*phi differs from the positive part")
    return out


# -- BPHZ -----------------------------------------------------------------------

def bphz_prepare(f: Character, C: Character, X) -> LaurentSeries:
    """``Rbar(X) = U(X) + sum_gamma C(gamma) U(X/gamma)`` over the subdivergences of ``X``."""
    inst = f.instance
    total = f.gen(X)
    for (gamma, rest), c in inst.reduced_coproduct((X,)).items():
        u = f(rest)
        if u.is_zero():
            continue
        cg = C(gamma)
        if cg.is_zero():
            continue
        total = total + cg * u * c
    return total


class BPHZ:
    """Counterterms ``C = -T(Rbar)`` and renormalised values ``R = Rbar + C``."""

    def __init__(self, f: Character):
        self.f = f
        self._prepared: dict = {}
        self.C = Character(f.instance, self._counterterm, f.params, f"C[{f.name}]")

    def prepared(self, X) -> LaurentSeries:
        if X not in self._prepared:
            bar = bphz_prepare(self.f, self.C, X)
            if bar.order is not None and bar.order < -1:
                raise TruncationError(f"pole part of {self.f.instance.render(X)} is not determined")
            self._prepared[X] = bar
        return self._prepared[X]

    def _counterterm(self, X) -> LaurentSeries:
        return -self.prepared(X).pole_part()

    def counterterm(self, X) -> LaurentSeries:
        return self.C.gen(X)

    def renormalized(self, X) -> LaurentSeries:
        return self.prepared(X) + self.counterterm(X)


def bphz_counterterm(f: Character, X) -> LaurentSeries:
    return BPHZ(f).counterterm(X)


def bphz_renormalized(f: Character, X) -> LaurentSeries:
    return BPHZ(f).renormalized(X)


def dump_rows(f: Character, generators: Iterable) -> list[dict[str, str]]:
    """Table rows (generator, phi, phi_-, phi_+, C, Rbar, R) as text."""
    pair = birkhoff(f)
    scheme = BPHZ(f)
    inst = f.instance
    rows = []
    for g in generators:
        rows.append({
            "generator": inst.render(g),
            "phi": str(f.gen(g)),
            "phi_minus": str(pair.negative.gen(g)),
            "phi_plus": str(pair.positive.gen(g)),
            "C": str(scheme.counterterm(g)),
            "Rbar": str(scheme.prepared(g)),
            "R": str(scheme.renormalized(g)),
        })
    return rows


def character_from_values(instance: HopfInstance, values: dict, params=DEFAULT_PARAMS, name="") -> Character:
    """Character with explicitly listed generator values (zero elsewhere)."""
    return Character(instance, lambda g: values.get(g, _zero(params)), params, name)


__all__ = [
    "Functional", "Character", "InfinitesimalCharacter", "counit", "convolve", "inverse_character",
    "toy_character", "toy_graph_character", "perturbed_character", "birkhoff", "BirkhoffPair",
    "birkhoff_defects", "bphz_prepare", "BPHZ", "bphz_counterterm", "bphz_renormalized",
    "dump_rows", "character_from_values", "UNIT",
]
