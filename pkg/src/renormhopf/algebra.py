"""Graded connected commutative Hopf algebras, generically.

An instance only has to say what its generators are, how to order them,
their degree, and the coproduct of a single generator.  Everything else
(products of generators as monomials, the multiplicative extension of the
coproduct, counit, antipode, the axiom checks) lives here and is shared by
rooted trees, Feynman graphs and the Faa di Bruno coordinates.

A monomial is a sorted tuple of generators; ``()`` is the unit.  Linear
combinations are plain dicts ``{monomial: Fraction}`` with zero entries
dropped; tensors are dicts keyed by tuples of monomials.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections import defaultdict
from fractions import Fraction
from typing import Hashable, Iterable, Iterator

Generator = Hashable
Monomial = tuple
Element = dict
Tensor = dict

UNIT: Monomial = ()


class InstanceError(ValueError):
    """Objects from two different Hopf algebras were combined."""


class HopfInstance(ABC):
    """A free commutative graded connected bialgebra given on generators."""

    name = "abstract"

    @abstractmethod
    def degree(self, g: Generator) -> int: ...

    @abstractmethod
    def sort_key(self, g: Generator): ...

    @abstractmethod
    def generators(self, degree: int) -> list[Generator]:
        """All generators of the given degree, in canonical order."""

    @abstractmethod
    def generator_coproduct(self, g: Generator) -> Tensor:
        """Full coproduct of a generator, including ``g(x)1`` and ``1(x)g``."""

    def render(self, g: Generator) -> str:
        return str(g)

    def grading(self, g: Generator) -> int:
        """Grading used by the automorphisms theta_t; defaults to ``degree``."""
        return self.degree(g)

    # -- monomials -----------------------------------------------------

    def mono(self, *gens: Generator) -> Monomial:
        return tuple(sorted(gens, key=self.sort_key))

    def mono_mul(self, a: Monomial, b: Monomial) -> Monomial:
        if not a:
            return b
        if not b:
            return a
        return tuple(sorted(a + b, key=self.sort_key))

    def mono_degree(self, m: Monomial) -> int:
        return sum(self.degree(g) for g in m)

    def mono_grading(self, m: Monomial) -> int:
        return sum(self.grading(g) for g in m)

    def render_mono(self, m: Monomial) -> str:
        if not m:
            return "1"
        return " ".join(self.render(g) for g in m)

    def generators_upto(self, degree: int) -> list[Generator]:
        return [g for n in range(1, degree + 1) for g in self.generators(n)]

    def monomials(self, degree: int) -> list[Monomial]:
        """All monomials of exactly the given degree (``[()]`` for 0)."""
        return list(_monomials(self, degree, 1))

    def monomials_upto(self, degree: int) -> list[Monomial]:
        return [m for n in range(degree + 1) for m in self.monomials(n)]

    # -- coproduct on monomials ----------------------------------------

    def coproduct(self, m: Monomial) -> Tensor:
        cache = self.__dict__.setdefault("_coproduct_cache", {})
        if m in cache:
            return cache[m]
        if not m:
            result = {(UNIT, UNIT): Fraction(1)}
        elif len(m) == 1:
            result = self.generator_coproduct(m[0])
        else:
            head = self.generator_coproduct(m[0])
            tail = self.coproduct(m[1:])
            acc: dict = defaultdict(Fraction)
            for (a1, b1), c1 in head.items():
                for (a2, b2), c2 in tail.items():
                    acc[(self.mono_mul(a1, a2), self.mono_mul(b1, b2))] += c1 * c2
            result = {k: v for k, v in acc.items() if v}
        cache[m] = result
        return result

    def reduced_coproduct(self, m: Monomial) -> Tensor:
        """Coproduct minus the ``m(x)1`` and ``1(x)m`` terms."""
        out = dict(self.coproduct(m))
        if m:
            out.pop((m, UNIT), None)
            out.pop((UNIT, m), None)
        return out


def _monomials(inst: HopfInstance, degree: int, min_deg: int, start=None) -> Iterator[Monomial]:
    # multisets of generators, generated in non-decreasing sort-key order
    if degree == 0:
        yield UNIT
        return
    for d in range(min_deg, degree + 1):
        for g in inst.generators(d):
            if start is not None and (d, inst.sort_key(g)) < start:
                continue
            for rest in _monomials(inst, degree - d, d, (d, inst.sort_key(g))):
                yield (g,) + rest


# -- linear algebra on elements ------------------------------------------

def element(m: Monomial, c=1) -> Element:
    return {m: Fraction(c)} if c else {}


def add(*elems: Element) -> Element:
    out: dict = defaultdict(Fraction)
    for e in elems:
        for k, v in e.items():
            out[k] += v
    return {k: v for k, v in out.items() if v}


def scale(e: Element, c) -> Element:
    c = Fraction(c)
    return {k: v * c for k, v in e.items()} if c else {}


def multiply(inst: HopfInstance, a: Element, b: Element) -> Element:
    out: dict = defaultdict(Fraction)
    for ma, ca in a.items():
        for mb, cb in b.items():
            out[inst.mono_mul(ma, mb)] += ca * cb
    return {k: v for k, v in out.items() if v}


def coproduct_element(inst: HopfInstance, e: Element) -> Tensor:
    out: dict = defaultdict(Fraction)
    for m, c in e.items():
        for k, v in inst.coproduct(m).items():
            out[k] += c * v
    return {k: v for k, v in out.items() if v}


def counit(e: Element) -> Fraction:
    return e.get(UNIT, Fraction(0))


# -- antipode ------------------------------------------------------------

def antipode_monomial(inst: HopfInstance, m: Monomial) -> Element:
    """``S`` on a monomial: ``S(X) = -X - sum S(X') X''`` on generators, multiplicative."""
    cache = inst.__dict__.setdefault("_antipode_cache", {})
    if m in cache:
        return cache[m]
    if not m:
        result = element(UNIT)
    elif len(m) == 1:
        terms = [element(m, -1)]
        for (left, right), c in inst.reduced_coproduct(m).items():
            terms.append(scale(multiply(inst, antipode_monomial(inst, left), element(right)), -c))
        result = add(*terms)
    else:
        result = element(UNIT)
        for g in m:
            result = multiply(inst, result, antipode_monomial(inst, (g,)))
    cache[m] = result
    return result


def antipode(inst: HopfInstance, e: Element) -> Element:
    return add(*(scale(antipode_monomial(inst, m), c) for m, c in e.items()))


# -- axiom checks ----------------------------------------------------------

def coassociativity_defect(inst: HopfInstance, m: Monomial) -> dict:
    """``(D (x) id)D(m) - (id (x) D)D(m)``; empty iff coassociative on ``m``."""
    left: dict = defaultdict(Fraction)
    right: dict = defaultdict(Fraction)
    for (a, b), c in inst.coproduct(m).items():
        for (a1, a2), c1 in inst.coproduct(a).items():
            left[(a1, a2, b)] += c * c1
        for (b1, b2), c2 in inst.coproduct(b).items():
            right[(a, b1, b2)] += c * c2
    keys = set(left) | set(right)
    return {k: left[k] - right[k] for k in keys if left[k] != right[k]}


def counit_defect(inst: HopfInstance, m: Monomial) -> bool:
    """True if either counit law fails on ``m``."""
    lhs = defaultdict(Fraction)
    rhs = defaultdict(Fraction)
    for (a, b), c in inst.coproduct(m).items():
        if not a:
            lhs[b] += c
        if not b:
            rhs[a] += c
    target = {m: Fraction(1)}
    return {k: v for k, v in lhs.items() if v} != target or {k: v for k, v in rhs.items() if v} != target


def antipode_defect(inst: HopfInstance, m: Monomial) -> tuple[Element, Element]:
    """``m(S (x) id)D(m)`` and ``m(id (x) S)D(m)`` minus ``unit*counit(m)``."""
    unit_counit = element(UNIT) if not m else {}
    left = add(*(scale(multiply(inst, antipode_monomial(inst, a), element(b)), c)
                 for (a, b), c in inst.coproduct(m).items()))
    right = add(*(scale(multiply(inst, element(a), antipode_monomial(inst, b)), c)
                  for (a, b), c in inst.coproduct(m).items()))
    return add(left, scale(unit_counit, -1)), add(right, scale(unit_counit, -1))


def grading_defect(inst: HopfInstance, m: Monomial) -> list:
    """Coproduct terms whose degrees do not add up to ``deg m``."""
    d = inst.mono_degree(m)
    return [(a, b) for (a, b) in inst.coproduct(m)
            if inst.mono_degree(a) + inst.mono_degree(b) != d]


def render_tensor(inst: HopfInstance, t: Tensor) -> str:
    """Deterministic text ``c a⊗b + ...`` ordered by (left degree, keys)."""
    items = sorted(t.items(), key=lambda it: _tensor_sort(inst, it))
    parts = []
    for (a, b), c in items:
        body = f"{_wrap(inst, a)}⊗{_wrap(inst, b)}"
        if c == 1:
            parts.append(("+", body))
        elif c == -1:
            parts.append(("-", body))
        else:
            parts.append(("-" if c < 0 else "+", f"{abs(c)} {body}"))
    if not parts:
        return "0"
    sign, text = parts[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _wrap(inst: HopfInstance, m: Monomial) -> str:
    s = inst.render_mono(m)
    return f"({s})" if len(m) > 1 else s


def _tensor_sort(inst: HopfInstance, item):
    (a, b), _ = item
    # primitive terms first (X⊗1 then 1⊗X), then by left degree ascending
    da, db = inst.mono_degree(a), inst.mono_degree(b)
    if not b:
        rank = 0
    elif not a:
        rank = 1
    else:
        rank = 2
    return (rank, da, [(inst.degree(g), inst.sort_key(g)) for g in a],
            [(inst.degree(g), inst.sort_key(g)) for g in b])


def render_element(inst: HopfInstance, e: Element) -> str:
    items = sorted(e.items(), key=lambda it: (inst.mono_degree(it[0]), len(it[0]),
                                               [inst.sort_key(g) for g in it[0]]))
    parts = []
    for m, c in items:
        body = inst.render_mono(m)
        if len(m) > 1:
            body = f"({body})"
        if c in (1, -1):
            parts.append(("-" if c < 0 else "+", body))
        else:
            parts.append(("-" if c < 0 else "+", f"{abs(c)} {body}"))
    if not parts:
        return "0"
    sign, text = parts[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def all_products(gens: Iterable[Generator], max_factors: int) -> Iterator[tuple]:
    gens = list(gens)
    for k in range(1, max_factors + 1):
        yield from itertools.combinations_with_replacement(gens, k)
