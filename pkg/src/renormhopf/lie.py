"""Lie-algebra side: infinitesimal characters, insertion brackets, grading.

Linear combinations of generators (graded Lie elements) are plain dicts
``{generator: Fraction}``; their degree-``n`` component is the part
supported on degree-``n`` generators.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from .algebra import HopfInstance
from .graphs import (FeynGraph, GraphInstance, UnsupportedGraph, graph_name, insertion_count,
                     insertions)
from .hopf import (Character, Functional, InfinitesimalCharacter, convolve, counit, _zero)
from .laurent import DEFAULT_ORDER, DEFAULT_PARAMS, LaurentSeries, ParamPoly, exp_scaled
from .trees import RootedTree, graft

Combination = dict


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


# -- brackets -------------------------------------------------------------------

def commutator(f: Functional, g: Functional) -> Functional:
    """``f*g - g*f`` on every monomial."""
    fg, gf = convolve(f, g), convolve(g, f)
    return Functional(f.instance, lambda m: fg(m) - gf(m), f.params, f"[{f.name},{g.name}]")


def bracket(z1: InfinitesimalCharacter, z2: InfinitesimalCharacter) -> InfinitesimalCharacter:
    """Convolution commutator of two infinitesimal characters.

    The commutator vanishes on products in a commutative algebra, so the
    result is read off generators.
    """
    c = commutator(z1, z2)
    return InfinitesimalCharacter(z1.instance, lambda g: c((g,)), z1.params, c.name)


def tree_bracket(t1: RootedTree, t2: RootedTree) -> Combination:
    """Grafts of ``t2`` onto each vertex of ``t1`` minus grafts of ``t1`` onto ``t2``."""
    out: dict = defaultdict(Fraction)
    for v in range(t1.size):
        out[graft(t1, t2, v)] += 1
    for v in range(t2.size):
        out[graft(t2, t1, v)] -= 1
    return _clean(out)


def tree_bracket_linear(a: Combination, b: Combination) -> Combination:
    out: dict = defaultdict(Fraction)
    for t1, c1 in a.items():
        for t2, c2 in b.items():
            for t, c in tree_bracket(t1, t2).items():
                out[t] += c1 * c2 * c
    return _clean(out)


def _one_way(instance: GraphInstance, g1: FeynGraph, g2: FeynGraph) -> dict:
    """``sum_Gamma n(g1, g2; Gamma) Gamma`` with each Gamma built by insertion."""
    known = set(instance.generators(g1.loops + g2.loops))
    out = {}
    for gamma in sorted(insertions(g2, g1)):
        if gamma not in known:
            raise UnsupportedGraph(
                f"inserting {graph_name(g1)} into {graph_name(g2)} gives {graph_name(gamma)}, "
                "which is outside the catalog closure")
        n = insertion_count(g1, g2, gamma)
        if n:
            out[gamma] = Fraction(n)
    return out


def graph_bracket(g1: FeynGraph, g2: FeynGraph, instance: GraphInstance | None = None) -> Combination:
    """Insertion bracket of two marked graphs.

    ``[g1, g2] = sum n(g1, g2; G) G - n(g2, g1; G) G`` where ``n(a, b; G)``
    counts subgraphs of ``G`` isomorphic to ``a`` whose quotient (with the
    insertion type given by ``a``'s marker) is ``b``; the pairing between
    markers and external structures is the identity.
    """
    instance = instance or GraphInstance()
    out: dict = defaultdict(Fraction)
    for g, c in _one_way(instance, g1, g2).items():
        out[g] += c
    for g, c in _one_way(instance, g2, g1).items():
        out[g] -= c
    return _clean(out)


# -- correspondence with infinitesimal characters -------------------------------

def infinitesimal_from(instance: HopfInstance, combo: Combination,
                       params=DEFAULT_PARAMS, name: str = "Z") -> InfinitesimalCharacter:
    """The infinitesimal character equal to ``combo[g]`` on each generator ``g``."""
    return InfinitesimalCharacter(
        instance, lambda g: LaurentSeries.constant(combo.get(g, 0), None, params), params, name)


def as_combination(z: Functional, generators: Iterable) -> Combination:
    """Values of an infinitesimal character with rational constant values on ``generators``."""
    out = {}
    for g in generators:
        v = z((g,))
        if v.is_zero():
            continue
        if not v.is_pole_free() or v.terms().keys() != {0} or not v.coefficient(0).is_constant():
            raise ValueError(f"value {v} on {g} is not a rational constant")
        out[g] = v.coefficient(0).constant()
    return out


# -- grading --------------------------------------------------------------------

def grading_Y(x, instance: HopfInstance | None = None):
    """The grading derivation: degree-``n`` parts are multiplied by ``n``.

    Accepts a combination (needs ``instance``) or a functional/character.
    """
    if isinstance(x, dict):
        if instance is None:
            raise ValueError("a combination needs its instance to be graded")
        return _clean({g: c * instance.grading(g) for g, c in x.items()})
    inst = x.instance
    if isinstance(x, InfinitesimalCharacter):
        return InfinitesimalCharacter(inst, lambda g: x.gen(g) * inst.grading(g), x.params, f"Y{x.name}")
    return Functional(inst, lambda m: x(m) * inst.mono_grading(m), x.params, f"Y{x.name}")


def components(combo: Combination, instance: HopfInstance) -> dict[int, Combination]:
    out: dict = defaultdict(dict)
    for g, c in combo.items():
        out[instance.degree(g)][g] = c
    return dict(out)


# -- theta --------------------------------------------------------------------

def _scaled(value: LaurentSeries, n: int, t, order: int) -> LaurentSeries:
    if value.is_zero() or n == 0:
        return value
    work = order if value.order is None else value.order - value.valuation
    return value * exp_scaled(n, t, max(work, 0), value.params)


def theta(t, f: Functional, order: int = DEFAULT_ORDER) -> Functional:
    """Scale values on degree-``n`` elements by ``exp(n t eps)``.

    ``t`` is a parameter name, a :class:`ParamPoly` or a rational.  When
    the value is itself truncated the exponential is taken just deep
    enough to keep that truncation; exact values use ``order``.
    """
    inst = f.instance
    name = f"theta[{t}]({f.name})"
    if isinstance(f, (Character, InfinitesimalCharacter)):
        cls = type(f)
        return cls(inst, lambda g: _scaled(f.gen(g), inst.grading(g), t, order), f.params, name)
    return Functional(inst, lambda m: _scaled(f(m), inst.mono_grading(m), t, order), f.params, name)


# -- exponential and logarithm -------------------------------------------------

def exp_character(z: Functional) -> Character:
    """``sum_k z^{*k} / k!``; on a degree-``n`` generator only ``k <= n`` contribute."""
    inst = z.instance
    powers = [counit(inst, z.params)]

    def power(k):
        while len(powers) <= k:
            powers.append(convolve(powers[-1], z) if len(powers) > 1 else z)
        return powers[k]

    def value(g):
        n = inst.degree(g)
        total = _zero(z.params)
        for k in range(1, n + 1):
            total = total + power(k)((g,)) * Fraction(1, math.factorial(k))
        return total

    return Character(inst, value, z.params, f"exp({z.name})")


def log_character(f: Character) -> InfinitesimalCharacter:
    """``sum_k (-1)^(k+1) (f - counit)^{*k} / k`` read on generators."""
    inst = f.instance
    dev = Functional(inst, lambda m: f(m) if m else _zero(f.params), f.params, f"({f.name}-e)")
    powers = [None, dev]

    def power(k):
        while len(powers) <= k:
            powers.append(convolve(powers[-1], dev))
        return powers[k]

    def value(g):
        n = inst.degree(g)
        total = _zero(f.params)
        for k in range(1, n + 1):
            total = total + power(k)((g,)) * Fraction((-1) ** (k + 1), k)
        return total

    return InfinitesimalCharacter(inst, value, f.params, f"log({f.name})")


def theta_generator_defect(z: InfinitesimalCharacter, generators: Iterable, param: str = "t") -> list:
    """Generators where ``d/dt theta_t(z)`` at ``t = 0`` differs from ``Y z``.

    With the parameter scaled by eps this is the statement that the
    one-parameter automorphism group is generated by the grading; the
    check compares eps-coefficients after dividing out the eps factor.
    """
    inst = z.instance
    scaled = theta(param, z)
    y = grading_Y(z)
    bad = []
    for g in generators:
        val = scaled.gen(g)
        deriv = {k - 1: c.derivative(param).substitute(param, 0) for k, c in val.terms().items()}
        lhs = LaurentSeries(deriv, None if val.order is None else val.order - 1, z.params)
        if not lhs.agrees_with(y.gen(g)):
            bad.append(g)
    return bad


__all__ = [
    "commutator", "bracket", "tree_bracket", "tree_bracket_linear", "graph_bracket",
    "infinitesimal_from", "as_combination", "grading_Y", "components", "theta",
    "exp_character", "log_character", "theta_generator_defect", "ParamPoly",
]
