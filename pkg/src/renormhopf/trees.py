"""Rooted trees as a model of nested divergences.

Trees are unordered: a tree is its multiset of child subtrees, stored in a
canonical order so that isomorphic trees compare and hash equal.  The text
syntax is ``o`` for a single vertex and ``B[x y ...]`` for a root carrying
the children ``x y ...``; ``B[o]`` is the two-vertex ladder and ``B[o o]``
the cherry.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import UNIT, HopfInstance, Monomial, Tensor, antipode as _antipode


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position


class RootedTree:
    """Immutable, canonically ordered rooted tree."""

    __slots__ = ("children", "key", "size", "_hash")

    def __init__(self, children: Iterable[RootedTree] = ()):
        kids = sorted(children, key=lambda c: c.key, reverse=True)
        self.children: tuple[RootedTree, ...] = tuple(kids)
        self.key: tuple = tuple(c.key for c in kids)
        self.size: int = 1 + sum(c.size for c in kids)
        self._hash = hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedTree) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: RootedTree) -> bool:
        return (self.size, self.key) < (other.size, other.key)

    def __str__(self) -> str:
        if not self.children:
            return "o"
        return "B[" + " ".join(str(c) for c in self.children) + "]"

    def __repr__(self) -> str:
        return f"RootedTree({self})"

    def preorder(self) -> list[RootedTree]:
        """Subtrees rooted at each vertex, root first, children in canonical order."""
        out = [self]
        for c in self.children:
            out.extend(c.preorder())
        return out


LEAF = RootedTree()


def B_plus(forest: Iterable[RootedTree]) -> RootedTree:
    """Attach a common new root to a forest."""
    return RootedTree(forest)


def ladder(n: int) -> RootedTree:
    """The chain of ``n`` vertices."""
    t = LEAF
    for _ in range(n - 1):
        t = B_plus([t])
    return t


def corolla(n: int) -> RootedTree:
    """Root with ``n - 1`` leaves."""
    return B_plus([LEAF] * (n - 1))


def canonicalize(raw) -> RootedTree:
    """Build a tree from nested sequences (each node = list of its children).

    Already-canonical :class:`RootedTree` objects pass through unchanged.
    """
    if isinstance(raw, RootedTree):
        return raw
    if isinstance(raw, str):
        return parse_tree(raw)
    return RootedTree(canonicalize(c) for c in raw)


def parse_forest(text: str) -> list[RootedTree]:
    """Parse whitespace-separated trees; an empty string is the empty forest."""
    pos = 0
    n = len(text)
    out = []

    def skip(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    def node(i):
        i = skip(i)
        if i >= n:
            raise TreeSyntaxError("unexpected end of input", i, text)
        if text[i] == "o":
            return LEAF, i + 1
        if text.startswith("B[", i):
            i += 2
            kids = []
            while True:
                i = skip(i)
                if i >= n:
                    raise TreeSyntaxError("unclosed '['", i, text)
                if text[i] == "]":
                    if not kids:
                        raise TreeSyntaxError("empty child list", i, text)
                    return RootedTree(kids), i + 1
                kid, i = node(i)
                kids.append(kid)
        raise TreeSyntaxError(f"unexpected character {text[i]!r}", i, text)

    pos = skip(pos)
    while pos < n:
        t, pos = node(pos)
        if pos < n and not text[pos].isspace() and text[pos] != "]":
            raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if pos < n and text[pos] == "]":
            raise TreeSyntaxError("unbalanced ']'", pos, text)
        out.append(t)
        pos = skip(pos)
    return out


def parse_tree(text: str) -> RootedTree:
    trees = parse_forest(text)
    if len(trees) != 1:
        raise TreeSyntaxError(f"expected one tree, found {len(trees)}", 0, text)
    return trees[0]


def vertex_count(t: RootedTree) -> int:
    return t.size


def forest_degree(forest: Iterable[RootedTree]) -> int:
    return sum(t.size for t in forest)


def subtree_weights(t: RootedTree) -> list[int]:
    """Size of the subtree below each vertex, in preorder."""
    return [s.size for s in t.preorder()]


def graft(t1: RootedTree, t2: RootedTree, v: int) -> RootedTree:
    """Attach ``t2``'s root as a new child of vertex ``v`` (preorder index) of ``t1``."""
    if not 0 <= v < t1.size:
        raise IndexError(f"vertex {v} out of range for a tree with {t1.size} vertices")

    def go(node: RootedTree, offset: int) -> RootedTree:
        if offset == v:
            return RootedTree(node.children + (t2,))
        pos = offset + 1
        kids = []
        for c in node.children:
            if pos <= v < pos + c.size:
                kids.append(go(c, pos))
            else:
                kids.append(c)
            pos += c.size
        return RootedTree(kids)

    return go(t1, 0)


# -- admissible cuts -------------------------------------------------------

def _cut_structure(t: RootedTree) -> tuple[list[RootedTree], list[int]]:
    """Preorder subtrees and parent index of each vertex (-1 for the root)."""
    subtrees: list[RootedTree] = []
    parents: list[int] = []

    def walk(node, parent):
        idx = len(subtrees)
        subtrees.append(node)
        parents.append(parent)
        for c in node.children:
            walk(c, idx)

    walk(t, -1)
    return subtrees, parents


def _remove(t: RootedTree, cut: frozenset[int]) -> RootedTree:
    def go(node, offset):
        pos = offset + 1
        kids = []
        for c in node.children:
            if pos not in cut:
                kids.append(go(c, pos))
            pos += c.size
        return RootedTree(kids)
    return go(t, 0)


def admissible_cuts(t: RootedTree) -> list[tuple[tuple[RootedTree, ...], RootedTree]]:
    """Every nonempty admissible cut as ``(pruned forest, trunk)``.

    A cut is a set of edges (identified by their lower vertex) no two of
    which lie on a common path to the root.
    """
    subtrees, parents = _cut_structure(t)
    n = len(subtrees)
    ancestors = []
    for v in range(n):
        anc = set()
        p = parents[v]
        while p >= 0:
            anc.add(p)
            p = parents[p]
        ancestors.append(anc)
    out = []
    nonroot = list(range(1, n))
    for r in range(1, len(nonroot) + 1):
        for combo in itertools.combinations(nonroot, r):
            if any(a in ancestors[b] or b in ancestors[a] for a, b in itertools.combinations(combo, 2)):
                continue
            pruned = tuple(sorted((subtrees[v] for v in combo)))
            out.append((pruned, _remove(t, frozenset(combo))))
    return out


def coproduct(t: RootedTree) -> Tensor:
    """Admissible-cut coproduct of one tree, as ``{(forest, forest): coeff}``."""
    out: dict = defaultdict(Fraction)
    out[((t,), UNIT)] += 1
    out[(UNIT, (t,))] += 1
    for pruned, trunk in admissible_cuts(t):
        out[(pruned, (trunk,))] += 1
    return dict(out)


def coproduct_bplus(t: RootedTree) -> Tensor:
    """Same coproduct via the cocycle identity D B+ = B+ (x) 1 + (id (x) B+) D.

    Independent of the cut enumeration; used as a cross-check.
    """
    out: dict = defaultdict(Fraction)
    out[((t,), UNIT)] += 1
    forest_cop = {(UNIT, UNIT): Fraction(1)}
    for child in t.children:
        nxt: dict = defaultdict(Fraction)
        for (a1, b1), c1 in forest_cop.items():
            for (a2, b2), c2 in coproduct_bplus(child).items():
                nxt[(tuple(sorted(a1 + a2)), tuple(sorted(b1 + b2)))] += c1 * c2
        forest_cop = nxt
    for (a, b), c in forest_cop.items():
        out[(a, (B_plus(b),))] += c
    return {k: v for k, v in out.items() if v}


# -- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def trees_of_size(n: int) -> tuple[RootedTree, ...]:
    """All rooted trees with ``n`` vertices, sorted."""
    if n < 1:
        return ()
    if n == 1:
        return (LEAF,)
    return tuple(sorted({B_plus(f) for f in forests_of_size(n - 1)}))


@lru_cache(maxsize=None)
def forests_of_size(n: int) -> tuple[tuple[RootedTree, ...], ...]:
    """All forests (sorted multisets of trees) with ``n`` vertices in total."""
    if n == 0:
        return ((),)
    out = set()

    def rec(remaining, min_tree, acc):
        if remaining == 0:
            out.add(tuple(acc))
            return
        for size in range(1, remaining + 1):
            for tr in trees_of_size(size):
                if min_tree is not None and tr < min_tree:
                    continue
                rec(remaining - size, tr, acc + [tr])

    rec(n, None, [])
    return tuple(sorted(out, key=lambda f: [(t.size, t.key) for t in f]))


class TreeInstance(HopfInstance):
    """The Hopf algebra of undecorated rooted trees."""

    name = "trees"

    def degree(self, g: RootedTree) -> int:
        return g.size

    def sort_key(self, g: RootedTree):
        return (g.size, g.key)

    def generators(self, degree: int) -> list[RootedTree]:
        return list(trees_of_size(degree))

    def generator_coproduct(self, g: RootedTree) -> Tensor:
        return coproduct(g)

    def render(self, g: RootedTree) -> str:
        return str(g)


TREES = TreeInstance()


def forest(*trees: RootedTree | str) -> Monomial:
    return TREES.mono(*(canonicalize(t) for t in trees))


def antipode(x: dict) -> dict:
    """Antipode on a linear combination ``{forest: coeff}`` of forests."""
    return _antipode(TREES, {tuple(sorted(m)): c for m, c in x.items()})


def symmetry_factor(t: RootedTree) -> int:
    """Order of the automorphism group of ``t``."""
    result = 1
    counts: dict = defaultdict(int)
    for c in t.children:
        counts[c] += 1
        result *= symmetry_factor(c)
    for k in counts.values():
        for i in range(2, k + 1):
            result *= i
    return result


def as_raw(t: RootedTree) -> list:
    return [as_raw(c) for c in t.children]


def sequence_to_forest(trees: Sequence[RootedTree]) -> Monomial:
    return tuple(sorted(trees))
