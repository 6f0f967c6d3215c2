"""Exact truncated Laurent series in the regulator ``eps``.

Coefficients live in :class:`ParamPoly`, multivariate polynomials with
rational coefficients in a fixed ordered list of formal parameters
(``L`` for the log of the mass scale, ``t`` and ``s`` for group times).

A :class:`LaurentSeries` knows its coefficients up to an absolute
``order``: every eps-degree ``<= order`` is exact, everything above is
unknown.  ``order=None`` marks an exact (finitely supported) series, which
is what pole parts and counterterms are.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

DEFAULT_PARAMS: tuple[str, ...] = ("L", "t", "s")
DEFAULT_ORDER = 10

Scalar = Union[int, Fraction]


class ContextError(ValueError):
    """Operands live in different parameter contexts."""


class SingularError(ArithmeticError):
    """Leading coefficient is not an invertible constant."""


class PoleError(ValueError):
    """A finite value was requested from a series that still has poles."""


class TruncationError(ValueError):
    """The known window of a series is too short for the requested result."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class ParamPoly:
    """Polynomial in the formal parameters with ``Fraction`` coefficients."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None,
                 params: tuple[str, ...] = DEFAULT_PARAMS):
        self.params = params
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != len(params):
                raise ContextError(f"monomial {mono} does not match parameters {params}")
            c = _frac(c)
            if c:
                clean[tuple(mono)] = c
        self.terms: dict[tuple[int, ...], Fraction] = clean
        self._hash = None

    @classmethod
    def const(cls, c: Scalar, params: tuple[str, ...] = DEFAULT_PARAMS) -> ParamPoly:
        return cls({(0,) * len(params): c}, params)

    @classmethod
    def var(cls, name: str, params: tuple[str, ...] = DEFAULT_PARAMS) -> ParamPoly:
        if name not in params:
            raise ContextError(f"unknown parameter {name!r}; context is {params}")
        mono = tuple(1 if p == name else 0 for p in params)
        return cls({mono: 1}, params)

    @classmethod
    def coerce(cls, x, params: tuple[str, ...] = DEFAULT_PARAMS) -> ParamPoly:
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, str):
            return cls.var(x, params)
        return cls.const(x, params)

    def _check(self, other: ParamPoly) -> None:
        if self.params != other.params:
            raise ContextError(f"parameter contexts differ: {self.params} vs {other.params}")

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((0,) * len(self.params), Fraction(0))

    def __add__(self, other) -> ParamPoly:
        other = ParamPoly.coerce(other, self.params)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ParamPoly(out, self.params)

    __radd__ = __add__

    def __neg__(self) -> ParamPoly:
        return ParamPoly({m: -c for m, c in self.terms.items()}, self.params)

    def __sub__(self, other) -> ParamPoly:
        return self + (-ParamPoly.coerce(other, self.params))

    def __rsub__(self, other) -> ParamPoly:
        return ParamPoly.coerce(other, self.params) - self

    def __mul__(self, other) -> ParamPoly:
        if not isinstance(other, ParamPoly):
            c = _frac(other)
            return ParamPoly({m: c * v for m, v in self.terms.items()}, self.params)
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return ParamPoly(out, self.params)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ParamPoly:
        result = ParamPoly.const(1, self.params)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other, self.params)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def degree_in(self, name: str) -> int:
        """Highest power of ``name``; 0 for the zero polynomial."""
        i = self.params.index(name)
        return max((m[i] for m in self.terms), default=0)

    def derivative(self, name: str) -> ParamPoly:
        i = self.params.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return ParamPoly(out, self.params)

    def substitute(self, name: str, value) -> ParamPoly:
        """Replace parameter ``name`` by a polynomial or rational ``value``."""
        value = ParamPoly.coerce(value, self.params)
        i = self.params.index(name)
        result = ParamPoly({}, self.params)
        powers = {0: ParamPoly.const(1, self.params)}
        for m, c in self.terms.items():
            k = m[i]
            if k not in powers:
                powers[k] = value ** k
            rest = list(m)
            rest[i] = 0
            result = result + ParamPoly({tuple(rest): c}, self.params) * powers[k]
        return result

    def evaluate(self, **values: Scalar) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for p, e in zip(self.params, m):
                if e:
                    term *= _frac(values[p]) ** e
            total += term
        return total

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        # lexicographic in the parameter order, highest powers first
        return sorted(self.terms.items(), key=lambda mc: tuple(-e for e in mc[0]))

    @staticmethod
    def _mono_str(mono: tuple[int, ...], params: tuple[str, ...]) -> str:
        parts = []
        for p, e in zip(params, mono):
            if e == 1:
                parts.append(p)
            elif e > 1:
                parts.append(f"{p}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_terms():
            ms = self._mono_str(mono, self.params)
            mag = abs(c)
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"ParamPoly({self})"

    def to_json(self) -> dict[str, str]:
        return {self._mono_str(m, self.params) or "1": str(c) for m, c in self.sorted_terms()}

    @classmethod
    def from_json(cls, data: Mapping[str, str], params: tuple[str, ...] = DEFAULT_PARAMS) -> ParamPoly:
        terms = {}
        for key, c in data.items():
            mono = [0] * len(params)
            if key != "1":
                for factor in key.split("*"):
                    name, _, exp = factor.partition("^")
                    mono[params.index(name)] += int(exp or 1)
            terms[tuple(mono)] = Fraction(c)
        return cls(terms, params)


def _min_order(*orders: int | None) -> int | None:
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class LaurentSeries:
    """Laurent series ``sum_k c_k eps^k`` known up to ``eps^order``.

    Stored as ``(valuation, coeffs)`` with ``coeffs[0]`` the eps^valuation
    coefficient, which is nonzero unless the series is the canonical zero
    (empty ``coeffs``).  Trailing zeros are stripped; they are implied by
    ``order``.
    """

    __slots__ = ("valuation", "coeffs", "order", "params", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None, order: int | None = DEFAULT_ORDER,
                 params: tuple[str, ...] = DEFAULT_PARAMS):
        self.params = params
        self.order = order
        clean = {}
        for k, c in (terms or {}).items():
            if order is not None and k > order:
                continue
            c = ParamPoly.coerce(c, params)
            if c.params != params:
                raise ContextError(f"coefficient context {c.params} differs from {params}")
            if not c.is_zero():
                clean[k] = c
        if clean:
            lo, hi = min(clean), max(clean)
            zero = ParamPoly({}, params)
            self.valuation = lo
            self.coeffs = tuple(clean.get(k, zero) for k in range(lo, hi + 1))
        else:
            self.valuation = 0
            self.coeffs = ()
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int | None = None, params=DEFAULT_PARAMS) -> LaurentSeries:
        return cls({}, order, params)

    @classmethod
    def one(cls, params=DEFAULT_PARAMS) -> LaurentSeries:
        return cls({0: 1}, None, params)

    @classmethod
    def constant(cls, c, order: int | None = None, params=DEFAULT_PARAMS) -> LaurentSeries:
        return cls({0: c}, order, params)

    @classmethod
    def monomial(cls, k: int, c=1, order: int | None = None, params=DEFAULT_PARAMS) -> LaurentSeries:
        """``c * eps^k``, exact by default."""
        return cls({k: c}, order, params)

    @classmethod
    def geometric(cls, ratio: Scalar = 1, order: int = DEFAULT_ORDER, params=DEFAULT_PARAMS) -> LaurentSeries:
        """``1 / (1 - ratio*eps)`` through ``eps^order``."""
        r = _frac(ratio)
        return cls({k: r ** k for k in range(order + 1)}, order, params)

    # inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.order is None

    def terms(self) -> dict[int, ParamPoly]:
        return {self.valuation + i: c for i, c in enumerate(self.coeffs) if not c.is_zero()}

    def coefficient(self, k: int) -> ParamPoly:
        if self.order is not None and k > self.order:
            raise TruncationError(f"coefficient of eps^{k} is beyond the known order {self.order}")
        i = k - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ParamPoly({}, self.params)

    def pole_order(self) -> int:
        """Order of the pole at eps = 0 (0 if none)."""
        return max(0, -self.valuation) if self.coeffs else 0

    def _eff_valuation(self) -> float:
        # a zero known through eps^N behaves like a series starting at N+1
        if self.coeffs:
            return self.valuation
        return math.inf if self.order is None else self.order + 1

    def max_param_degree(self, name: str) -> int:
        return max((c.degree_in(name) for c in self.coeffs), default=0)

    def is_pole_free(self) -> bool:
        return all(k >= 0 for k in self.terms())

    def is_pure_pole(self) -> bool:
        return all(k < 0 for k in self.terms()) and (self.order is None or self.order >= -1)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: LaurentSeries) -> None:
        if self.params != other.params:
            raise ContextError(f"parameter contexts differ: {self.params} vs {other.params}")

    def _coerce(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            self._check(other)
            return other
        return LaurentSeries.constant(other, None, self.params)

    def __add__(self, other) -> LaurentSeries:
        other = self._coerce(other)
        order = _min_order(self.order, other.order)
        out = self.terms()
        for k, c in other.terms().items():
            out[k] = out[k] + c if k in out else c
        return LaurentSeries(out, order, self.params)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries({k: -c for k, c in self.terms().items()}, self.order, self.params)

    def __sub__(self, other) -> LaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            if isinstance(other, ParamPoly):
                other = LaurentSeries.constant(other, None, self.params)
            else:
                c = _frac(other)
                return LaurentSeries({k: v * c for k, v in self.terms().items()}, self.order, self.params)
        self._check(other)
        va, vb = self._eff_valuation(), other._eff_valuation()
        cands = []
        if self.order is not None:
            cands.append(self.order + vb)
        if other.order is not None:
            cands.append(other.order + va)
        order = None
        if cands:
            lim = min(cands)
            # both operands zero-with-unknown-tail can give inf; clamp to a sane value
            order = int(lim) if lim != math.inf else None
        out: dict[int, ParamPoly] = {}
        ta, tb = self.terms(), other.terms()
        for ka, ca in ta.items():
            for kb, cb in tb.items():
                k = ka + kb
                if order is not None and k > order:
                    continue
                p = ca * cb
                out[k] = out[k] + p if k in out else p
        return LaurentSeries(out, order, self.params)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            return self.invert() ** (-n)
        return reduce(lambda a, b: a * b, [self] * n, LaurentSeries.one(self.params))

    def invert(self, order: int | None = None) -> LaurentSeries:
        """Multiplicative inverse; ``order`` sets the window of an exact input."""
        if not self.coeffs:
            raise SingularError("zero series is not invertible")
        lead = self.coeffs[0]
        if not lead.is_constant():
            raise SingularError(f"leading coefficient {lead} is not an invertible constant")
        v = self.valuation
        if self.order is None:
            rel = (DEFAULT_ORDER if order is None else order) + v
        else:
            rel = self.order - v
        if rel < 0:
            raise TruncationError("no known terms beyond the leading one")
        # a = eps^v * c0 * (1 + x), x = sum_{i>=1} (c_i/c0) eps^i
        c0 = lead.constant()
        a = [c * (1 / c0) for c in self.coeffs]
        inv = [ParamPoly.const(1, self.params)]
        for n in range(1, rel + 1):
            acc = ParamPoly({}, self.params)
            for i in range(1, min(n, len(a) - 1) + 1):
                acc = acc + a[i] * inv[n - i]
            inv.append(-acc)
        terms = {k - v: c * (1 / c0) for k, c in enumerate(inv)}
        return LaurentSeries(terms, rel - v, self.params)

    def __truediv__(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            return self * other.invert()
        return self * (1 / _frac(other))

    # projections --------------------------------------------------------

    def pole_part(self) -> LaurentSeries:
        """Projection onto strictly negative eps-powers (minimal subtraction)."""
        terms = {k: c for k, c in self.terms().items() if k < 0}
        order = None if self.order is None or self.order >= -1 else self.order
        return LaurentSeries(terms, order, self.params)

    def regular_part(self) -> LaurentSeries:
        terms = {k: c for k, c in self.terms().items() if k >= 0}
        return LaurentSeries(terms, self.order, self.params)

    def constant_term(self) -> ParamPoly:
        if any(k < 0 for k in self.terms()):
            raise PoleError(f"series has a pole of order {self.pole_order()}; split it first")
        if self.order is not None and self.order < 0:
            raise TruncationError("constant term is beyond the known order")
        return self.coefficient(0)

    def truncate(self, order: int) -> LaurentSeries:
        order = order if self.order is None else min(order, self.order)
        return LaurentSeries(self.terms(), order, self.params)

    def map_coefficients(self, fn) -> LaurentSeries:
        return LaurentSeries({k: fn(c) for k, c in self.terms().items()}, self.order, self.params)

    def substitute(self, name: str, value) -> LaurentSeries:
        return self.map_coefficients(lambda c: c.substitute(name, value))

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other, self.order, self.params)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.params == other.params and self.order == other.order
                and self.valuation == other.valuation and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.params, self.order, self.valuation, self.coeffs))
        return self._hash

    def agrees_with(self, other: LaurentSeries) -> bool:
        """Equality of all coefficients both operands know."""
        other = self._coerce(other)
        diff = self - other
        return diff.is_zero()

    # rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LaurentSeries({render(self)})"

    def to_json(self) -> dict:
        return {
            "params": list(self.params),
            "order": self.order,
            "terms": [[k, c.to_json()] for k, c in sorted(self.terms().items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> LaurentSeries:
        params = tuple(data.get("params", DEFAULT_PARAMS))
        terms = {int(k): ParamPoly.from_json(c, params) for k, c in data["terms"]}
        return cls(terms, data.get("order"), params)


EPS = "ε"


def _eps_power(k: int) -> str:
    return EPS if k == 1 else f"{EPS}^{k}"


def render(a: LaurentSeries) -> str:
    """Text form ``c_m/ε^m + ... + c_N ε^N + O(ε^(N+1))``."""
    pieces: list[tuple[str, str]] = []
    for k, c in sorted(a.terms().items()):
        single = len(c.terms) == 1
        neg = single and next(iter(c.terms.values())) < 0
        body = str(-c if neg else c)
        wrap = f"({body})" if not single else body
        if k == 0:
            text = body
        elif k < 0:
            if "/" in body or "*" in body:
                wrap = f"({body})"
            text = f"{wrap}/{_eps_power(-k)}"
        else:
            text = f"{_eps_power(k)}" if body == "1" else f"{wrap}*{_eps_power(k)}"
        pieces.append(("-" if neg else "+", text))
    if a.order is not None:
        pieces.append(("+", f"O({_eps_power(a.order + 1)})"))
    if not pieces:
        return "0"
    sign, text = pieces[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


_O_RE = re.compile(r"O\(\s*(?:ε|eps)\s*(?:\^\s*\(?\s*(-?\d+)\s*\)?)?\s*\)")


def parse(text: str, params: tuple[str, ...] = DEFAULT_PARAMS, order: int | None = None) -> LaurentSeries:
    """Parse the text rendering (``ε`` or ``eps``; ``^`` or ``**``).

    A trailing ``O(ε^M)`` sets the known order to ``M - 1``; otherwise
    ``order`` is used (``None`` means exact).
    """
    import sympy

    m = _O_RE.search(text)
    if m:
        order = int(m.group(1) or 1) - 1
        text = text[:m.start()] + text[m.end():]
        text = re.sub(r"[+\-]\s*$", "", text.strip()) or "0"
    src = text.replace(EPS, "eps").replace("^", "**")
    symbols = {p: sympy.Symbol(p) for p in params}
    eps = sympy.Symbol("eps")
    try:
        expr = sympy.sympify(src, locals={**symbols, "eps": eps}, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse Laurent series {text!r}: {exc}") from None
    expr = sympy.expand(expr)
    terms: dict[int, ParamPoly] = {}
    for term in sympy.Add.make_args(expr):
        coeff, k = term.as_coeff_exponent(eps)
        if not k.is_integer:
            raise ValueError(f"non-integer power of eps in {text!r}")
        if coeff.has(eps):
            raise ValueError(f"term {term} is not a Laurent monomial in eps")
        poly = sympy.Poly(coeff, *symbols.values(), domain="QQ")
        pp = ParamPoly({mono: Fraction(int(c.p), int(c.q)) for mono, c in poly.terms()}, params)
        k = int(k)
        terms[k] = terms[k] + pp if k in terms else pp
    return LaurentSeries(terms, order, params)


def exp_scaled(k: int, param, order: int = DEFAULT_ORDER, params=DEFAULT_PARAMS) -> LaurentSeries:
    """``exp(k * param * eps)`` through ``eps^order``.

    ``param`` is a parameter name, a :class:`ParamPoly` (e.g. ``t + s``) or
    a rational number.
    """
    if k < 0:
        raise ValueError("scaling factor must be non-negative")
    x = ParamPoly.coerce(param, params) * k
    terms = {}
    power = ParamPoly.const(1, params)
    fact = 1
    for m in range(order + 1):
        if m:
            power = power * x
            fact *= m
        terms[m] = power * Fraction(1, fact)
    return LaurentSeries(terms, order, params)


def sum_series(items: Iterable[LaurentSeries], params=DEFAULT_PARAMS) -> LaurentSeries:
    total = LaurentSeries.zero(None, params)
    for x in items:
        total = total + x
    return total
