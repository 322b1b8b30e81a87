"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  :class:`MultiPoly` is a sparse
polynomial in the three symbols ``x``, ``lambda`` and ``alpha`` with rational
coefficients, and :class:`TruncSeries` is a truncated power series in one main
variable (``t`` or ``x``) whose coefficients are ``MultiPoly`` values free of
that variable.

Every value is immutable; all operations return new objects.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "SYMBOLS",
    "MultiPoly",
    "TruncSeries",
    "parse_rat",
    "format_rat",
    "poly_mul",
    "poly_eval",
    "binom_poly",
    "series_from_poly",
    "series_one",
    "series_add",
    "series_mul",
    "series_inverse",
    "series_diff",
    "series_pow",
    "series_scale_arg",
]

SYMBOLS = ("x", "lambda", "alpha")
_SYM_INDEX = {"x": 0, "lambda": 1, "lam": 1, "alpha": 2}

Exp = tuple[int, int, int]
Scalar = Union[int, Fraction]


def parse_rat(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into an exact rational.

    Decimal strings are rejected so that exact inputs stay exact.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(s)


def format_rat(q: Fraction | int) -> str:
    """Render a rational as ``"p/q"`` (denominator always written)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _sym(name: str) -> int:
    try:
        return _SYM_INDEX[name]
    except KeyError:
        raise ValueError(f"unknown symbol {name!r}; expected one of {SYMBOLS}") from None


def _grlex_key(e: Exp):
    return (e[0] + e[1] + e[2], e)


class MultiPoly:
    """Sparse polynomial in ``x``, ``lambda``, ``alpha`` over the rationals.

    Terms are kept in graded-lexicographic order with no zero coefficients,
    so two polynomials are equal exactly when their term tuples are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, Scalar] | Iterable[tuple[Exp, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exp, Fraction] = {}
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent triple {e!r}")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._terms: tuple[tuple[Exp, Fraction], ...] = tuple(
            sorted(((e, c) for e, c in acc.items() if c), key=lambda ec: _grlex_key(ec[0]))
        )
        self._hash = None

    @classmethod
    def _from_dict(cls, acc: dict[Exp, Fraction]) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = tuple(sorted(((e, c) for e, c in acc.items() if c), key=lambda ec: _grlex_key(ec[0])))
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        e = [0, 0, 0]
        e[_sym(name)] = power
        return cls({tuple(e): 1})

    @classmethod
    def coerce(cls, v: "MultiPoly | Scalar") -> "MultiPoly":
        if isinstance(v, MultiPoly):
            return v
        if isinstance(v, (int, Fraction)):
            return cls.const(v)
        raise TypeError(f"cannot use {type(v).__name__} as an exact polynomial")

    # inspection

    @property
    def terms(self) -> tuple[tuple[Exp, Fraction], ...]:
        return self._terms

    def as_dict(self) -> dict[Exp, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_const(self) -> bool:
        return all(e == (0, 0, 0) for e, _ in self._terms)

    def const_value(self) -> Fraction:
        """Value of a constant polynomial; raises if any symbol remains."""
        if not self.is_const():
            raise ValueError(f"polynomial is not constant: {self}")
        return self._terms[0][1] if self._terms else Fraction(0)

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one symbol.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e, _ in self._terms)
        i = _sym(name)
        return max(e[i] for e, _ in self._terms)

    def mentions(self, name: str) -> bool:
        i = _sym(name)
        return any(e[i] for e, _ in self._terms)

    def coeff(self, e: Exp) -> Fraction:
        return dict(self._terms).get(tuple(e), Fraction(0))

    def coeff_of(self, name: str, k: int) -> "MultiPoly":
        """Coefficient of ``name**k`` as a polynomial in the remaining symbols."""
        i = _sym(name)
        acc = {}
        for e, c in self._terms:
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                acc[tuple(e2)] = c
        return MultiPoly._from_dict(acc)

    # arithmetic

    def __add__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return MultiPoly._from_dict(acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_dict({e: -c for e, c in self._terms})

    def __sub__(self, other):
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly()
            return MultiPoly._from_dict({e: c * other for e, c in self._terms})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        acc: dict[Exp, Fraction] = {}
        for (a0, a1, a2), ca in self._terms:
            for (b0, b1, b2), cb in other._terms:
                e = (a0 + b0, a1 + b1, a2 + b2)
                acc[e] = acc.get(e, 0) + ca * cb
        return MultiPoly._from_dict(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = MultiPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def diff(self, name: str, n: int = 1) -> "MultiPoly":
        """n-th partial derivative with respect to one symbol."""
        i = _sym(name)
        acc = {}
        for e, c in self._terms:
            if e[i] < n:
                continue
            f = 1
            for j in range(n):
                f *= e[i] - j
            e2 = list(e)
            e2[i] -= n
            acc[tuple(e2)] = c * f
        return MultiPoly._from_dict(acc)

    def subs(self, **bindings: Scalar) -> "MultiPoly":
        """Substitute exact values for some symbols (``x=``, ``lam=``/``lambda_=``, ``alpha=``)."""
        b = {}
        for k, v in bindings.items():
            b[_sym(k.rstrip("_"))] = Fraction(v)
        return poly_eval(self, {SYMBOLS[i]: v for i, v in b.items()})

    # serialization

    def to_records(self) -> list[dict]:
        return [{"ex": e[0], "el": e[1], "ea": e[2], "coeff": format_rat(c)} for e, c in self._terms]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "MultiPoly":
        return cls(((r["ex"], r["el"], r["ea"]), parse_rat(r["coeff"])) for r in records)

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        return cls.from_records(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for e, c in self._terms:
            w.writerow([e[0], e[1], e[2], format_rat(c)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MultiPoly":
        rows = csv.reader(io.StringIO(text))
        return cls(((int(a), int(b), int(c)), parse_rat(q)) for a, b, c, q in rows)

    # display

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mono = "*".join(
                s if k == 1 else f"{s}^{k}" for s, k in zip(SYMBOLS, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def poly_eval(p: MultiPoly, bindings: Mapping[str, Scalar]) -> MultiPoly:
    """Substitute exact values for the bound symbols; unbound symbols survive."""
    vals: list[Fraction | None] = [None, None, None]
    for name, v in bindings.items():
        vals[_sym(name)] = Fraction(v)
    acc: dict[Exp, Fraction] = {}
    for e, c in p.terms:
        e2 = list(e)
        for i, v in enumerate(vals):
            if v is not None and e[i]:
                c = c * v ** e[i]
                e2[i] = 0
        e2 = tuple(e2)
        acc[e2] = acc.get(e2, 0) + c
    return MultiPoly._from_dict(acc)


def binom_poly(c: int, k: int) -> MultiPoly:
    """Generalized binomial ``C(alpha + c, k)`` as a polynomial in alpha.

    Product form, valid for any integer offset ``c`` (negative included).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    alpha = MultiPoly.var("alpha")
    p = MultiPoly.const(1)
    for j in range(k):
        p = p * (alpha + (c - j))
    return p / factorial(k)


@dataclass(frozen=True)
class TruncSeries:
    """Power series in ``var`` truncated after ``var**order``.

    ``coeffs[k]`` is the coefficient of ``var**k``; coefficients never
    mention ``var`` itself.
    """

    var: str
    order: int
    coeffs: tuple[MultiPoly, ...]

    def __post_init__(self):
        if self.var not in ("t", "x"):
            raise ValueError(f"series variable must be 't' or 'x', got {self.var!r}")
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = tuple(MultiPoly.coerce(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError(f"expected {self.order + 1} coefficients, got {len(coeffs)}")
        if self.var == "x" and any(c.mentions("x") for c in coeffs):
            raise ValueError("series coefficients may not mention the series variable")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_list(cls, var: str, coeffs: Sequence, order: int | None = None) -> "TruncSeries":
        """Build a series, zero-padding or truncating ``coeffs`` to ``order``."""
        if order is None:
            order = len(coeffs) - 1
        cs = [MultiPoly.coerce(c) for c in coeffs[: order + 1]]
        cs += [MultiPoly()] * (order + 1 - len(cs))
        return cls(var, order, tuple(cs))

    def __getitem__(self, k: int) -> MultiPoly:
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.var, order, self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def map(self, f) -> "TruncSeries":
        return TruncSeries(self.var, self.order, tuple(f(c) for c in self.coeffs))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``var**k`` keeping the order."""
        cs = [MultiPoly()] * k + list(self.coeffs)
        return TruncSeries.from_list(self.var, cs, self.order)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, other.map(lambda c: -c))

    def __neg__(self):
        return self.map(lambda c: -c)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self.map(lambda c: c * other)
        return NotImplemented

    __rmul__ = __mul__


def series_one(var: str, order: int) -> TruncSeries:
    return TruncSeries.from_list(var, [1], order)


def series_from_poly(p: MultiPoly, var: str, order: int) -> TruncSeries:
    """View a polynomial as a series in ``var`` (``var`` must be ``x`` here)."""
    if var != "x":
        raise ValueError("only polynomials in x can be re-read as series")
    return TruncSeries.from_list(var, [p.coeff_of("x", k) for k in range(order + 1)], order)


def _check_same_var(a: TruncSeries, b: TruncSeries):
    if a.var != b.var:
        raise ValueError(f"series in different variables: {a.var!r} vs {b.var!r}")


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _check_same_var(a, b)
    n = min(a.order, b.order)
    return TruncSeries(a.var, n, tuple(a.coeffs[k] + b.coeffs[k] for k in range(n + 1)))


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at ``min(a.order, b.order)``."""
    _check_same_var(a, b)
    n = min(a.order, b.order)
    out = []
    for k in range(n + 1):
        s = MultiPoly()
        for j in range(k + 1):
            if a.coeffs[j].is_zero() or b.coeffs[k - j].is_zero():
                continue
            s = s + a.coeffs[j] * b.coeffs[k - j]
        out.append(s)
    return TruncSeries(a.var, n, tuple(out))


def series_inverse(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; the constant term must be a nonzero rational."""
    a0 = a.coeffs[0]
    if a0.is_zero() or not a0.is_const():
        raise ValueError(f"series is not invertible: constant term {a0}")
    inv0 = 1 / a0.const_value()
    b = [MultiPoly.const(inv0)]
    for k in range(1, a.order + 1):
        s = MultiPoly()
        for j in range(1, k + 1):
            if not a.coeffs[j].is_zero():
                s = s + a.coeffs[j] * b[k - j]
        b.append(s * (-inv0))
    return TruncSeries(a.var, a.order, tuple(b))


def series_diff(a: TruncSeries, n: int = 1) -> TruncSeries:
    """Term-by-term n-th derivative; the order drops by ``n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > a.order:
        raise ValueError(f"cannot differentiate an order-{a.order} series {n} times")
    out = []
    for k in range(a.order - n + 1):
        out.append(a.coeffs[k + n] * (factorial(k + n) // factorial(k)))
    return TruncSeries(a.var, a.order - n, tuple(out))


def series_pow(a: TruncSeries, k: int) -> TruncSeries:
    if k < 0:
        return series_pow(series_inverse(a), -k)
    result, base = series_one(a.var, a.order), a
    while k:
        if k & 1:
            result = series_mul(result, base)
        base = series_mul(base, base)
        k >>= 1
    return result


def series_scale_arg(a: TruncSeries, c: MultiPoly | Scalar) -> TruncSeries:
    """Series of ``a(c * var)``: coefficient k is multiplied by ``c**k``."""
    c = MultiPoly.coerce(c)
    out, ck = [], MultiPoly.const(1)
    for coeff in a.coeffs:
        out.append(coeff * ck)
        ck = ck * c
    return TruncSeries(a.var, a.order, tuple(out))
