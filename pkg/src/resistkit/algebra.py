"""Group algebras kG: finitely supported maps from group elements to a field.

Element text: ``3/2*x*y - 1 + t*y^-1``; number-field coefficients other than
a bare ``t`` go in parentheses, as in ``(2*t+1)*x``. Each term is an optional
coefficient followed by ``*``-separated group factors (words, or a backend's
element literals); a term with no group factor is a multiple of 1.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from . import _kernels
from .errors import CapExceeded, ContextMismatch, FieldMismatch, NotBinomial, ParseError
from .groups import FiniteCyclic, GroupCtx, split_top_level
from .scalars import FieldSpec, NumberField, PrimeField, Scalar
from .words import identifiers_in

__all__ = [
    "AlgebraElem",
    "parse_algebra",
    "binomial_normalize",
    "enumerate_units",
    "UnitEnumeration",
]


class AlgebraElem:
    """Element of kG. ``terms`` maps canonical group elements to raw nonzero values.

    The constructor also accepts Scalars, ints and Fractions as coefficients.
    """

    __slots__ = ("ctx", "spec", "terms")

    def __init__(self, ctx: GroupCtx, spec: FieldSpec, terms: dict | None = None):
        self.ctx = ctx
        self.spec = spec
        clean = {}
        for g, c in (terms or {}).items():
            if isinstance(c, Scalar):
                if c.spec != spec:
                    raise FieldMismatch(f"{c.spec.text()} coefficient in {spec.text()} algebra")
                c = c.value
            elif isinstance(c, (int, Fraction)):
                c = spec.coerce(c)
            if not spec.is_zero(c):
                clean[g] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ctx, spec, terms: dict) -> "AlgebraElem":
        out = object.__new__(cls)
        out.ctx, out.spec, out.terms = ctx, spec, terms
        return out

    @classmethod
    def zero(cls, ctx, spec) -> "AlgebraElem":
        return cls._raw(ctx, spec, {})

    @classmethod
    def one(cls, ctx, spec) -> "AlgebraElem":
        return cls._raw(ctx, spec, {ctx.identity(): spec.one()})

    @classmethod
    def monomial(cls, ctx, spec, g, c=1) -> "AlgebraElem":
        return cls(ctx, spec, {g: spec.coerce(c)})

    @classmethod
    def parse(cls, text: str, ctx: GroupCtx, spec: FieldSpec) -> "AlgebraElem":
        return parse_algebra(text, ctx, spec)

    # -- inspection -------------------------------------------------------
    def support(self) -> list:
        return sorted(self.terms, key=self.ctx.sort_key)

    def coefficient(self, g) -> Scalar:
        return Scalar(self.spec, self.terms.get(g, self.spec.zero()))

    def items(self) -> list[tuple[Any, Scalar]]:
        return [(g, Scalar(self.spec, self.terms[g])) for g in self.support()]

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return self.ctx == other.ctx and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.spec, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "AlgebraElem"):
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx.text()} vs {other.ctx.text()}")
        if self.spec != other.spec:
            raise ContextMismatch(f"{self.spec.text()} vs {other.spec.text()}")

    def _coerce(self, other) -> "AlgebraElem":
        if isinstance(other, AlgebraElem):
            self._check(other)
            return other
        return AlgebraElem.monomial(self.ctx, self.spec, self.ctx.identity(), other)

    def __add__(self, other):
        other = self._coerce(other)
        spec = self.spec
        terms = dict(self.terms)
        for g, c in other.terms.items():
            v = spec.add(terms.get(g, spec.zero()), c)
            if spec.is_zero(v):
                terms.pop(g, None)
            else:
                terms[g] = v
        return AlgebraElem._raw(self.ctx, spec, terms)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElem._raw(self.ctx, self.spec, {g: self.spec.neg(c) for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "AlgebraElem":
        spec = self.spec
        c = spec.coerce(c)
        if spec.is_zero(c):
            return AlgebraElem.zero(self.ctx, spec)
        return AlgebraElem._raw(self.ctx, spec, {g: spec.mul(c, v) for g, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElem):
            return self.scale(other)
        self._check(other)
        spec, mul = self.spec, self.ctx.mul
        terms: dict = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = mul(g, h)
                v = spec.add(terms.get(k, spec.zero()), spec.mul(a, b))
                if spec.is_zero(v):
                    terms.pop(k, None)
                else:
                    terms[k] = v
        return AlgebraElem._raw(self.ctx, spec, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def sandwich(self, u, v, c=None) -> "AlgebraElem":
        """``c * u * self * v`` for group elements ``u, v``."""
        mul = self.ctx.mul
        spec = self.spec
        if c is None:
            return AlgebraElem._raw(self.ctx, spec, {mul(mul(u, g), v): a for g, a in self.terms.items()})
        c = spec.coerce(c)
        if spec.is_zero(c):
            return AlgebraElem.zero(self.ctx, spec)
        return AlgebraElem._raw(
            self.ctx, spec, {mul(mul(u, g), v): spec.mul(c, a) for g, a in self.terms.items()}
        )

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers need an inverse")
        out = AlgebraElem.one(self.ctx, self.spec)
        for _ in range(k):
            out = out * self
        return out

    # -- display ------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        ident = self.ctx.identity()
        for g, c in self.items():
            neg = False
            ctext = str(c)
            if isinstance(self.spec, PrimeField):
                pass
            elif isinstance(self.spec, NumberField):
                if len(c.value) == 1 and c.value[0] < 0:
                    neg, ctext = True, str(-c)
                elif len(c.value) > 1:
                    ctext = f"({ctext})"
            elif c.value < 0:
                neg, ctext = True, str(-c)
            gtext = self.ctx.format_elem(g)
            if g == ident:
                body = ctext
            elif ctext == "1":
                body = gtext
            else:
                body = f"{ctext}*{gtext}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"AlgebraElem({self.ctx.text()}, {self.spec.text()}, {self})"


# ---------------------------------------------------------------------------

_NUM_RE = re.compile(r"^\d+(?:/\d+)?$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Top-level split on + and -, leaving exponent signs alone."""
    out: list[tuple[int, str]] = []
    depth = 0
    sign = 1
    cur: list[str] = []
    prev = ""
    for ch in text:
        if ch in "([{<":
            depth += 1
        elif ch in ")]}>":
            depth -= 1
        if depth == 0 and ch in "+-" and prev != "^":
            body = "".join(cur).strip()
            if body:
                out.append((sign, body))
                sign = 1
            sign *= 1 if ch == "+" else -1
            cur = []
        else:
            cur.append(ch)
        if not ch.isspace():
            prev = ch
    body = "".join(cur).strip()
    if not body:
        raise ParseError("dangling operator", text, len(text))
    out.append((sign, body))
    return out


def _is_coefficient(factor: str, ctx: GroupCtx, spec: FieldSpec) -> bool:
    if _NUM_RE.match(factor):
        return True
    idents = identifiers_in(factor)
    uses_t = isinstance(spec, NumberField) and "t" not in ctx.names
    if factor == "t":
        return uses_t
    if factor.startswith("(") and factor.endswith(")"):
        if any(i != "t" for i in idents) or ("t" in idents and not uses_t):
            return False
        try:
            spec.parse(factor)
        except ParseError:
            return False
        return True
    return False


def parse_algebra(text: str, ctx: GroupCtx, spec: FieldSpec) -> AlgebraElem:
    if not text.strip():
        raise ParseError("empty element", text, 0)
    out = AlgebraElem.zero(ctx, spec)
    for sign, term in _split_terms(text):
        factors = split_top_level(term, "*")
        if any(not f for f in factors):
            raise ParseError(f"empty factor in term {term!r}", text)
        coeff = Scalar(spec, spec.from_int(sign))
        i = 0
        while i < len(factors) and _is_coefficient(factors[i], ctx, spec):
            coeff = coeff * spec.parse(factors[i])
            i += 1
        g = ctx.identity()
        for f in factors[i:]:
            g = ctx.mul(g, ctx.parse_elem(f))
        out = out + AlgebraElem.monomial(ctx, spec, g, coeff)
    return out


def binomial_normalize(b: AlgebraElem) -> tuple[Any, Scalar]:
    """Write a two-term element as a unit times ``g - c``.

    With support ``s0 < s1`` in canonical order and coefficients ``c0, c1``,
    ``b = (c1 * s0) * (g - c)`` where ``g = s0^-1 s1`` and ``c = -c0/c1``.
    Returns ``(g, c)``.
    """
    supp = b.support()
    if len(supp) != 2:
        raise NotBinomial(f"support has {len(supp)} elements, expected 2")
    s0, s1 = supp
    ctx, spec = b.ctx, b.spec
    g = ctx.mul(ctx.inv(s0), s1)
    c = Scalar(spec, spec.neg(spec.mul(b.terms[s0], spec.inv(b.terms[s1]))))
    return g, c


@dataclass
class UnitEnumeration:
    units: list[tuple[AlgebraElem, AlgebraElem]]
    has_non_monomial: bool
    checked: int

    @property
    def non_monomial(self) -> list[tuple[AlgebraElem, AlgebraElem]]:
        return [(u, v) for u, v in self.units if len(u) > 1]


def enumerate_units(spec: PrimeField, ctx: FiniteCyclic, cap: int = 2**20) -> UnitEnumeration:
    """Every unit of GF(p)[Z/n] with its inverse, by exhaustive search."""
    if not isinstance(spec, PrimeField):
        raise FieldMismatch("unit enumeration needs a prime field")
    if not isinstance(ctx, FiniteCyclic):
        raise ContextMismatch("unit enumeration needs a finite cyclic group")
    p, n = spec.p, ctx.n
    total = p**n
    if total > cap:
        raise CapExceeded(f"|k|^|G| = {total} exceeds cap {cap}")
    coeffs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(total, n)
    ok, inverses = _kernels.circulant_inverse(coeffs, p)
    units = []
    has_non_monomial = False
    for row in np.flatnonzero(ok):
        a, b = coeffs[row], inverses[row]
        u = AlgebraElem(ctx, spec, {k: int(a[k]) for k in range(n)})
        v = AlgebraElem(ctx, spec, {k: int(b[k]) for k in range(n)})
        has_non_monomial |= len(u) > 1
        units.append((u, v))
    return UnitEnumeration(units, has_non_monomial, total)
