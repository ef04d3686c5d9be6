"""Exact fields: the rationals, prime fields GF(p) and number fields Q[t]/(f).

Every field is a frozen :class:`FieldSpec`. Arithmetic is available at two
levels. :class:`Scalar` wraps a spec together with a canonical value and
supports the usual operators. Hot loops (group-algebra convolution, linear
algebra) skip the wrapper and call the spec's ``add``/``mul``/``inv`` on
*raw* values directly:

========================  ============================================
field                     raw value
========================  ============================================
``Q``                     ``fractions.Fraction``
``GF(p)``                 ``int`` in ``range(p)``
``Q[t]/(f)``              ``tuple[Fraction, ...]`` low degree first,
                          no trailing zeros, length < deg f
========================  ============================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

from .errors import FieldMismatch, ParseError, ReducibleModulus, ZeroElement

__all__ = [
    "FieldSpec",
    "Rationals",
    "PrimeField",
    "NumberField",
    "Scalar",
    "QQ",
    "golden_field",
    "parse_field",
    "mult_order",
    "is_prime",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.2e9."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor(n: int) -> list[int]:
    primes = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            primes.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


class FieldSpec:
    """Common interface; concrete fields are the frozen dataclasses below."""

    is_finite: bool = False

    # -- raw arithmetic ---------------------------------------------------
    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def from_int(self, n: int) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one()
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def generator_value(self):
        """Raw value of the adjoined root ``t`` (number fields only)."""
        raise ParseError(f"field {self.text()} has no variable t")

    def format_raw(self, a) -> str:
        raise NotImplementedError

    def sort_key(self, a):
        return a

    def text(self) -> str:
        raise NotImplementedError

    def elements(self) -> Iterator[Any]:
        raise FieldMismatch(f"{self.text()} is infinite")

    # -- wrapped values ---------------------------------------------------
    def __call__(self, x) -> "Scalar":
        if isinstance(x, Scalar):
            if x.spec != self:
                raise FieldMismatch(f"{x.spec.text()} vs {self.text()}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return Scalar(self, self.coerce(x))

    def coerce(self, x) -> Any:
        """Raw value for a Python int / Fraction / Scalar."""
        if isinstance(x, Scalar):
            if x.spec != self:
                raise FieldMismatch(f"{x.spec.text()} vs {self.text()}")
            return x.value
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))
        raise TypeError(f"cannot coerce {x!r} into {self.text()}")

    def parse(self, text: str) -> "Scalar":
        return Scalar(self, _ExprParser(text, _FieldOps(self)).parse())

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Rationals(FieldSpec):
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroElement("division by zero in Q")
        return Fraction(1) / a

    def is_zero(self, a):
        return not a

    def format_raw(self, a):
        return str(a)

    def text(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(FieldSpec):
    p: int
    is_finite = True

    def __post_init__(self):
        if not (isinstance(self.p, int) and 2 <= self.p < 2**31 and is_prime(self.p)):
            raise ParseError(f"GF({self.p}): modulus must be a prime below 2^31")

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroElement(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        return pow(a, k, self.p)

    def format_raw(self, a):
        return str(a)

    def text(self):
        return f"GF({self.p})"

    def elements(self):
        return iter(range(self.p))

    @property
    def order(self) -> int:
        return self.p


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _poly_mul(a, b) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    """Quotient and remainder over Q; ``b`` must be nonzero."""
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / lead
        q[shift] = factor
        for i, y in enumerate(b):
            a[shift + i] -= factor * y
        a = list(_trim(a))
    return _trim(q), _trim(a)


@dataclass(frozen=True)
class NumberField(FieldSpec):
    """Q[t]/(modulus); irreducibility of the monic modulus is the caller's claim.

    ``modulus`` lists coefficients low degree first. A non-invertible element
    (nontrivial gcd with the modulus) raises :class:`ReducibleModulus`.
    """

    modulus: tuple

    def __post_init__(self):
        mod = _trim(Fraction(c) for c in self.modulus)
        if len(mod) < 2 or mod[-1] != 1:
            raise ParseError("number-field modulus must be monic of degree >= 1")
        object.__setattr__(self, "modulus", mod)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def _reduce(self, coeffs):
        coeffs = _trim(coeffs)
        if len(coeffs) > self.degree:
            _, coeffs = _poly_divmod(coeffs, self.modulus)
        return coeffs

    def zero(self):
        return ()

    def one(self):
        return (Fraction(1),)

    def from_int(self, n):
        return _trim((Fraction(n),))

    def generator_value(self):
        return self._reduce((Fraction(0), Fraction(1)))

    def add(self, a, b):
        n = max(len(a), len(b))
        return _trim(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def neg(self, a):
        return tuple(-x for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self._reduce(_poly_mul(a, b))

    def inv(self, a):
        if not a:
            raise ZeroElement("division by zero in number field")
        # extended Euclid: track s with s*a = r (mod modulus)
        r0, r1 = self.modulus, _trim(a)
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _trim(
                x - y
                for x, y in _zip_pad(s0, _poly_mul(q, s1))
            )
        if len(r0) != 1:
            raise ReducibleModulus(
                f"{self.format_raw(a)} shares a factor with the modulus of {self.text()}"
            )
        c = r0[0]
        return self._reduce(tuple(x / c for x in s0))

    def is_zero(self, a):
        return not a

    def sort_key(self, a):
        return (len(a), a)

    def format_raw(self, a):
        return _format_poly(a, "t")

    def text(self):
        return f"Q[t]/({_format_poly(self.modulus, 't', compact=True)})"


def _zip_pad(a, b):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else Fraction(0)), (b[i] if i < len(b) else Fraction(0))


def _format_poly(coeffs, var: str, compact: bool = False) -> str:
    if not coeffs:
        return "0"
    parts = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            mono = var if deg == 1 else f"{var}^{deg}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    sep = "" if compact else " "
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f"{sep}{sign}{sep}{body}"
    return out


QQ = Rationals()


def golden_field() -> NumberField:
    """Q[t]/(t^2 - t - 1); t is the golden ratio."""
    return NumberField((Fraction(-1), Fraction(-1), Fraction(1)))


class Scalar:
    """Immutable field element with canonical value."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.spec, self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.spec != self.spec:
                raise FieldMismatch(f"{self.spec.text()} vs {other.spec.text()}")
            return other.value
        return self.spec.coerce(other)

    def __add__(self, other):
        return Scalar(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.spec, self.spec.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.spec, self.spec.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.spec, self.spec.mul(self.value, self.spec.inv(self._other(other))))

    def __rtruediv__(self, other):
        return Scalar(self.spec, self.spec.mul(self._other(other), self.spec.inv(self.value)))

    def __neg__(self):
        return Scalar(self.spec, self.spec.neg(self.value))

    def __pow__(self, k: int):
        return Scalar(self.spec, self.spec.power(self.value, k))

    def inverse(self) -> "Scalar":
        return Scalar(self.spec, self.spec.inv(self.value))

    def is_zero(self) -> bool:
        return self.spec.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.spec.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __str__(self):
        return self.spec.format_raw(self.value)

    def __repr__(self):
        return f"Scalar({self.spec.text()}, {self})"


def mult_order(c: Scalar, cap: int = 10_000) -> int | None:
    """Least k >= 1 with c**k == 1, or None when no k <= cap works.

    Prime fields factor p - 1, so the answer is always exact there. Over Q
    only +-1 have finite order. Number fields use iterated powering.
    """
    spec = c.spec
    if c.is_zero():
        raise ZeroElement("multiplicative order of 0")
    if isinstance(spec, PrimeField):
        order = spec.p - 1
        for q in _factor(order):
            while order % q == 0 and pow(c.value, order // q, spec.p) == 1:
                order //= q
        return order
    if isinstance(spec, Rationals):
        if c.value == 1:
            return 1
        if c.value == -1:
            return 2 if cap >= 2 else None
        return None
    one = spec.one()
    x = c.value
    for k in range(1, cap + 1):
        if x == one:
            return k
        x = spec.mul(x, c.value)
    return None


# ---------------------------------------------------------------------------
# text syntax

_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$")
_NF_RE = re.compile(r"^\s*Q\s*\[\s*t\s*\]\s*/\s*\((.*)\)\s*$")


def parse_field(text: str) -> FieldSpec:
    """``Q``, ``GF(5)``, ``Q[t]/(t^2-t-1)``; also the alias ``golden``."""
    s = text.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s == "golden":
        return golden_field()
    m = _FIELD_RE.match(s)
    if m:
        return PrimeField(int(m.group(1)))
    m = _NF_RE.match(s)
    if m:
        coeffs = _ExprParser(m.group(1), _PolyOps()).parse()
        return NumberField(tuple(coeffs))
    raise ParseError(f"unrecognized field spec {text!r}")


class _FieldOps:
    def __init__(self, spec: FieldSpec):
        self.spec = spec

    def number(self, n):
        return self.spec.from_int(n)

    def var(self):
        return self.spec.generator_value()

    def add(self, a, b):
        return self.spec.add(a, b)

    def sub(self, a, b):
        return self.spec.sub(a, b)

    def neg(self, a):
        return self.spec.neg(a)

    def mul(self, a, b):
        return self.spec.mul(a, b)

    def div(self, a, b):
        return self.spec.mul(a, self.spec.inv(b))

    def pow(self, a, k):
        return self.spec.power(a, k)


class _PolyOps:
    """Q[t] without a modulus; division only by nonzero constants."""

    def number(self, n):
        return _trim((Fraction(n),))

    def var(self):
        return (Fraction(0), Fraction(1))

    def add(self, a, b):
        return _trim(x + y for x, y in _zip_pad(a, b))

    def sub(self, a, b):
        return _trim(x - y for x, y in _zip_pad(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        return _trim(_poly_mul(a, b))

    def div(self, a, b):
        if len(b) != 1:
            raise ParseError("can only divide polynomials by nonzero constants")
        return tuple(x / b[0] for x in a)

    def pow(self, a, k):
        if k < 0:
            raise ParseError("negative power of a polynomial")
        out = self.number(1)
        for _ in range(k):
            out = self.mul(out, a)
        return out


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(t)\b|([-+*/^()]))")


class _ExprParser:
    """Recursive descent for ``+ - * / ^`` expressions in integers and ``t``."""

    def __init__(self, text: str, ops):
        self.text = text
        self.ops = ops
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise ParseError("unexpected character", text, pos)
            kind = "num" if m.group(1) else "var" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}", self.text, pos)

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", self.text, 0)
        value = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", self.text, pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = self.ops.add(value, rhs) if op == "+" else self.ops.sub(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.factor()
            value = self.ops.mul(value, rhs) if op == "*" else self.ops.div(value, rhs)
        return value

    def factor(self):
        kind, v, pos = self.peek()
        if v in ("-", "+"):
            self.take()
            inner = self.factor()
            return self.ops.neg(inner) if v == "-" else inner
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, v, pos = self.take()
            if kind != "num":
                raise ParseError("expected integer exponent", self.text, pos)
            base = self.ops.pow(base, sign * int(v))
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return self.ops.number(int(v))
        if kind == "var":
            return self.ops.var()
        if v == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {v or 'end of input'!r}", self.text, pos)
