"""Groups with computable canonical forms.

Every backend hands out hashable canonical elements, so equality of group
elements is plain ``==`` on those values and no word-problem solver is ever
needed. Backends also carry named default generators; :func:`eval_word`
sends a free-group word through the induced homomorphism.

Affine maps compose right-to-left: the product ``g*h`` acts by applying ``h``
first, so ``(a1, b1)*(a2, b2) = (a1*a2, a1*b2 + b1)`` for maps ``t -> a*t + b``.

Group text: ``free(x,y)``, ``Z^3``, ``Z/4``, ``affine(Q)``, ``affine(Q, 3/2)``,
``affine(Q[t]/(t^2-t-1))``, ``fp(Z^1,Z^2)``, ``wreath``, ``prod(Z/2,Z/3)``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, MissingAssignment, NonUnit, ParseError, PreconditionFailed
from .scalars import FieldSpec, NumberField, QQ, Scalar, parse_field
from .words import Alphabet, Word, parse_word

__all__ = [
    "GroupCtx",
    "FreeGroup",
    "FreeAbelian",
    "FiniteCyclic",
    "Affine",
    "FreeProductFreeAbelian",
    "WreathZZ",
    "DirectProduct",
    "parse_group",
    "eval_word",
    "wreath_generators",
    "power_substitution_N",
    "finite_elements",
    "split_top_level",
]

_LETTERS = "xyzuvwabcdefjklmnopqrs"


def _default_names(n: int) -> tuple[str, ...]:
    if n <= 6:
        return tuple(_LETTERS[:n])
    return tuple(f"x{i + 1}" for i in range(n))


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside (), [], {} and <>."""
    depth = 0
    parts, cur = [], []
    for ch in text:
        if ch in "([{<":
            depth += 1
        elif ch in ")]}>":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


class GroupCtx:
    """Interface shared by all backends."""

    names: tuple[str, ...] = ()

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def sort_key(self, a):
        return a

    def format_elem(self, a) -> str:
        raise NotImplementedError

    def parse_elem(self, text: str):
        return eval_word(self, parse_word(text, self.alphabet))

    def text(self) -> str:
        raise NotImplementedError

    # -- derived -------------------------------------------------------------
    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.names)

    def default_assignment(self) -> dict[str, Any]:
        return dict(zip(self.names, self.generators()))

    def gen(self, name: str):
        return self.default_assignment()[name]

    def prod(self, elems: Iterable):
        out = self.identity()
        for e in elems:
            out = self.mul(out, e)
        return out

    def power(self, a, k: int):
        base = a if k >= 0 else self.inv(a)
        out = self.identity()
        k = abs(k)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def conj(self, a, h):
        """``h^-1 a h``."""
        return self.mul(self.mul(self.inv(h), a), h)

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def commutes(self, a, b) -> bool:
        return self.mul(a, b) == self.mul(b, a)

    def is_identity(self, a) -> bool:
        return a == self.identity()

    def __str__(self):
        return self.text()


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreeGroup(GroupCtx):
    alphabet_: Alphabet

    @classmethod
    def on(cls, *names: str) -> "FreeGroup":
        return cls(Alphabet(tuple(names)))

    @property
    def names(self):
        return self.alphabet_.names

    @property
    def alphabet(self):
        return self.alphabet_

    def identity(self):
        return self.alphabet_.identity

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def generators(self):
        return self.alphabet_.gens()

    def sort_key(self, a):
        return a.sort_key()

    def format_elem(self, a):
        return str(a)

    def parse_elem(self, text):
        return parse_word(text, self.alphabet_)

    def text(self):
        return f"free({','.join(self.names)})"


@dataclass(frozen=True)
class FreeAbelian(GroupCtx):
    rank: int

    @property
    def names(self):
        return _default_names(self.rank)

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def generators(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def sort_key(self, a):
        return (sum(abs(x) for x in a), tuple((abs(x), x < 0) for x in a))

    def format_elem(self, a):
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, a) if e]
        return "*".join(parts) or "1"

    def text(self):
        return f"Z^{self.rank}"


@dataclass(frozen=True)
class FiniteCyclic(GroupCtx):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParseError("cyclic group order must be >= 1")

    names = ("g",)

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return -a % self.n

    def generators(self):
        return [1 % self.n]

    def format_elem(self, a):
        return "1" if a == 0 else "g" if a == 1 else f"g^{a}"

    def text(self):
        return f"Z/{self.n}"

    def elements(self):
        return list(range(self.n))


@dataclass(frozen=True)
class Affine(GroupCtx):
    """Maps ``t -> a*t + b`` over a field; elements are raw pairs ``(a, b)``.

    Default generators: ``g: t -> t + 1`` and ``h: t -> alpha*t`` where alpha
    defaults to ``t`` in a number field and to 2 otherwise.
    """

    field: FieldSpec
    alpha: Any = None

    def __post_init__(self):
        alpha = self.alpha
        if alpha is None:
            alpha = self.field.generator_value() if isinstance(self.field, NumberField) else self.field.from_int(2)
        elif isinstance(alpha, str):
            alpha = self.field.parse(alpha).value
        else:
            alpha = self.field.coerce(alpha)
        if self.field.is_zero(alpha):
            raise NonUnit("alpha must be nonzero")
        object.__setattr__(self, "alpha", alpha)

    names = ("g", "h")

    def elem(self, a, b=0):
        """Element from Scalars / ints / Fractions; rejects ``a == 0``."""
        a, b = self.field.coerce(a), self.field.coerce(b)
        if self.field.is_zero(a):
            raise NonUnit("affine map with zero linear part")
        return (a, b)

    def identity(self):
        return (self.field.one(), self.field.zero())

    def mul(self, x, y):
        f = self.field
        return (f.mul(x[0], y[0]), f.add(f.mul(x[0], y[1]), x[1]))

    def inv(self, x):
        f = self.field
        ai = f.inv(x[0])
        return (ai, f.neg(f.mul(ai, x[1])))

    def apply(self, x, t):
        f = self.field
        t = f.coerce(t)
        return Scalar(f, f.add(f.mul(x[0], t), x[1]))

    def generators(self):
        f = self.field
        return [(f.one(), f.one()), (self.alpha, f.zero())]

    def sort_key(self, x):
        return (self.field.sort_key(x[0]), self.field.sort_key(x[1]))

    def format_elem(self, x):
        return f"({self.field.format_raw(x[0])}, {self.field.format_raw(x[1])})"

    def parse_elem(self, text):
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            parts = split_top_level(s[1:-1])
            if len(parts) == 2:
                return self.elem(self.field.parse(parts[0]), self.field.parse(parts[1]))
        return super().parse_elem(text)

    def text(self):
        default = Affine(self.field)
        if default.alpha == self.alpha:
            return f"affine({self.field.text()})"
        return f"affine({self.field.text()}, {self.field.format_raw(self.alpha)})"


@dataclass(frozen=True)
class FreeProductFreeAbelian(GroupCtx):
    """Free product of free abelian groups of the given ranks.

    Elements are tuples of syllables ``(factor, exponent_vector)``; adjacent
    syllables lie in different factors and no vector is zero. Factor ``i``
    uses letter ``L`` for its first generator and ``L2, L3, ...`` after it.
    """

    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        if not self.ranks or any(r < 1 for r in self.ranks):
            raise ParseError("free product needs positive ranks")

    @property
    def names(self):
        out = []
        for i, r in enumerate(self.ranks):
            letter = _LETTERS[i] if len(self.ranks) <= len(_LETTERS) else f"f{i}"
            out.extend(letter if j == 0 else f"{letter}{j + 1}" for j in range(r))
        return tuple(out)

    def identity(self):
        return ()

    def mul(self, a, b):
        out = list(a)
        for f, vec in b:
            if out and out[-1][0] == f:
                merged = tuple(x + y for x, y in zip(out[-1][1], vec))
                out.pop()
                if any(merged):
                    out.append((f, merged))
            else:
                out.append((f, vec))
        return tuple(out)

    def inv(self, a):
        return tuple((f, tuple(-x for x in vec)) for f, vec in reversed(a))

    def generators(self):
        gens = []
        for i, r in enumerate(self.ranks):
            for j in range(r):
                gens.append(((i, tuple(int(j == k) for k in range(r))),))
        return gens

    def syllable(self, factor: int, vec: Sequence[int]):
        vec = tuple(vec)
        if len(vec) != self.ranks[factor]:
            raise ValueError("exponent vector has wrong length")
        return ((factor, vec),) if any(vec) else ()

    def sort_key(self, a):
        return (len(a), sum(abs(x) for _, v in a for x in v), a)

    def format_elem(self, a):
        if not a:
            return "1"
        names = self.names
        offsets = [sum(self.ranks[:i]) for i in range(len(self.ranks))]
        parts = []
        for f, vec in a:
            for j, e in enumerate(vec):
                if e:
                    n = names[offsets[f] + j]
                    parts.append(n if e == 1 else f"{n}^{e}")
        return "*".join(parts)

    def text(self):
        return "fp(" + ",".join(f"Z^{r}" for r in self.ranks) + ")"


@dataclass(frozen=True)
class WreathZZ(GroupCtx):
    """Lamplighter-style Z wr Z; elements ``(lamps, shift)``.

    ``lamps`` is a sorted tuple of ``(position, value)`` with nonzero values.
    ``(f, s) * (f', s') = (f + f'(. + s), s + s')``, so conjugating by the
    shift generator moves lamps: ``h^-1 g h`` lights position 1.
    """

    names = ("g", "h")

    def identity(self):
        return ((), 0)

    def mul(self, a, b):
        fa, sa = a
        fb, sb = b
        lamps = dict(fa)
        for pos, val in fb:
            p = pos - sa
            v = lamps.get(p, 0) + val
            if v:
                lamps[p] = v
            else:
                lamps.pop(p, None)
        return (tuple(sorted(lamps.items())), sa + sb)

    def inv(self, a):
        f, s = a
        return (tuple((pos + s, -val) for pos, val in f), -s)

    def generators(self):
        return [(((0, 1),), 0), ((), 1)]

    def elem(self, lamps: Mapping[int, int] | Iterable[tuple[int, int]], shift: int = 0):
        items = dict(lamps).items() if not isinstance(lamps, dict) else lamps.items()
        return (tuple(sorted((p, v) for p, v in items if v)), shift)

    def sort_key(self, a):
        f, s = a
        return (sum(abs(v) for _, v in f) + abs(s), len(f), f, s)

    def format_elem(self, a):
        f, s = a
        return "(" + ",".join(f"{p}:{v}" for p, v in f) + f";{s})"

    def parse_elem(self, text):
        s = text.strip()
        m = re.fullmatch(r"\(([^;]*);\s*(-?\d+)\s*\)", s)
        if m:
            lamps = {}
            body = m.group(1).strip()
            if body:
                for item in body.split(","):
                    p, v = item.split(":")
                    lamps[int(p)] = lamps.get(int(p), 0) + int(v)
            return self.elem(lamps, int(m.group(2)))
        return super().parse_elem(text)

    def text(self):
        return "wreath"


@dataclass(frozen=True)
class DirectProduct(GroupCtx):
    """Direct product; generator names get the component number appended."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def names(self):
        return tuple(f"{n}{i + 1}" for i, G in enumerate(self.factors) for n in G.names)

    def identity(self):
        return tuple(G.identity() for G in self.factors)

    def mul(self, a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(G.inv(x) for G, x in zip(self.factors, a))

    def generators(self):
        gens = []
        for i, G in enumerate(self.factors):
            for g in G.generators():
                e = list(self.identity())
                e[i] = g
                gens.append(tuple(e))
        return gens

    def sort_key(self, a):
        return tuple(G.sort_key(x) for G, x in zip(self.factors, a))

    def format_elem(self, a):
        return "<" + " & ".join(G.format_elem(x) for G, x in zip(self.factors, a)) + ">"

    def parse_elem(self, text):
        s = text.strip()
        if s.startswith("<") and s.endswith(">"):
            parts = split_top_level(s[1:-1], "&")
            if len(parts) != len(self.factors):
                raise ParseError(f"expected {len(self.factors)} components", text)
            return tuple(G.parse_elem(p) for G, p in zip(self.factors, parts))
        return super().parse_elem(text)

    def text(self):
        return "prod(" + ",".join(G.text() for G in self.factors) + ")"


# ---------------------------------------------------------------------------


def eval_word(ctx: GroupCtx, w: Word, assignment: Mapping | None = None):
    """Image of ``w`` under the homomorphism fixed by ``assignment``.

    ``assignment`` maps generator names (or indices into ``w.alphabet``) to
    elements of ``ctx``; by default generators are matched to the backend's
    own generators by name.
    """
    if assignment is None:
        assignment = ctx.default_assignment()
    names = w.alphabet.names
    images: dict[int, Any] = {}
    out = ctx.identity()
    for a in w.letters:
        img = images.get(a)
        if img is None:
            i = abs(a) - 1
            if names[i] in assignment:
                base = assignment[names[i]]
            elif i in assignment:
                base = assignment[i]
            else:
                raise MissingAssignment(f"no image for generator {names[i]!r}")
            images[abs(a)] = base
            images[-abs(a)] = ctx.inv(base)
            img = images[a]
        out = ctx.mul(out, img)
    return out


def wreath_generators() -> tuple:
    """Standard ``(g, h)`` in Z wr Z: a lamp at 0 and the unit shift."""
    W = WreathZZ()
    g, h = W.generators()
    hgh = W.conj(g, h)
    assert hgh != g and W.commutes(g, hgh)
    return g, h


def power_substitution_N(elems: Sequence, ctx: FreeProductFreeAbelian | None = None, max_n: int = 100_000) -> int:
    """Least N >= 1 for which ``x->x, y->y, y2->y^N`` is injective on ``elems``.

    ``elems`` live in ``fp(Z^1,Z^2)``; the target is the free group on x, y.
    """
    ctx = ctx or FreeProductFreeAbelian((1, 2))
    if ctx.ranks != (1, 2):
        raise PreconditionFailed("power substitution expects fp(Z^1,Z^2)")
    elems = list(elems)
    if len(set(elems)) != len(elems):
        raise PreconditionFailed("input elements must be distinct")
    F = Alphabet(("x", "y"))

    def image(e, N):
        letters: list[int] = []
        for f, vec in e:
            k = vec[0] if f == 0 else vec[0] + N * vec[1]
            sym = 1 if f == 0 else 2
            letters.extend([sym if k > 0 else -sym] * abs(k))
        return F.word(letters)

    for N in range(1, max_n + 1):
        if len({image(e, N) for e in elems}) == len(elems):
            return N
    raise BudgetExceeded(f"no injective substitution with N <= {max_n}")


def finite_elements(ctx: GroupCtx, limit: int = 10_000) -> list:
    """All elements of a finite group by closure under its generators."""
    start = ctx.identity()
    seen = {start: None}
    queue = deque([start])
    gens = ctx.generators()
    while queue:
        a = queue.popleft()
        for g in gens:
            b = ctx.mul(a, g)
            if b not in seen:
                if len(seen) >= limit:
                    raise BudgetExceeded(f"group has more than {limit} elements")
                seen[b] = None
                queue.append(b)
    return sorted(seen, key=ctx.sort_key)


# ---------------------------------------------------------------------------
# text syntax

_Z_RE = re.compile(r"^Z(?:\s*\^\s*(\d+))?$")
_ZN_RE = re.compile(r"^Z\s*/\s*(\d+)$")


def parse_group(text: str) -> GroupCtx:
    s = text.strip()
    m = _ZN_RE.match(s)
    if m:
        return FiniteCyclic(int(m.group(1)))
    m = _Z_RE.match(s)
    if m:
        return FreeAbelian(int(m.group(1) or 1))
    if s == "wreath":
        return WreathZZ()
    m = re.match(r"^(\w+)\s*\((.*)\)$", s)
    if not m:
        raise ParseError(f"unrecognized group spec {text!r}")
    head, body = m.group(1), m.group(2)
    args = split_top_level(body)
    if head == "free":
        names = tuple(a for a in args if a)
        return FreeGroup(Alphabet(names))
    if head == "affine":
        field = parse_field(args[0]) if args[0] else QQ
        if len(args) > 2:
            raise ParseError(f"affine takes a field and an optional alpha: {text!r}")
        return Affine(field, args[1] if len(args) == 2 else None)
    if head == "fp":
        ranks = []
        for a in args:
            mm = _Z_RE.match(a)
            if not mm:
                raise ParseError(f"free-product factor must be Z^r, got {a!r}")
            ranks.append(int(mm.group(1) or 1))
        return FreeProductFreeAbelian(tuple(ranks))
    if head == "prod":
        return DirectProduct(tuple(parse_group(a) for a in args))
    raise ParseError(f"unrecognized group spec {text!r}")
