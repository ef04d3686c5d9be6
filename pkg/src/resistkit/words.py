"""Freely reduced words over a named alphabet.

A letter is a nonzero int: ``+(i+1)`` is generator ``i`` and ``-(i+1)`` its
inverse. Words are interned, so two equal words are the same object and
equality is an identity check. Hashes depend only on the letters, which keeps
set and dict iteration order reproducible across runs.

Word text grammar::

    word := term (('*')? term)*
    term := ident ('^' int)? | '[' word ',' word ']' ('^' int)?
          | '(' word ')' ('^' int)? | '1'

``[a,b]`` is the commutator ``a^-1 b^-1 a b``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    AlphabetMismatch,
    BudgetExceeded,
    IdentityInput,
    ParseError,
    UnknownGenerator,
)

__all__ = [
    "Alphabet",
    "Word",
    "parse_word",
    "multiply",
    "invert",
    "cyclic_reduce",
    "ball_enumerate",
    "ball_size",
    "involved_generators",
    "primitive_root",
    "commutator",
    "identifiers_in",
]


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    @property
    def identity(self) -> "Word":
        return Word(self, ())

    def gen(self, name_or_index) -> "Word":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Word(self, (i + 1,))

    def gens(self) -> list["Word"]:
        return [Word(self, (i + 1,)) for i in range(len(self.names))]

    def word(self, letters: Iterable[int]) -> "Word":
        return Word(self, _free_reduce(letters))

    def parse(self, text: str) -> "Word":
        return parse_word(text, self)

    def letter_text(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else f"{name}^-1"


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("letter 0 is not allowed")
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def _letter_key(a: int) -> int:
    return 2 * (abs(a) - 1) + (a < 0)


class Word:
    """Interned freely reduced word. Construct via :class:`Alphabet` helpers."""

    __slots__ = ("alphabet", "letters", "_hash", "__weakref__")
    _table: dict = {}
    _lock = threading.Lock()

    def __new__(cls, alphabet: Alphabet, letters: tuple[int, ...]):
        key = (alphabet, letters)
        w = cls._table.get(key)
        if w is None:
            with cls._lock:
                w = cls._table.get(key)
                if w is None:
                    w = object.__new__(cls)
                    object.__setattr__(w, "alphabet", alphabet)
                    object.__setattr__(w, "letters", letters)
                    object.__setattr__(w, "_hash", hash(letters))
                    cls._table[key] = w
        return w

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __reduce__(self):
        return (Word, (self.alphabet, self.letters))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __len__(self):
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self):
        return (len(self.letters), tuple(_letter_key(a) for a in self.letters))

    def __lt__(self, other: "Word"):
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def inverse(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        out = self.alphabet.identity
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out

    @property
    def first(self) -> int | None:
        return self.letters[0] if self.letters else None

    @property
    def last(self) -> int | None:
        return self.letters[-1] if self.letters else None

    def involves(self, gen_index: int) -> bool:
        return (gen_index + 1) in self.letters or -(gen_index + 1) in self.letters

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            run = j - i
            name = self.alphabet.names[abs(L[i]) - 1]
            exp = run if L[i] > 0 else -run
            parts.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return "*".join(parts)

    def __repr__(self):
        return f"Word({self})"


def _check(a: Word, b: Word):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet.names} vs {b.alphabet.names}")


def multiply(a: Word, b: Word) -> Word:
    _check(a, b)
    x, y = a.letters, b.letters
    i = 0
    n = min(len(x), len(y))
    while i < n and x[len(x) - 1 - i] == -y[i]:
        i += 1
    return Word(a.alphabet, x[: len(x) - i] + y[i:])


def invert(a: Word) -> Word:
    return Word(a.alphabet, tuple(-l for l in reversed(a.letters)))


def commutator(a: Word, b: Word) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return multiply(multiply(invert(a), invert(b)), multiply(a, b))


def cyclic_reduce(a: Word) -> tuple[Word, Word]:
    """``(w0, u)`` with ``a = u w0 u^-1`` and ``w0`` cyclically reduced."""
    L = a.letters
    i = 0
    while 2 * i + 1 < len(L) and L[i] == -L[len(L) - 1 - i]:
        i += 1
    return Word(a.alphabet, L[i : len(L) - i]), Word(a.alphabet, L[:i])


def _smallest_period(seq: Sequence[int]) -> int:
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n


def primitive_root(w: Word) -> tuple[Word, int]:
    """``(u, k)`` with ``w = u^k``, ``k`` maximal and ``u`` not a proper power."""
    if w.is_identity():
        raise IdentityInput("the identity has no primitive root")
    core, conj = cyclic_reduce(w)
    p = _smallest_period(core.letters)
    root = Word(w.alphabet, core.letters[:p])
    return multiply(multiply(conj, root), invert(conj)), len(core.letters) // p


def ball_size(rank: int, radius: int) -> int:
    if rank == 0:
        return 1
    total, shell = 1, 2 * rank
    for _ in range(radius):
        total += shell
        shell *= 2 * rank - 1
    return total


def ball_enumerate(alphabet: Alphabet, radius: int, cap: int | None = None) -> list[Word]:
    """All reduced words of length <= radius, ordered by length then letters.

    Within a length, letters compare as ``x < x^-1 < y < y^-1 < ...``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    size = ball_size(len(alphabet), radius)
    if cap is not None and size > cap:
        raise BudgetExceeded(f"ball of radius {radius} has {size} words > cap {cap}")
    letters = sorted(
        [i + 1 for i in range(len(alphabet))] + [-(i + 1) for i in range(len(alphabet))],
        key=_letter_key,
    )
    out = [alphabet.identity]
    layer: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for a in letters:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        out.extend(Word(alphabet, w) for w in nxt)
        layer = nxt
    return out


def involved_generators(words: Iterable[Word]) -> set[str]:
    """Names of generators occurring (with either sign) in any of the words."""
    out = set()
    for w in words:
        for a in w.letters:
            out.add(w.alphabet.names[abs(a) - 1])
    return out


# ---------------------------------------------------------------------------
# parsing

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_WTOKEN_RE = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(\d+)|(\S))")


def identifiers_in(text: str) -> list[str]:
    """Distinct identifiers in order of first appearance."""
    seen: dict[str, None] = {}
    for m in _IDENT_RE.finditer(text):
        seen.setdefault(m.group(0))
    return list(seen)


class _WordParser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = []
        pos = 0
        while pos < len(text):
            if not text[pos:].strip():
                break
            m = _WTOKEN_RE.match(text, pos)
            kind = "ident" if m.group(1) else "int" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", self.text, pos)

    def parse(self) -> Word:
        if not self.tokens:
            raise ParseError("empty word", self.text, 0)
        w = self.word()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", self.text, pos)
        return w

    def _starts_term(self):
        kind, v, _ = self.peek()
        return kind == "ident" or (kind == "int" and v == "1") or v in ("[", "(")

    def word(self) -> Word:
        w = self.term()
        while True:
            if self.peek()[1] == "*":
                self.take()
                w = multiply(w, self.term())
            elif self._starts_term():
                w = multiply(w, self.term())
            else:
                return w

    def exponent(self, base: Word) -> Word:
        if self.peek()[1] != "^":
            return base
        self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, v, pos = self.take()
        if kind != "int":
            raise ParseError("expected integer exponent", self.text, pos)
        return base ** (sign * int(v))

    def term(self) -> Word:
        kind, v, pos = self.take()
        if kind == "ident":
            if v not in self.alphabet.names:
                raise UnknownGenerator(f"unknown generator {v!r}", self.text, pos)
            return self.exponent(self.alphabet.gen(v))
        if kind == "int":
            if v != "1":
                raise ParseError(f"unexpected integer {v}", self.text, pos)
            return self.exponent(self.alphabet.identity)
        if v == "[":
            a = self.word()
            self.expect(",")
            b = self.word()
            self.expect("]")
            return self.exponent(commutator(a, b))
        if v == "(":
            a = self.word()
            self.expect(")")
            return self.exponent(a)
        raise ParseError(f"unexpected {v or 'end of input'!r}", self.text, pos)


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    """Parse word text; without an alphabet, one is built from the identifiers."""
    if alphabet is None:
        alphabet = Alphabet(tuple(sorted(identifiers_in(text))))
    return _WordParser(text, alphabet).parse()
