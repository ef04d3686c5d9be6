"""Truncated Magnus expansion of free-group words.

Generator ``x_i`` goes to ``1 + X_i`` and ``x_i^-1`` to ``1 - X_i + X_i^2 - ...``
in noncommuting power series with integer coefficients, truncated at total
degree ``D``. By Magnus' theorem the least degree of a nonconstant term is
the depth of the word in the lower central series, so these series give
effective lower-central weights.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AboveCap, IdentityInput, PreconditionFailed
from .words import Word, commutator, primitive_root

__all__ = [
    "NCSeries",
    "magnus_embed",
    "weight",
    "lcs_image",
    "refute_trinomial_config",
    "Refutation",
    "Inconclusive",
    "DEFAULT_DEGREE",
]

DEFAULT_DEGREE = 6


class NCSeries:
    """Noncommutative polynomial truncated at degree ``D``.

    ``coeffs`` maps tuples of generator indices to nonzero ints; the empty
    tuple is the constant term.
    """

    __slots__ = ("D", "coeffs")

    def __init__(self, D: int, coeffs: dict | None = None):
        if D < 1:
            raise ValueError("degree cap must be >= 1")
        self.D = D
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if c and len(m) <= D}

    @classmethod
    def one(cls, D: int) -> "NCSeries":
        return cls(D, {(): 1})

    def __eq__(self, other):
        return isinstance(other, NCSeries) and self.D == other.D and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.D, frozenset(self.coeffs.items())))

    def __mul__(self, other: "NCSeries") -> "NCSeries":
        D = min(self.D, other.D)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            if len(m1) > D:
                continue
            room = D - len(m1)
            for m2, c2 in other.coeffs.items():
                if len(m2) <= room:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + c1 * c2
        return NCSeries(D, out)

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) - c
        return NCSeries(min(self.D, other.D), out)

    def component(self, degree: int) -> dict:
        return {m: c for m, c in self.coeffs.items() if len(m) == degree}

    def min_degree(self) -> int | None:
        """Least degree of a nonconstant term, or None if there is none."""
        degs = [len(m) for m in self.coeffs if m]
        return min(degs) if degs else None

    def __str__(self):
        return format_terms(self.coeffs)

    def __repr__(self):
        return f"NCSeries(D={self.D}, {self})"


def format_terms(coeffs: dict) -> str:
    """Degree-sorted text such as ``1 + X0 - X0*X1 + 2*X1*X0``."""
    if not coeffs:
        return "0"
    parts = []
    for m in sorted(coeffs, key=lambda m: (len(m), m)):
        c = coeffs[m]
        mono = "*".join(f"X{i}" for i in m)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _times_letter(s: dict, letter: int, D: int) -> dict:
    i = abs(letter) - 1
    out = dict(s)
    if letter > 0:
        for m, c in s.items():
            if len(m) < D:
                key = m + (i,)
                out[key] = out.get(key, 0) + c
    else:
        # multiply by sum_k (-X_i)^k, k = 1..D
        for m, c in s.items():
            sign = -1
            key = m
            while len(key) < D:
                key = key + (i,)
                out[key] = out.get(key, 0) + sign * c
                sign = -sign
    return {m: c for m, c in out.items() if c}


def magnus_embed(w: Word, D: int = DEFAULT_DEGREE) -> NCSeries:
    if D < 1:
        raise ValueError("degree cap must be >= 1")
    s = {(): 1}
    for a in w.letters:
        s = _times_letter(s, a, D)
    return NCSeries(D, s)


def weight(w: Word, D: int = DEFAULT_DEGREE) -> int | None:
    """Lower-central depth of ``w`` if it is at most ``D``, else None (above cap)."""
    if w.is_identity():
        raise IdentityInput("the identity has no weight")
    return magnus_embed(w, D).min_degree()


def lcs_image(w: Word, D: int = DEFAULT_DEGREE) -> dict:
    """Nonzero homogeneous component of least positive degree."""
    i = weight(w, D)
    if i is None:
        raise AboveCap(f"weight of {w} exceeds {D}")
    return magnus_embed(w, D).component(i)


@dataclass
class Refutation:
    """``f`` cannot lie in the normal closure of ``[g, h]``.

    ``g0`` is the common primitive root with ``f = g0^a`` and ``g = g0^b``;
    ``g0`` has weight ``i``, so ``f`` has weight exactly ``i`` while the
    normal closure of ``[g, h]`` sits in the next term of the series.
    """

    g0: Word
    a: int
    b: int
    i: int
    weight_f: int
    weight_commutator: int | None  # None: above the degree cap (still >= i + 1)


@dataclass
class Inconclusive:
    reason: str
    D: int


def _root_exponent(w: Word, root: Word) -> int | None:
    if w.is_identity():
        return 0
    u, k = primitive_root(w)
    if u is root:
        return k
    if u is root.inverse():
        return -k
    return None


def refute_trinomial_config(f: Word, g: Word, h: Word, D: int = DEFAULT_DEGREE) -> Refutation | Inconclusive:
    """Show a configuration ``f in ncl([g,h])``, ``fg = gf``, ``f != 1`` is impossible."""
    if f.is_identity():
        raise PreconditionFailed("f must be nontrivial")
    if f * g is not g * f:
        raise PreconditionFailed("f and g do not commute")
    comm = commutator(g, h)
    if comm.is_identity():
        raise PreconditionFailed("[g, h] = 1")
    g0, b = primitive_root(g)
    a = _root_exponent(f, g0)
    if a is None:
        raise PreconditionFailed("f and g commute but share no primitive root")
    i = weight(g0, D)
    if i is None or D < i + 1:
        shown = f"> {D}" if i is None else str(i)
        return Inconclusive(f"degree cap {D} cannot separate weight {shown} from the next one", D)
    wf = weight(f, D)
    wc = weight(comm, D)
    if wf != i or (wc is not None and wc <= i):
        raise PreconditionFailed(f"unexpected weights: f {wf}, [g,h] {wc}, g0 {i}")
    return Refutation(g0, a, b, i, wf, wc)
