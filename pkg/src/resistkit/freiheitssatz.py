"""Support-shape conditions for free-group algebra elements, and span scans.

For ``r`` in kF (F free), the three shape conditions are

* (a) the support elements do not all begin with one letter,
* (b) they do not all end with one letter,
* (c) if 1 is in the support, the other support elements do not all begin
  with some letter ``s`` and end with ``s^-1``.

An element passing all three is *strongly reduced*. The scans below look at
the finite-dimensional piece of the ideal ``(r)`` spanned by ``u r v`` with
``u, v`` in a ball, and ask whether some nonzero element of it avoids a
generator, or has unusually small support. They are bounded experiments:
``NoViolation(R)`` says nothing beyond radius ``R``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .algebra import AlgebraElem
from .errors import BudgetExceeded, PreconditionFailed
from .groups import FreeGroup
from .linalg import ExactMatrix, nullspace_raw
from .scalars import Scalar
from .words import Word, ball_enumerate, involved_generators

__all__ = [
    "StrongCheck",
    "ReductionReport",
    "ABSearch",
    "SpanMatrix",
    "NoViolation",
    "CounterexampleCandidate",
    "SpanElement",
    "strongly_reduced_check",
    "c_reduction",
    "find_ab_form",
    "ideal_span",
    "freiheit_scan",
    "small_support_find",
]


def _require_free(r: AlgebraElem):
    if not isinstance(r.ctx, FreeGroup):
        raise PreconditionFailed("element must live in a free-group algebra")


@dataclass
class StrongCheck:
    passed: bool
    condition: str | None = None  # "a", "b" or "c"
    symbol: str | None = None

    def __bool__(self):
        return self.passed

    def __str__(self):
        return "pass" if self.passed else f"fail({self.condition}, {self.symbol})"


def _common(letters: list) -> int | None:
    if not letters or any(a is None for a in letters):
        return None
    first = letters[0]
    return first if all(a == first for a in letters) else None


def _shape(supp: list[Word]) -> StrongCheck:
    if not supp:
        return StrongCheck(True)
    alphabet = supp[0].alphabet
    s = _common([w.first for w in supp])
    if s is not None:
        return StrongCheck(False, "a", alphabet.letter_text(s))
    s = _common([w.last for w in supp])
    if s is not None:
        return StrongCheck(False, "b", alphabet.letter_text(s))
    if any(w.is_identity() for w in supp):
        rest = [w for w in supp if not w.is_identity()]
        s = _common([w.first for w in rest])
        if s is not None and all(w.last == -s for w in rest):
            return StrongCheck(False, "c", alphabet.letter_text(s))
    return StrongCheck(True)


def strongly_reduced_check(r: AlgebraElem) -> StrongCheck:
    """Check (a), (b), (c) in that order; report the first violation and its letter."""
    _require_free(r)
    return _shape(r.support())


def _flags(r: AlgebraElem) -> dict[str, bool]:
    supp = r.support()
    return {
        "a": _common([w.first for w in supp]) is None,
        "b": _common([w.last for w in supp]) is None,
        "c": _shape(supp).condition != "c",
        "one_in_support": any(w.is_identity() for w in supp),
    }


@dataclass
class ReductionReport:
    r_input: AlgebraElem
    u: Word
    r: AlgebraElem
    checks: dict[str, bool]
    same_involvement: bool


def c_reduction(r_prime: AlgebraElem) -> ReductionReport:
    """Divide by a shortest support element to put 1 into the support.

    Needs (a) and (b) with 1 outside the support. Among the shortest support
    elements the first in length-then-letter order is used.
    """
    _require_free(r_prime)
    flags = _flags(r_prime)
    if flags["one_in_support"]:
        raise PreconditionFailed("1 already lies in the support")
    if not (flags["a"] and flags["b"]):
        raise PreconditionFailed("input must satisfy (a) and (b)")
    u = r_prime.support()[0]
    r = AlgebraElem.monomial(r_prime.ctx, r_prime.spec, u.inverse()) * r_prime
    same = involved_generators(r.support()) == involved_generators(r_prime.support())
    return ReductionReport(r_prime, u, r, _flags(r), same)


@dataclass
class ABSearch:
    radius: int
    successes: list[tuple[Word, Word]]

    @property
    def found(self) -> bool:
        return bool(self.successes)

    @property
    def first(self) -> tuple[Word, Word] | None:
        return self.successes[0] if self.successes else None


def find_ab_form(r: AlgebraElem, radius: int, cap: int = 1_000_000) -> ABSearch:
    """All ``(u, v)`` in the ball with ``u r v`` satisfying (a), (b) and 1 outside the support."""
    _require_free(r)
    if r.ctx.identity() not in r.terms:
        raise PreconditionFailed("1 must lie in the support")
    if not strongly_reduced_check(r):
        raise PreconditionFailed("element is not strongly reduced")
    ball = ball_enumerate(r.ctx.alphabet, radius, cap=cap)
    if len(ball) ** 2 > cap:
        raise BudgetExceeded(f"{len(ball) ** 2} pairs exceed cap {cap}")
    out = []
    for u in ball:
        for v in ball:
            supp = [u * w * v for w in r.terms]
            if any(w.is_identity() for w in supp):
                continue
            if _common([w.first for w in supp]) is None and _common([w.last for w in supp]) is None:
                out.append((u, v))
    return ABSearch(radius, out)


# ---------------------------------------------------------------------------
# spans


@dataclass
class SpanMatrix:
    r: AlgebraElem
    matrix: ExactMatrix
    rows: list  # group element of each row, in canonical order
    pairs: list  # (u, v) of each column

    def element(self, coords: dict) -> AlgebraElem:
        """Algebra element from raw coordinates keyed by row index."""
        return AlgebraElem(self.r.ctx, self.r.spec, {self.rows[i]: c for i, c in coords.items()})

    def combination(self, x) -> tuple[AlgebraElem, list]:
        """``A x`` as an element, plus the sandwiches ``(c, u, v)`` producing it."""
        spec = self.r.spec
        coords = dict(enumerate(self.matrix.matvec(x)))
        sandwiches = [
            (Scalar(spec, c), *self.pairs[j]) for j, c in enumerate(x) if not spec.is_zero(c)
        ]
        return self.element(coords), sandwiches


def ideal_span(r: AlgebraElem, radius: int, cap: int = 1_000_000, threads: int = 1) -> SpanMatrix:
    """Columns ``u r v`` for ``u, v`` in the ball, duplicates removed."""
    _require_free(r)
    ball = ball_enumerate(r.ctx.alphabet, radius, cap=cap)
    pairs = [(u, v) for u in ball for v in ball]
    if len(pairs) > cap:
        raise BudgetExceeded(f"{len(pairs)} pairs exceed cap {cap}")
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            cols = list(pool.map(lambda p: r.sandwich(p[0], p[1]).terms, pairs))
    else:
        cols = [r.sandwich(u, v).terms for u, v in pairs]
    seen: set = set()
    kept_pairs, kept_cols = [], []
    for p, col in zip(pairs, cols):
        key = frozenset(col.items())
        if key in seen:
            continue
        seen.add(key)
        kept_pairs.append(p)
        kept_cols.append(col)
    elems = {g for col in kept_cols for g in col}
    rows = sorted(elems, key=r.ctx.sort_key)
    index = {g: i for i, g in enumerate(rows)}
    columns = [{index[g]: c for g, c in col.items()} for col in kept_cols]
    return SpanMatrix(r, ExactMatrix(r.spec, len(rows), len(columns), columns), rows, kept_pairs)


def _expand(r: AlgebraElem, sandwiches) -> AlgebraElem:
    out = AlgebraElem.zero(r.ctx, r.spec)
    for c, u, v in sandwiches:
        out = out + r.sandwich(u, v, c)
    return out


@dataclass
class NoViolation:
    radius: int
    rows: int
    cols: int
    kernel_dim: int

    def __str__(self):
        return f"NoViolation({self.radius})"


@dataclass
class CounterexampleCandidate:
    """Nonzero element of ``(r)`` avoiding the killed generator; needs human review."""

    element: AlgebraElem
    sandwiches: list
    verified: bool
    radius: int


def freiheit_scan(r: AlgebraElem, x0: str, radius: int, cap: int = 1_000_000, threads: int = 1):
    """Look for a nonzero span element in which ``x0`` does not occur.

    Coordinates on rows involving ``x0`` are forced to vanish (a nullspace
    computation); if the rest of the image is nonzero on some kernel vector,
    that combination is a candidate, re-checked by direct expansion.
    """
    _require_free(r)
    if x0 not in involved_generators(r.support()):
        raise PreconditionFailed(f"{x0} is not involved in r")
    if not strongly_reduced_check(r):
        raise PreconditionFailed("element is not strongly reduced")
    idx = r.ctx.alphabet.index(x0)
    span = ideal_span(r, radius, cap=cap, threads=threads)
    A = span.matrix
    involving = [i for i, g in enumerate(span.rows) if g.involves(idx)]
    kernel = nullspace_raw(A.select_rows(involving))
    spec = r.spec
    for x in kernel:
        image = A.matvec(x)
        if any(not spec.is_zero(v) for v in image):
            element, sandwiches = span.combination(x)
            ok = (
                not element.is_zero()
                and not any(g.involves(idx) for g in element.terms)
                and _expand(r, sandwiches) == element
            )
            return CounterexampleCandidate(element, sandwiches, ok, radius)
    return NoViolation(radius, A.rows, A.cols, len(kernel))


@dataclass
class SpanElement:
    element: AlgebraElem
    sandwiches: list = field(default_factory=list)


def _normalized(spec, coords: dict) -> dict:
    lead = coords[min(coords)]
    inv = spec.inv(lead)
    return {i: spec.mul(v, inv) for i, v in coords.items()}


def small_support_find(
    r: AlgebraElem,
    radius: int,
    size: int,
    window: int = 64,
    cap: int = 1_000_000,
    threads: int = 1,
) -> list[SpanElement]:
    """Span elements whose support is a set of at most ``size`` window rows.

    The window is the first ``window`` rows in canonical order. Elements of
    the span supported inside the window form a subspace ``V``; for every
    subset ``S`` of rows actually met by ``V`` (smallest subsets first) the
    part of ``V`` supported in ``S`` is computed, and reported when it is a
    single line whose elements have support exactly ``S``. Results are scaled
    so the first coefficient is 1, and each comes with the sandwiches that
    produce it.
    """
    if size < 1:
        raise PreconditionFailed("size cap must be >= 1")
    _require_free(r)
    spec = r.spec
    span = ideal_span(r, radius, cap=cap, threads=threads)
    A = span.matrix
    win = list(range(min(window, A.rows)))
    outside = list(range(len(win), A.rows))
    kernel = nullspace_raw(A.select_rows(outside))
    # V: images of the kernel, restricted to window rows
    V = []
    for x in kernel:
        img = A.matvec(x)
        coords = {i: img[i] for i in win if not spec.is_zero(img[i])}
        if coords:
            V.append((coords, x))
    if not V:
        return []
    met = sorted({i for coords, _ in V for i in coords})
    total = sum(math.comb(len(met), k) for k in range(1, size + 1))
    if total > cap:
        raise BudgetExceeded(f"{total} row subsets exceed cap {cap}")
    basis = ExactMatrix(spec, len(met), len(V), [
        {met.index(i): v for i, v in coords.items()} for coords, _ in V
    ])
    found: dict = {}
    for k in range(1, size + 1):
        for S in itertools.combinations(range(len(met)), k):
            rest = [i for i in range(len(met)) if i not in S]
            sub = nullspace_raw(basis.select_rows(rest))
            if len(sub) != 1:
                continue
            lam = sub[0]
            vec = basis.matvec(lam)
            coords = {met[i]: vec[i] for i in S if not spec.is_zero(vec[i])}
            if len(coords) != k:
                continue
            key = frozenset(_normalized(spec, coords).items())
            if key in found:
                continue
            # column combination producing this element
            x = [spec.zero()] * A.cols
            for l, (_, kx) in zip(lam, V):
                if spec.is_zero(l):
                    continue
                for j, v in enumerate(kx):
                    x[j] = spec.add(x[j], spec.mul(l, v))
            element, sandwiches = span.combination(x)
            scale = spec.inv(element.terms[element.support()[0]])
            element = element.scale(scale)
            sandwiches = [(c * Scalar(spec, scale), u, v) for c, u, v in sandwiches]
            if _expand(r, sandwiches) != element:
                raise AssertionError("span element does not re-expand")
            found[key] = SpanElement(element, sandwiches)
    return list(found.values())

