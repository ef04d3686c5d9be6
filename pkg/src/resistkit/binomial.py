"""Relations among conjugates of a group element ``g``.

A relation is either a signed list ``prod (h_i^-1 g h_i)^{e_i} = 1`` or a
two-sided equation ``prod_i h_i^-1 g h_i = prod_j h'_j^-1 g h'_j``. The
exponent sum (``sum e_i``, resp. ``M - M'``) is what matters: whenever it is a
nonzero ``d`` and ``c^d != 1``, the binomial ``g - c`` generates the whole
group algebra (see :func:`resistkit.certificates.binomial_certificate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import BadParameters, BudgetExceeded, RelationFalse
from .groups import Affine, FiniteCyclic, GroupCtx, eval_word
from .scalars import QQ, golden_field
from .words import Alphabet, Word, ball_enumerate

__all__ = [
    "ConjRelation",
    "BinomialVerdict",
    "UnverifiedOrderClaim",
    "Witness",
    "check_relation",
    "rearrange_relation",
    "relation_search",
    "cor23_witness",
]


def _conj(ctx: GroupCtx, g, h):
    return ctx.conj(g, h)


@dataclass(frozen=True)
class ConjRelation:
    """A verified relation among conjugates of ``g``.

    Exactly one of ``signed`` (pairs ``(h, +1|-1)``) or ``lefts``/``rights``
    is used. Construction evaluates the relation and raises
    :class:`RelationFalse` if it does not hold.
    """

    ctx: GroupCtx
    g: Any
    signed: tuple | None = None
    lefts: tuple = ()
    rights: tuple = ()
    exponent_sum: int = field(init=False, default=0)

    def __post_init__(self):
        if self.signed is not None:
            signed = tuple((h, int(e)) for h, e in self.signed)
            if any(e not in (1, -1) for _, e in signed):
                raise BadParameters("signs must be +1 or -1")
            object.__setattr__(self, "signed", signed)
        object.__setattr__(self, "lefts", tuple(self.lefts))
        object.__setattr__(self, "rights", tuple(self.rights))
        object.__setattr__(self, "exponent_sum", _evaluate(self))

    @property
    def two_sided(self) -> bool:
        return self.signed is None

    def sides(self):
        """Both products as group elements (for a signed relation: value and 1)."""
        ctx = self.ctx
        if self.signed is not None:
            val = ctx.prod(ctx.power(_conj(ctx, self.g, h), e) for h, e in self.signed)
            return val, ctx.identity()
        left = ctx.prod(_conj(ctx, self.g, h) for h in self.lefts)
        right = ctx.prod(_conj(ctx, self.g, h) for h in self.rights)
        return left, right

    def describe(self) -> str:
        fmt = self.ctx.format_elem
        if self.signed is not None:
            body = " ".join(f"[{fmt(h)}]^{e:+d}" for h, e in self.signed)
            return f"signed {body} = 1"
        lhs = " ".join(f"[{fmt(h)}]" for h in self.lefts) or "1"
        rhs = " ".join(f"[{fmt(h)}]" for h in self.rights) or "1"
        return f"{lhs} = {rhs}"


def _evaluate(rel: ConjRelation) -> int:
    left, right = rel.sides()
    if left != right:
        raise RelationFalse(
            f"relation fails: {rel.ctx.format_elem(left)} != {rel.ctx.format_elem(right)}"
        )
    if rel.signed is not None:
        return sum(e for _, e in rel.signed)
    return len(rel.lefts) - len(rel.rights)


def check_relation(rel: ConjRelation) -> tuple[bool, int]:
    """Re-evaluate ``rel``; returns ``(True, exponent_sum)`` or raises RelationFalse."""
    return True, _evaluate(rel)


def rearrange_relation(rel: ConjRelation) -> ConjRelation:
    """Turn a signed relation into a two-sided one with the same exponent sum.

    Each adjacent pair ``(h_i, -1), (h_{i+1}, +1)`` becomes
    ``(h_{i+1}, +1), (h_i * a, -1)`` with ``a = h_{i+1}^-1 g h_{i+1}``, which
    has the same product. Repeating until every +1 precedes every -1 gives
    ``P * Q^-1 = 1``, i.e. ``P = Q``.
    """
    if rel.signed is None:
        return rel
    ctx, g = rel.ctx, rel.g
    terms = list(rel.signed)
    changed = True
    while changed:
        changed = False
        for i in range(len(terms) - 1):
            (hi, ei), (hj, ej) = terms[i], terms[i + 1]
            if ei == -1 and ej == 1:
                a = _conj(ctx, g, hj)
                terms[i] = (hj, 1)
                terms[i + 1] = (ctx.mul(hi, a), -1)
                changed = True
    lefts = [h for h, e in terms if e == 1]
    rights = [h for h, e in reversed(terms) if e == -1]
    return ConjRelation(ctx, g, lefts=lefts, rights=rights)


# ---------------------------------------------------------------------------


@dataclass
class BinomialVerdict:
    g: Any
    divisor_found: int | None
    relations: list[ConjRelation]
    radius: int
    max_terms: int
    conjugates: int


def relation_search(
    ctx: GroupCtx,
    g,
    radius: int,
    max_terms: int,
    assignment=None,
    alphabet: Alphabet | None = None,
    cap: int = 200_000,
) -> BinomialVerdict:
    """Look for two-sided relations with at most ``max_terms`` factors in total.

    Conjugators are the images of the radius-``radius`` ball under the
    generator assignment. Every product of ``a`` conjugates is recorded with
    one witness; a value reached by products of lengths ``a > b`` yields a
    relation of exponent sum ``a - b``. The result is a divisor certificate
    (the gcd of the sums found), or ``None`` when nothing was found.
    """
    if radius < 1 or max_terms < 2:
        raise BadParameters("need radius >= 1 and max_terms >= 2")
    alphabet = alphabet or ctx.alphabet
    conj_by: dict = {}
    for w in ball_enumerate(alphabet, radius, cap=cap):
        h = eval_word(ctx, w, assignment)
        conj_by.setdefault(_conj(ctx, g, h), h)
    conjugates = sorted(conj_by.items(), key=lambda kv: ctx.sort_key(kv[0]))

    ident = ctx.identity()
    levels: list[dict] = [{ident: ()}]
    total = 1
    for a in range(1, max_terms + 1):
        nxt: dict = {}
        for val in sorted(levels[-1], key=ctx.sort_key):
            wit = levels[-1][val]
            for c, h in conjugates:
                p = ctx.mul(val, c)
                if p not in nxt:
                    nxt[p] = wit + (h,)
                    total += 1
                    if total > cap:
                        raise BudgetExceeded(f"more than {cap} conjugate products")
        levels.append(nxt)

    relations: list[ConjRelation] = []
    seen_sums: set[int] = set()
    for size in range(1, max_terms + 1):
        for a in range(size, (size - 1) // 2, -1):
            b = size - a
            if a <= b or a - b in seen_sums:
                continue
            common = [v for v in levels[a] if v in levels[b]]
            if not common:
                continue
            v = min(common, key=ctx.sort_key)
            relations.append(ConjRelation(ctx, g, lefts=levels[a][v], rights=levels[b][v]))
            seen_sums.add(a - b)
    divisor = None
    if relations:
        divisor = 0
        for rel in relations:
            divisor = math.gcd(divisor, rel.exponent_sum)
    return BinomialVerdict(g, divisor, relations, radius, max_terms, len(conjugates))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnverifiedOrderClaim:
    """The image of ``g`` in ``G/[g,G]`` has order dividing ``n``, by argument only.

    Used when no backend realizes the group, so the relation cannot be
    evaluated by machine.
    """

    case: str
    g: Any
    n: int
    argument: str


@dataclass
class Witness:
    case: str
    ctx: GroupCtx | None
    g: Any
    relation: ConjRelation | UnverifiedOrderClaim
    n: int

    @property
    def verified(self) -> bool:
        return isinstance(self.relation, ConjRelation)


def _power_chain_relation(ctx: GroupCtx, h, g, n: int) -> ConjRelation:
    # (h g)^n = h^n * prod_{i=n-1..0} h^-i g h^i, so h^n = (h g)^n is a relation
    # of n conjugates of g equal to 1.
    lefts = [ctx.power(h, i) for i in range(n - 1, -1, -1)]
    return ConjRelation(ctx, g, lefts=lefts, rights=())


def cor23_witness(case: str, **params) -> Witness:
    """Concrete data showing ``g - c`` generates the unit ideal for suitable ``c``.

    Cases and parameters:

    * ``a``: ``n`` and optionally ``ctx``, ``g`` (default: generator of Z/n).
    * ``b``: ``alpha`` (a nonzero rational other than 1); affine maps over Q.
    * ``golden``: affine maps over Q(t), t^2 = t + 1.
    * ``c``: ``n`` and optionally ``ctx``, ``h``, ``h2`` with ``h^n = h2^n``.
    * ``d``: ``n`` and optionally ``ctx``, ``h1``, ``h2``.
    * ``artin_tits``: ``d`` and ``form`` (1 or 2).
    """
    if case == "a":
        n = int(params.get("n", 0))
        if n <= 1:
            raise BadParameters("case a needs n > 1")
        ctx = params.get("ctx") or FiniteCyclic(n)
        g = params.get("g", ctx.generators()[0] if "ctx" not in params else None)
        if g is None:
            raise BadParameters("case a with a custom ctx needs g")
        if g == ctx.identity() or ctx.power(g, n) != ctx.identity():
            raise BadParameters("case a needs g != 1 with g^n = 1")
        rel = ConjRelation(ctx, g, lefts=[ctx.identity()] * n, rights=())
        return Witness("a", ctx, g, rel, n)

    if case == "b":
        alpha = Fraction(params.get("alpha", 2))
        if alpha in (0, 1):
            raise BadParameters("alpha must be a rational other than 0 and 1")
        m, m2 = alpha.numerator, alpha.denominator
        ctx = Affine(QQ, alpha)
        g, h = ctx.generators()
        one = ctx.identity()
        # h^-1 g h is translation by m'/m, so (h^-1 g h)^|m| = g^(sign(m) m').
        if m > 0:
            rel = ConjRelation(ctx, g, lefts=[h] * m, rights=[one] * m2)
        else:
            rel = ConjRelation(ctx, g, lefts=[h] * (-m) + [one] * m2, rights=())
        return Witness("b", ctx, g, rel, abs(m - m2))

    if case == "golden":
        K = golden_field()
        ctx = Affine(K)
        g, h = ctx.generators()
        hinv = ctx.inv(h)
        rel = ConjRelation(ctx, g, lefts=[ctx.power(h, -2)], rights=[ctx.identity(), hinv])
        return Witness("golden", ctx, g, rel, 1)

    if case in ("c", "d"):
        n = int(params.get("n", 0))
        if n <= 1:
            raise BadParameters(f"case {case} needs n > 1")
        ctx = params.get("ctx")
        if ctx is None:
            arg = (
                "h commutes with the central image of g = h^-1 h', hence with h', "
                "so the image of g^n is h^-n h'^n = 1"
                if case == "c"
                else "with h = h2 and h' = h1^-1 h2 h1 one has h^n = h'^n; apply case c"
            )
            return Witness(case, None, None, UnverifiedOrderClaim(case, None, n, arg), n)
        if case == "c":
            h, h2 = params["h"], params["h2"]
            if h == h2:
                raise BadParameters("case c needs h != h'")
            if ctx.power(h, n) != ctx.power(h2, n):
                raise BadParameters("case c needs h^n = h'^n")
        else:
            h1, hh = params["h1"], params["h2"]
            if ctx.commutes(h1, hh):
                raise BadParameters("case d needs non-commuting h1, h2")
            if not ctx.commutes(h1, ctx.power(hh, n)):
                raise BadParameters("case d needs h1 to commute with h2^n")
            h, h2 = hh, ctx.conj(hh, h1)
        g = ctx.mul(ctx.inv(h), h2)
        return Witness(case, ctx, g, _power_chain_relation(ctx, h, g, n), n)

    if case == "artin_tits":
        d = int(params.get("d", 2))
        form = int(params.get("form", 1))
        A = Alphabet(("xi", "xj"))
        xi, xj = A.gens()
        if form == 1:
            if d <= 1:
                raise BadParameters("the first relation form needs d > 1")
            g = (xi * xj).inverse() * (xj * xi)
            arg = f"(xi xj)^{d} = (xj xi)^{d}: case c with h = xi xj, h' = xj xi"
            return Witness("artin_tits", None, g, UnverifiedOrderClaim("artin_tits", g, d, arg), d)
        if form == 2:
            if d < 1:
                raise BadParameters("d must be >= 1")
            g = xi * xj.inverse()
            arg = (
                f"(xi xj)^{d} xi = (xj xi)^{d} xj: modulo [g,G] xj commutes with xi, "
                "so the relation reduces to xi = xj and the image of g is 1"
            )
            return Witness("artin_tits", None, g, UnverifiedOrderClaim("artin_tits", g, 1, arg), 1)
        raise BadParameters("form must be 1 or 2")

    raise BadParameters(f"unknown case {case!r}")
