"""Explicit witnesses that an element ``r`` generates the unit ideal of kG.

A certificate is a list of sandwiches ``(c_j, u_j, v_j)`` with
``sum_j c_j * u_j * r * v_j = 1``. Every constructor here checks its output
by direct expansion before returning it, so a certificate in hand is always
a proof.

Certificate file format (line oriented)::

    # resistkit-certificate v1
    field: GF(5)
    group: Z/2
    r: g - 2
    sandwich: 3 | g | 1
    sandwich: 1 | 1 | 1

Optional ``assign: name = element`` lines record the generator assignment a
search used; they are informational and not needed for verification.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .algebra import AlgebraElem, parse_algebra
from .binomial import ConjRelation, rearrange_relation
from .errors import (
    BadParameters,
    BudgetExceeded,
    Commuting,
    InvalidCertificate,
    NotCommuting,
    NotLastTerm,
    OrderViolation,
    ParseError,
    TrivialF,
)
from .groups import GroupCtx, eval_word, parse_group
from .linalg import ColumnEliminator
from .scalars import QQ, FieldSpec, Scalar, parse_field
from .words import Alphabet, ball_enumerate

__all__ = [
    "IdealCertificate",
    "CertificateCheck",
    "NotFound",
    "verify_certificate",
    "binomial_certificate",
    "trinomial_certificate",
    "solvable_witness",
    "search_certificate",
    "format_certificate",
    "parse_certificate",
]

CERT_HEADER = "# resistkit-certificate v1"


@dataclass
class IdealCertificate:
    r: AlgebraElem
    sandwiches: list[tuple[Scalar, Any, Any]]
    assignment: dict = field(default_factory=dict)

    @property
    def ctx(self) -> GroupCtx:
        return self.r.ctx

    @property
    def spec(self) -> FieldSpec:
        return self.r.spec

    def __len__(self):
        return len(self.sandwiches)


@dataclass
class CertificateCheck:
    verified: bool
    residual: AlgebraElem

    def __bool__(self):
        return self.verified


@dataclass
class NotFound:
    """No certificate among the pairs tried. Evidence only, never a proof."""

    radius: int
    pairs: int
    columns: int
    rank: int

    def __str__(self):
        return f"NotFound({self.radius})"


def expand(cert: IdealCertificate) -> AlgebraElem:
    r = cert.r
    out = AlgebraElem.zero(r.ctx, r.spec)
    for c, u, v in cert.sandwiches:
        out = out + r.sandwich(u, v, c)
    return out


def verify_certificate(cert: IdealCertificate) -> CertificateCheck:
    """Expand ``sum c u r v`` exactly; the residual is that sum minus 1."""
    r = cert.r
    residual = expand(cert) - AlgebraElem.one(r.ctx, r.spec)
    return CertificateCheck(residual.is_zero(), residual)


def _checked(cert: IdealCertificate) -> IdealCertificate:
    check = verify_certificate(cert)
    if not check:
        raise InvalidCertificate(f"certificate does not expand to 1; residual {check.residual}")
    return cert


# ---------------------------------------------------------------------------
# binomials


def binomial_certificate(rel: ConjRelation, c: Scalar) -> IdealCertificate:
    """Certificate for ``g - c`` from a relation with exponent sum ``d != 0``.

    Writing ``a_k = h_k^-1 g h_k`` and ``P_k = a_1 ... a_k``, the identity
    ``P_M - c^M = sum_k c^(M-k) P_(k-1) h_k^-1 (g - c) h_k`` applied to both
    sides of the relation gives ``c^M' - c^M`` as a combination of
    sandwiches; it is a nonzero scalar exactly when ``c^d != 1``.
    """
    if rel.signed is not None:
        rel = rearrange_relation(rel)
    ctx, g = rel.ctx, rel.g
    spec = c.spec
    d = rel.exponent_sum
    if d == 0:
        raise BadParameters("relation has exponent sum 0")
    if c.is_zero():
        raise BadParameters("c = 0 makes g - c a monomial")
    if g == ctx.identity():
        raise BadParameters("g = 1 makes g - c a monomial")
    M, M2 = len(rel.lefts), len(rel.rights)
    gap = spec.sub(spec.power(c.value, M2), spec.power(c.value, M))
    if spec.is_zero(gap):
        raise OrderViolation(f"c^{d} = 1 for c = {c}")
    scale = spec.inv(gap)
    r = AlgebraElem(ctx, spec, {g: spec.one(), ctx.identity(): spec.neg(c.value)})

    def telescope(hs, sign):
        out = []
        prefix = ctx.identity()
        n = len(hs)
        for k, h in enumerate(hs, start=1):
            coeff = spec.mul(spec.from_int(sign), spec.mul(spec.power(c.value, n - k), scale))
            out.append((Scalar(spec, coeff), ctx.mul(prefix, ctx.inv(h)), h))
            prefix = ctx.mul(prefix, ctx.conj(g, h))
        return out

    # (L - c^M) - (R - c^M') = c^M' - c^M because L = R.
    sandwiches = telescope(rel.lefts, 1) + telescope(rel.rights, -1)
    return _checked(IdealCertificate(r, _merge(ctx, spec, sandwiches)))


def _merge(ctx, spec, sandwiches):
    """Combine sandwiches with equal ``(u, v)``; drop zero coefficients."""
    acc: dict = {}
    for c, u, v in sandwiches:
        key = (u, v)
        acc[key] = spec.add(acc.get(key, spec.zero()), c.value)
    return [(Scalar(spec, val), u, v) for (u, v), val in acc.items() if not spec.is_zero(val)]


# ---------------------------------------------------------------------------
# trinomials


def _ncl_element(ctx: GroupCtx, k, witness):
    return ctx.prod(ctx.conj(ctx.power(k, s), w) for w, s in witness)


def trinomial_certificate(
    ctx: GroupCtx,
    g,
    h,
    ncl_witness: Sequence[tuple[Any, int]] | None = None,
    spec: FieldSpec = QQ,
) -> IdealCertificate:
    """Certificate for ``r = 1 + h - f`` where ``f = prod w_i^-1 [g,h]^(s_i) w_i``.

    Needs ``f != 1`` and ``f g = g f``. Then ``g r - r g = g h - h g``, so
    ``[g,h] - 1 = g^-1 h^-1 (g r - r g)``; ``f - 1`` follows from
    ``ab - 1 = a(b - 1) + (a - 1)`` and ``w^-1 a w - 1 = w^-1 (a - 1) w``, and
    finally ``1 = h^-1 (r + (f - 1))``.
    """
    if ncl_witness is None:
        ncl_witness = [(ctx.identity(), 1)]
    ncl_witness = [(w, int(s)) for w, s in ncl_witness]
    if any(s not in (1, -1) for _, s in ncl_witness):
        raise BadParameters("witness signs must be +1 or -1")
    k = ctx.commutator(g, h)
    f = _ncl_element(ctx, k, ncl_witness)
    if f == ctx.identity():
        raise TrivialF("f = 1")
    if not ctx.commutes(f, g):
        raise NotCommuting("f does not commute with g")
    one = spec.one()
    mone = spec.neg(one)
    ginv, hinv = ctx.inv(g), ctx.inv(h)

    # sandwiches (coeff raw, u, v) whose sum is k - 1
    base_k = [(one, ctx.mul(ctx.mul(ginv, hinv), g), ctx.identity()), (mone, ctx.mul(ginv, hinv), g)]
    kinv = ctx.inv(k)
    base_kinv = [(spec.neg(c), ctx.mul(kinv, u), v) for c, u, v in base_k]

    f_terms: list = []
    prefix = ctx.identity()
    for w, s in ncl_witness:
        winv = ctx.inv(w)
        part = [(c, ctx.mul(winv, u), ctx.mul(v, w)) for c, u, v in (base_k if s == 1 else base_kinv)]
        # prefix * part - 1 = prefix (part - 1) + (prefix - 1)
        f_terms = f_terms + [(c, ctx.mul(prefix, u), v) for c, u, v in part]
        prefix = ctx.mul(prefix, ctx.conj(ctx.power(k, s), w))

    r = AlgebraElem.one(ctx, spec) + AlgebraElem.monomial(ctx, spec, h) - AlgebraElem.monomial(ctx, spec, f)
    sandwiches = [(Scalar(spec, one), hinv, ctx.identity())]
    sandwiches += [(Scalar(spec, c), ctx.mul(hinv, u), v) for c, u, v in f_terms]
    cert = IdealCertificate(r, sandwiches)
    if len(ncl_witness) > 1 or ncl_witness[0] != (ctx.identity(), 1):
        cert = IdealCertificate(r, _merge(ctx, spec, sandwiches))
    return _checked(cert)


def solvable_witness(h1, h2, ctx: GroupCtx):
    """``(g, h)`` with ``g`` commuting with ``h^-1 g h != g``, from non-commuting inputs.

    Either ``(h1, h2)`` already works, or ``([h1, h2], h1)`` is tried and
    checked; the latter need not work in an arbitrary group (NotLastTerm).
    """
    if ctx.commutes(h1, h2):
        raise Commuting("inputs commute")
    if ctx.commutes(h1, ctx.conj(h1, h2)):
        return h1, h2
    g, h = ctx.commutator(h1, h2), h1
    hgh = ctx.conj(g, h)
    if hgh != g and ctx.commutes(g, hgh):
        return g, h
    raise NotLastTerm("neither (h1, h2) nor ([h1, h2], h1) has the required commutation")


# ---------------------------------------------------------------------------
# bounded search


def _expand_pair(r: AlgebraElem, u, v) -> dict:
    return r.sandwich(u, v).terms


def search_certificate(
    r: AlgebraElem,
    assignment: Mapping | None = None,
    radius: int = 1,
    pair_cap: int = 1_000_000,
    alphabet: Alphabet | None = None,
    threads: int = 1,
) -> IdealCertificate | NotFound:
    """Search ``sum c u r v = 1`` over ``u, v`` images of the radius ball.

    Pairs are taken shell by shell (by ``|u| + |v|`` of their words) and the
    target is tried after each shell, so a success uses the smallest shell
    possible. Duplicate group elements and duplicate column expansions are
    dropped before elimination.
    """
    if len(r) < 2:
        raise BadParameters("search needs |supp(r)| >= 2")
    ctx, spec = r.ctx, r.spec
    alphabet = alphabet or ctx.alphabet
    images: dict = {}
    for w in ball_enumerate(alphabet, radius, cap=pair_cap):
        images.setdefault(eval_word(ctx, w, assignment), len(w))
    elems = list(images.items())
    npairs = len(elems) ** 2
    if npairs > pair_cap:
        raise BudgetExceeded(f"{npairs} pairs exceed cap {pair_cap}")

    rows: dict = {}
    target_row = rows.setdefault(ctx.identity(), 0)
    target = {target_row: spec.one()}
    elim = ColumnEliminator(spec)
    seen_cols: set = set()
    pair_of: list = []
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for shell in range(2 * radius + 1):
            pairs = [(u, v) for u, lu in elems for v, lv in elems if lu + lv == shell]
            if pool is not None:
                expansions = list(pool.map(lambda p: _expand_pair(r, *p), pairs))
            else:
                expansions = [_expand_pair(r, u, v) for u, v in pairs]
            for (u, v), terms in zip(pairs, expansions):
                key = frozenset(terms.items())
                if key in seen_cols:
                    continue
                seen_cols.add(key)
                vec = {}
                for g, c in terms.items():
                    row = rows.get(g)
                    if row is None:
                        row = rows[g] = len(rows)
                    vec[row] = c
                pair_of.append((u, v))
                elim.add(len(pair_of) - 1, vec)
            combo = elim.solve(target)
            if combo is not None:
                sandwiches = [
                    (Scalar(spec, combo[i]), *pair_of[i]) for i in sorted(combo)
                ]
                cert = IdealCertificate(r, sandwiches, dict(assignment or {}))
                return _checked(cert)
    finally:
        if pool is not None:
            pool.shutdown()
    return NotFound(radius, npairs, len(pair_of), elim.rank)


# ---------------------------------------------------------------------------
# file format


def format_certificate(cert: IdealCertificate) -> str:
    ctx, spec = cert.ctx, cert.spec
    lines = [CERT_HEADER, f"field: {spec.text()}", f"group: {ctx.text()}", f"r: {cert.r}"]
    for name, elem in cert.assignment.items():
        lines.append(f"assign: {name} = {ctx.format_elem(elem)}")
    for c, u, v in cert.sandwiches:
        lines.append(f"sandwich: {c} | {ctx.format_elem(u)} | {ctx.format_elem(v)}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> IdealCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CERT_HEADER:
        raise ParseError("missing certificate header", text, 0)
    fields: dict[str, str] = {}
    assigns: list[str] = []
    sandwiches: list[str] = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            continue
        key, sep, value = ln.partition(":")
        if not sep:
            raise ParseError(f"malformed line {ln!r}", text)
        key, value = key.strip(), value.strip()
        if key == "sandwich":
            sandwiches.append(value)
        elif key == "assign":
            assigns.append(value)
        elif key in ("field", "group", "r"):
            fields[key] = value
        else:
            raise ParseError(f"unknown key {key!r}", text)
    for key in ("field", "group", "r"):
        if key not in fields:
            raise ParseError(f"missing {key!r} line", text)
    spec = parse_field(fields["field"])
    ctx = parse_group(fields["group"])
    r = parse_algebra(fields["r"], ctx, spec)
    assignment = {}
    for a in assigns:
        name, _, elem = a.partition("=")
        assignment[name.strip()] = ctx.parse_elem(elem.strip())
    out = []
    for s in sandwiches:
        parts = [p.strip() for p in s.split("|")]
        if len(parts) != 3:
            raise ParseError(f"sandwich needs 3 fields: {s!r}", text)
        out.append((spec.parse(parts[0]), ctx.parse_elem(parts[1]), ctx.parse_elem(parts[2])))
    return IdealCertificate(r, out, assignment)
