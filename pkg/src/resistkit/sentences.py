"""Universal sentences saying "no m-term element times m' sandwiches gives 1".

Fix ``m, m' >= 2``. An element ``r = c_1 g_1 + ... + c_m g_m`` and sandwiches
``sum_j c_(m+j) g_(m+j) r g_(m+m'+j)`` expand into the ``m*m'`` products
``g_(m+j) g_i g_(m+m'+j)`` (cell ``(i, j)``) with coefficients
``c_(m+j) c_i``. Each way of grouping equal products (a set partition of the
cells, with one block marked as the block equal to 1) gives a conjunction of
group and field (in)equalities describing a counterexample; the sentence is
its negation, universally quantified over ``g_1..g_n`` (``n = m + 2m'``) and
``c_1..c_n'`` (``n' = m + m'``).

Negating a conjunction of atoms gives one disjunction, and because group and
field atoms share no variables it splits as
``(forall g. P'(g)) or (forall c. P''(c))``. For a finite list of finite
fields the field half can be decided by exhaustion, leaving group-only
sentences.

Native text::

    (or (forall (g1 g2) (or (/= g1 g2) ...)) (forall (c1 c2) (or (= c1 0) ...)))

Prover text is TPTP ``fof`` with ``mul``/``inv``/``e`` for the group and
``plus``/``times``/``zero``/``one`` for the field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import BadParameters, CapExceeded, InfiniteFieldRejected
from .groups import GroupCtx, finite_elements
from .scalars import FieldSpec, PrimeField

__all__ = [
    "PartitionSpec",
    "GroupAtom",
    "FieldAtom",
    "And",
    "Or",
    "Not",
    "Sentence",
    "UniversalPair",
    "GroupSentence",
    "set_partitions",
    "enumerate_configs",
    "build_sentence",
    "split_disjunction",
    "field_filter",
    "prune",
    "emit",
    "GroupTable",
    "evaluate_sentence",
    "evaluate_pair",
    "group_part_holds",
    "field_part_holds",
    "small_groups",
    "compile_sentences",
    "DEFAULT_MAX_CELLS",
]

DEFAULT_MAX_CELLS = 9


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class GroupAtom:
    """``lhs = rhs`` (or ``!=``) for products of group variables; ``()`` is 1."""

    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    equal: bool = True

    def negate(self) -> "GroupAtom":
        return GroupAtom(self.lhs, self.rhs, not self.equal)


@dataclass(frozen=True)
class FieldAtom:
    """``lhs = rhs`` for sums of monomials in field variables.

    A monomial is a tuple of variable indices (``()`` is 1); an empty sum is 0.
    """

    lhs: tuple[tuple[int, ...], ...]
    rhs: tuple[tuple[int, ...], ...]
    equal: bool = True

    def negate(self) -> "FieldAtom":
        return FieldAtom(self.lhs, self.rhs, not self.equal)


Atom = Union[GroupAtom, FieldAtom]


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


@dataclass(frozen=True)
class Not:
    item: object


@dataclass(frozen=True)
class PartitionSpec:
    m: int
    m2: int
    blocks: tuple[tuple[tuple[int, int], ...], ...]  # cells (i, j), 1-based
    distinguished: int  # index into blocks

    def __post_init__(self):
        cells = [c for b in self.blocks for c in b]
        grid = {(i, j) for i in range(1, self.m + 1) for j in range(1, self.m2 + 1)}
        if any(not b for b in self.blocks) or len(cells) != len(set(cells)) or set(cells) != grid:
            raise BadParameters("blocks must partition the cell grid")
        if not 0 <= self.distinguished < len(self.blocks):
            raise BadParameters("distinguished block out of range")


@dataclass(frozen=True)
class Sentence:
    n_group: int
    n_field: int
    body: object
    spec: PartitionSpec | None = None


@dataclass(frozen=True)
class UniversalPair:
    """``(forall g. OR group) or (forall c. OR field)``; an empty part is false."""

    n_group: int
    n_field: int
    group: tuple[GroupAtom, ...]
    field: tuple[FieldAtom, ...]


@dataclass(frozen=True)
class GroupSentence:
    n_group: int
    group: tuple[GroupAtom, ...]


# ---------------------------------------------------------------------------
# configurations


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def _cells(m: int, m2: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, m + 1) for j in range(1, m2 + 1)]


def enumerate_configs(m: int, m2: int, max_cells: int = DEFAULT_MAX_CELLS) -> Iterator[PartitionSpec]:
    """Every (partition of the cells, distinguished block), in a fixed order.

    Cells are ordered ``(1,1), (1,2), ..., (m,m')``; partitions follow their
    restricted growth strings lexicographically, then the distinguished block
    runs over blocks in order of first appearance.
    """
    if m < 2 or m2 < 2:
        raise BadParameters("need m, m' >= 2")
    cells = _cells(m, m2)
    if len(cells) > max_cells:
        raise CapExceeded(f"grid of {len(cells)} cells exceeds cap {max_cells}")
    for rgs in set_partitions(len(cells)):
        k = max(rgs) + 1
        blocks = tuple(tuple(c for c, b in zip(cells, rgs) if b == t) for t in range(k))
        for d in range(k):
            yield PartitionSpec(m, m2, blocks, d)


def _product(m: int, m2: int, cell: tuple[int, int]) -> tuple[int, int, int]:
    i, j = cell
    return (m + j, i, m + m2 + j)


def build_sentence(spec: PartitionSpec) -> Sentence:
    """Negated conjunction describing a counterexample of this shape."""
    m, m2 = spec.m, spec.m2
    atoms: list[Atom] = []
    for a, b in itertools.combinations(range(1, m + 1), 2):
        atoms.append(GroupAtom((a,), (b,), False))
    for i in range(1, m + 1):
        atoms.append(FieldAtom(((i,),), (), False))
    reps = []
    for block in spec.blocks:
        first = _product(m, m2, block[0])
        reps.append(first)
        for cell in block[1:]:
            atoms.append(GroupAtom(first, _product(m, m2, cell), True))
    for a, b in itertools.combinations(range(len(reps)), 2):
        atoms.append(GroupAtom(reps[a], reps[b], False))
    atoms.append(GroupAtom(reps[spec.distinguished], (), True))
    for t, block in enumerate(spec.blocks):
        total = tuple((m + j, i) for i, j in block)
        atoms.append(FieldAtom(total, ((),) if t == spec.distinguished else (), True))
    # the distinguished block's sum comes first among the field sums
    d = spec.distinguished
    nfirst = len(atoms) - len(spec.blocks)
    sums = atoms[nfirst:]
    atoms = atoms[:nfirst] + [sums[d]] + sums[:d] + sums[d + 1 :]
    return Sentence(m + 2 * m2, m + m2, Not(And(tuple(atoms))), spec)


# ---------------------------------------------------------------------------
# normal forms


def _nnf(node, positive: bool = True):
    if isinstance(node, (GroupAtom, FieldAtom)):
        return node if positive else node.negate()
    if isinstance(node, Not):
        return _nnf(node.item, not positive)
    if isinstance(node, And):
        items = tuple(_nnf(x, positive) for x in node.items)
        return And(items) if positive else Or(items)
    if isinstance(node, Or):
        items = tuple(_nnf(x, positive) for x in node.items)
        return Or(items) if positive else And(items)
    raise TypeError(f"unexpected node {node!r}")


def _cnf(node) -> list[tuple]:
    """Clauses (tuples of atoms) of an NNF formula."""
    if isinstance(node, (GroupAtom, FieldAtom)):
        return [(node,)]
    if isinstance(node, And):
        out = []
        for x in node.items:
            out.extend(_cnf(x))
        return out
    if isinstance(node, Or):
        clauses = [()]
        for x in node.items:
            clauses = [c + d for c in clauses for d in _cnf(x)]
        return clauses
    raise TypeError(f"unexpected node {node!r}")


def split_disjunction(s: Sentence) -> list[UniversalPair]:
    """Conjunction of ``(forall g. P') or (forall c. P'')`` pairs equivalent to ``s``."""
    out = []
    for clause in _cnf(_nnf(s.body)):
        group = tuple(a for a in clause if isinstance(a, GroupAtom))
        field = tuple(a for a in clause if isinstance(a, FieldAtom))
        out.append(UniversalPair(s.n_group, s.n_field, group, field))
    return out


# ---------------------------------------------------------------------------
# finite evaluation


class GroupTable:
    """Cayley table of a finite group, elements numbered in canonical order."""

    def __init__(self, ctx: GroupCtx | None = None, table=None, identity: int = 0, name: str = ""):
        if ctx is not None:
            elems = finite_elements(ctx)
            index = {e: i for i, e in enumerate(elems)}
            table = [[index[ctx.mul(a, b)] for b in elems] for a in elems]
            identity = index[ctx.identity()]
            name = name or ctx.text()
        self.table = np.asarray(table, dtype=np.int64)
        self.identity = identity
        self.order = self.table.shape[0]
        self.name = name

    def assignments(self, nvars: int) -> np.ndarray:
        return _grid(self.order, nvars)

    def eval_term(self, term: Sequence[int], values: np.ndarray) -> np.ndarray:
        out = np.full(values.shape[0], self.identity, dtype=np.int64)
        for v in term:
            out = self.table[out, values[:, v - 1]]
        return out


def _grid(base: int, nvars: int) -> np.ndarray:
    if nvars == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.indices((base,) * nvars, dtype=np.int64)
    return idx.reshape(nvars, -1).T


def _field_poly(p: int, poly, values: np.ndarray) -> np.ndarray:
    out = np.zeros(values.shape[0], dtype=np.int64)
    for mono in poly:
        term = np.ones(values.shape[0], dtype=np.int64)
        for v in mono:
            term = term * values[:, v - 1] % p
        out = (out + term) % p
    return out


def _eval_group_atom(G: GroupTable, atom: GroupAtom, values) -> np.ndarray:
    eq = G.eval_term(atom.lhs, values) == G.eval_term(atom.rhs, values)
    return eq if atom.equal else ~eq


def _eval_field_atom(p: int, atom: FieldAtom, values) -> np.ndarray:
    eq = _field_poly(p, atom.lhs, values) == _field_poly(p, atom.rhs, values)
    return eq if atom.equal else ~eq


def _require_prime(spec: FieldSpec) -> int:
    if not isinstance(spec, PrimeField):
        raise InfiniteFieldRejected(f"{spec.text()} cannot be checked by exhaustion")
    return spec.p


def evaluate_sentence(s: Sentence, G: GroupTable, spec: FieldSpec) -> bool:
    """Truth of ``forall g, c. body`` in ``(G, k)``, evaluated on the full grid."""
    p = _require_prime(spec)
    gv = G.assignments(s.n_group)
    cv = _grid(p, s.n_field)

    def ev(node):
        if isinstance(node, GroupAtom):
            return _eval_group_atom(G, node, gv)[:, None]
        if isinstance(node, FieldAtom):
            return _eval_field_atom(p, node, cv)[None, :]
        if isinstance(node, Not):
            return ~ev(node.item)
        if isinstance(node, And):
            out = np.ones((1, 1), dtype=bool)
            for x in node.items:
                out = out & ev(x)
            return out
        if isinstance(node, Or):
            out = np.zeros((1, 1), dtype=bool)
            for x in node.items:
                out = out | ev(x)
            return out
        raise TypeError(node)

    return bool(np.all(ev(s.body)))


def group_part_holds(G: GroupTable, n_group: int, atoms: Sequence[GroupAtom]) -> bool:
    gv = G.assignments(n_group)
    out = np.zeros(gv.shape[0], dtype=bool)
    for a in atoms:
        out |= _eval_group_atom(G, a, gv)
    return bool(out.all())


def field_part_holds(spec: FieldSpec, n_field: int, atoms: Sequence[FieldAtom]) -> bool:
    p = _require_prime(spec)
    cv = _grid(p, n_field)
    out = np.zeros(cv.shape[0], dtype=bool)
    for a in atoms:
        out |= _eval_field_atom(p, a, cv)
    return bool(out.all())


def evaluate_pair(pair: UniversalPair, G: GroupTable, spec: FieldSpec) -> bool:
    return group_part_holds(G, pair.n_group, pair.group) or field_part_holds(spec, pair.n_field, pair.field)


def field_filter(pairs: Iterable[UniversalPair], fields: Sequence[FieldSpec]) -> list[GroupSentence]:
    """Drop pairs whose field half holds in every listed field; keep the group half of the rest."""
    for f in fields:
        _require_prime(f)
    out = []
    for pair in pairs:
        if all(field_part_holds(f, pair.n_field, pair.field) for f in fields):
            continue
        out.append(GroupSentence(pair.n_group, pair.group))
    return out


def small_groups(max_order: int = 6) -> list[GroupTable]:
    """One group of each isomorphism type up to order 6."""
    from .groups import Affine, DirectProduct, FiniteCyclic

    out = [GroupTable(FiniteCyclic(n)) for n in range(1, max_order + 1)]
    if max_order >= 4:
        out.append(GroupTable(DirectProduct((FiniteCyclic(2), FiniteCyclic(2)))))
    if max_order >= 6:
        out.append(GroupTable(Affine(PrimeField(3), 2), name="S3"))
    return out


def prune(pairs: Iterable[UniversalPair], max_order: int = 6) -> list[UniversalPair]:
    """Heuristic: drop pairs whose group half holds in every group of order <= max_order.

    Such a group half is never violated in the small battery, so the pair
    rules out nothing there. This is not a semantic simplification.
    """
    battery = small_groups(max_order)
    return [p for p in pairs if not all(group_part_holds(G, p.n_group, p.group) for G in battery)]


# ---------------------------------------------------------------------------
# text


def _gterm(t: tuple[int, ...]) -> str:
    return "*".join(f"g{v}" for v in t) or "1"


def _fpoly(poly) -> str:
    if not poly:
        return "0"
    return " + ".join("*".join(f"c{v}" for v in mono) or "1" for mono in poly)


def _native_atom(a: Atom) -> str:
    op = "=" if a.equal else "/="
    if isinstance(a, GroupAtom):
        return f"({op} {_gterm(a.lhs)} {_gterm(a.rhs)})"
    return f"({op} {_fpoly(a.lhs)} {_fpoly(a.rhs)})"


def _native_block(prefix: str, n: int, atoms) -> str:
    names = " ".join(f"{prefix}{i}" for i in range(1, n + 1))
    body = " ".join(_native_atom(a) for a in atoms)
    return f"(forall ({names}) (or{(' ' + body) if body else ''}))"


def _tptp_gterm(t) -> str:
    if not t:
        return "e"
    out = f"G{t[0]}"
    for v in t[1:]:
        out = f"mul({out},G{v})"
    return out


def _tptp_mono(mono) -> str:
    if not mono:
        return "one"
    out = f"C{mono[0]}"
    for v in mono[1:]:
        out = f"times({out},C{v})"
    return out


def _tptp_poly(poly) -> str:
    if not poly:
        return "zero"
    out = _tptp_mono(poly[0])
    for mono in poly[1:]:
        out = f"plus({out},{_tptp_mono(mono)})"
    return out


def _tptp_atom(a: Atom) -> str:
    op = "=" if a.equal else "!="
    if isinstance(a, GroupAtom):
        return f"{_tptp_gterm(a.lhs)} {op} {_tptp_gterm(a.rhs)}"
    return f"{_tptp_poly(a.lhs)} {op} {_tptp_poly(a.rhs)}"


def _tptp_block(prefix: str, n: int, atoms) -> str:
    names = ",".join(f"{prefix}{i}" for i in range(1, n + 1))
    body = " | ".join(_tptp_atom(a) for a in atoms) or "$false"
    if n == 0:
        return f"({body})"
    return f"(! [{names}] : ({body}))"


def emit(sentences: Sequence[UniversalPair | GroupSentence], format: str = "native") -> str:
    """One line per sentence; empty input gives empty output."""
    lines = []
    for k, s in enumerate(sentences, start=1):
        if format == "native":
            if isinstance(s, UniversalPair):
                lines.append(
                    f"(or {_native_block('g', s.n_group, s.group)} {_native_block('c', s.n_field, s.field)})"
                )
            else:
                lines.append(_native_block("g", s.n_group, s.group))
        elif format == "prover":
            if isinstance(s, UniversalPair):
                body = f"{_tptp_block('G', s.n_group, s.group)} | {_tptp_block('C', s.n_field, s.field)}"
            else:
                body = _tptp_block("G", s.n_group, s.group)
            lines.append(f"fof(s{k}, axiom, {body}).")
        else:
            raise BadParameters(f"unknown format {format!r}")
    return "".join(line + "\n" for line in lines)


def compile_sentences(m: int, m2: int, max_cells: int = DEFAULT_MAX_CELLS) -> list[UniversalPair]:
    """All split pairs for one ``(m, m')``, in configuration order."""
    out = []
    for spec in enumerate_configs(m, m2, max_cells):
        out.extend(split_disjunction(build_sentence(spec)))
    return out
