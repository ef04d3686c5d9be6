"""Exact sparse linear algebra over any :class:`FieldSpec`.

Matrices are stored by column (``dict`` row -> raw value) because every
caller builds them one column at a time from group-algebra expansions.
Pivoting is deterministic: columns are eliminated left to right and, among
the rows able to pivot, the one with the fewest nonzeros wins (ties go to the
lowest row index). Over GF(p), small enough matrices are sent to the dense
compiled kernel instead; reduced row echelon form is unique, so both paths
return identical answers.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import FieldMismatch
from .scalars import FieldSpec, PrimeField, Scalar

__all__ = [
    "ExactMatrix",
    "solve_linear",
    "nullspace",
    "rank",
    "ColumnEliminator",
    "DENSE_LIMIT",
]

#: largest rows*cols handed to the dense GF(p) kernel
DENSE_LIMIT = 4_000_000


class ExactMatrix:
    """Sparse matrix with entries in one field; zero entries are never stored."""

    __slots__ = ("spec", "rows", "cols", "columns")

    def __init__(self, spec: FieldSpec, rows: int, cols: int, columns: Sequence[dict] | None = None):
        self.spec = spec
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        cleaned = []
        for col in columns:
            entry = {}
            for r, v in col.items():
                if not 0 <= r < rows:
                    raise IndexError(f"row {r} out of range")
                if isinstance(v, Scalar):
                    if v.spec != spec:
                        raise FieldMismatch(f"{v.spec.text()} entry in {spec.text()} matrix")
                    v = v.value
                if not spec.is_zero(v):
                    entry[r] = v
            cleaned.append(entry)
        self.columns = cleaned

    @classmethod
    def from_dense(cls, spec: FieldSpec, data: Sequence[Sequence]) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        columns = [
            {i: spec.coerce(data[i][j]) for i in range(rows)} for j in range(cols)
        ]
        return cls(spec, rows, cols, columns)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "ExactMatrix":
        return cls(spec, n, n, [{j: spec.one()} for j in range(n)])

    @property
    def entries(self) -> dict[tuple[int, int], Scalar]:
        return {
            (r, c): Scalar(self.spec, v)
            for c, col in enumerate(self.columns)
            for r, v in col.items()
        }

    def entry(self, r: int, c: int) -> Scalar:
        return Scalar(self.spec, self.columns[c].get(r, self.spec.zero()))

    def to_dense(self) -> list[list]:
        out = [[self.spec.zero()] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def row_dicts(self) -> list[dict]:
        rows: list[dict] = [{} for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                rows[r][c] = v
        return rows

    def matvec(self, x: Sequence) -> list:
        """Raw product ``A @ x``; ``x`` may hold raw values or Scalars."""
        spec = self.spec
        xs = [spec.coerce(v) for v in x]
        out = [spec.zero()] * self.rows
        for c, col in enumerate(self.columns):
            xc = xs[c]
            if spec.is_zero(xc):
                continue
            for r, v in col.items():
                out[r] = spec.add(out[r], spec.mul(v, xc))
        return out

    def select_rows(self, keep: Iterable[int]) -> "ExactMatrix":
        keep = list(keep)
        where = {r: i for i, r in enumerate(keep)}
        columns = [{where[r]: v for r, v in col.items() if r in where} for col in self.columns]
        return ExactMatrix(self.spec, len(keep), self.cols, columns)

    def nnz(self) -> int:
        return sum(len(col) for col in self.columns)

    def __repr__(self):
        return f"ExactMatrix({self.spec.text()}, {self.rows}x{self.cols}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------
# reduced row echelon form


def _sparse_rref(spec: FieldSpec, rows: list[dict], pivot_cols: int):
    """In-place RREF of ``rows``; pivots restricted to columns < ``pivot_cols``.

    Returns ``(pivots, rows)`` where ``pivots`` lists ``(column, row)`` pairs in
    column order.
    """
    col_index: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for c in row:
            col_index.setdefault(c, set()).add(i)
    active = set(range(len(rows)))
    pivots: list[tuple[int, int]] = []
    zero_test = spec.is_zero
    for c in range(pivot_cols):
        holders = col_index.get(c)
        if not holders:
            continue
        cand = [i for i in holders if i in active]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(rows[i]), i))
        active.discard(piv)
        prow = rows[piv]
        inv = spec.inv(prow[c])
        for j in prow:
            prow[j] = spec.mul(prow[j], inv)
        for i in sorted(holders):
            if i == piv:
                continue
            row = rows[i]
            f = row[c]
            for j, v in prow.items():
                nv = spec.sub(row.get(j, spec.zero()), spec.mul(f, v))
                if zero_test(nv):
                    if j in row:
                        del row[j]
                        col_index[j].discard(i)
                else:
                    if j not in row:
                        col_index.setdefault(j, set()).add(i)
                    row[j] = nv
        pivots.append((c, piv))
    return pivots, rows


def _dense_rref(spec: PrimeField, rows: list[dict], ncols: int, pivot_cols: int):
    data = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in row.items():
            data[i, j] = v
    R, piv = _kernels.rref_mod_p(data, spec.p)
    pivots = []
    out_rows = []
    for k, c in enumerate(piv.tolist()):
        if c >= pivot_cols:
            break
        pivots.append((c, k))
    for i in range(R.shape[0]):
        nz = np.flatnonzero(R[i])
        out_rows.append({int(j): int(R[i, j]) for j in nz})
    return pivots, out_rows


def _rref(spec: FieldSpec, rows: list[dict], ncols: int, pivot_cols: int):
    if isinstance(spec, PrimeField) and len(rows) * ncols <= DENSE_LIMIT:
        return _dense_rref(spec, rows, ncols, pivot_cols)
    return _sparse_rref(spec, rows, pivot_cols)


def solve_raw(A: ExactMatrix, b: Sequence) -> list | None:
    spec = A.spec
    rows = A.row_dicts()
    bcol = A.cols
    for i in range(A.rows):
        v = spec.coerce(b[i])
        if not spec.is_zero(v):
            rows[i][bcol] = v
    pivots, rows = _rref(spec, rows, A.cols + 1, A.cols)
    pivot_rows = {r for _, r in pivots}
    for i, row in enumerate(rows):
        if i not in pivot_rows and bcol in row:
            return None
    x = [spec.zero()] * A.cols
    for c, r in pivots:
        x[c] = rows[r].get(bcol, spec.zero())
    return x


def solve_linear(A: ExactMatrix, b: Sequence) -> list[Scalar] | None:
    """Exact solution of ``A x = b`` with free variables set to zero, or None."""
    if len(b) != A.rows:
        raise ValueError("right-hand side length does not match row count")
    for v in b:
        if isinstance(v, Scalar) and v.spec != A.spec:
            raise FieldMismatch(f"{v.spec.text()} right-hand side for {A.spec.text()} matrix")
    x = solve_raw(A, b)
    if x is None:
        return None
    return [Scalar(A.spec, v) for v in x]


def nullspace_raw(A: ExactMatrix) -> list[list]:
    spec = A.spec
    pivots, rows = _rref(spec, A.row_dicts(), A.cols, A.cols)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(A.cols):
        if f in pivot_cols:
            continue
        vec = [spec.zero()] * A.cols
        vec[f] = spec.one()
        for c, r in pivots:
            v = rows[r].get(f)
            if v is not None:
                vec[c] = spec.neg(v)
        basis.append(vec)
    return basis


def nullspace(A: ExactMatrix) -> list[list[Scalar]]:
    """Basis of ``{x : A x = 0}``, one vector per free column in column order."""
    return [[Scalar(A.spec, v) for v in vec] for vec in nullspace_raw(A)]


def rank(A: ExactMatrix) -> int:
    pivots, _ = _rref(A.spec, A.row_dicts(), A.cols, A.cols)
    return len(pivots)


# ---------------------------------------------------------------------------
# incremental elimination for growing searches


class ColumnEliminator:
    """Maintains an echelon basis of a growing set of sparse columns.

    Each basis vector remembers how it was built from the original columns,
    so :meth:`solve` returns coefficients on the columns as they were added.
    Basis vectors are processed in insertion order when reducing; a new
    vector is reduced against all older ones, so older pivots stay clear.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self._basis: dict = {}  # pivot row -> (vector, combination)
        self._rank_of: dict = {}  # pivot row -> insertion index
        self.columns_seen = 0

    @property
    def rank(self) -> int:
        return len(self._basis)

    def _reduce(self, vec: dict):
        spec = self.spec
        vec = dict(vec)
        combo: dict = {}
        rank_of = self._rank_of
        heap = [(rank_of[r], r) for r in vec if r in rank_of]
        heapq.heapify(heap)
        pushed = {r for _, r in heap}
        while heap:
            _, r = heapq.heappop(heap)
            f = vec.get(r)
            if f is None:
                continue
            bvec, bcombo = self._basis[r]
            for row, v in bvec.items():
                nv = spec.sub(vec.get(row, spec.zero()), spec.mul(f, v))
                if spec.is_zero(nv):
                    vec.pop(row, None)
                else:
                    if row not in vec and row in rank_of and row not in pushed:
                        pushed.add(row)
                        heapq.heappush(heap, (rank_of[row], row))
                    vec[row] = nv
            for col, v in bcombo.items():
                nv = spec.add(combo.get(col, spec.zero()), spec.mul(f, v))
                if spec.is_zero(nv):
                    combo.pop(col, None)
                else:
                    combo[col] = nv
        return vec, combo

    def add(self, column_id, vec: dict) -> bool:
        """Add a column; True when it enlarged the span."""
        spec = self.spec
        self.columns_seen += 1
        residual, combo = self._reduce(vec)
        if not residual:
            return False
        piv = min(residual)
        inv = spec.inv(residual[piv])
        bvec = {r: spec.mul(v, inv) for r, v in residual.items()}
        bcombo = {c: spec.neg(spec.mul(v, inv)) for c, v in combo.items()}
        bcombo[column_id] = spec.add(bcombo.get(column_id, spec.zero()), inv)
        self._rank_of[piv] = len(self._basis)
        self._basis[piv] = (bvec, bcombo)
        return True

    def solve(self, target: dict) -> dict | None:
        """Coefficients on added columns summing to ``target``, or None."""
        residual, combo = self._reduce(target)
        if residual:
            return None
        return combo
