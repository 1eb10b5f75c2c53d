"""Labeled dense matrices over GF(q).

Rows are labeled by channel-input ids and columns by channel-output ids, so a
submatrix is addressed by label sets rather than positions.  Labeled vectors
are plain mappings ``label -> element``; missing labels read as zero.

Arithmetic is exact, so elimination simply pivots on the first nonzero entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    BaseNotFullRankError,
    DimensionMismatchError,
    NotFullRankError,
    SingularMatrixError,
)
from .field import Field

Label = Hashable
Vector = Mapping[Label, int]
Matching = Dict[Label, Label]  # row label -> column label


@dataclass(frozen=True)
class Matrix:
    field: Field
    row_labels: Tuple[Label, ...]
    col_labels: Tuple[Label, ...]
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.row_labels):
            raise DimensionMismatchError(f"{len(self.rows)} rows for {len(self.row_labels)} row labels")
        for r in self.rows:
            if len(r) != len(self.col_labels):
                raise DimensionMismatchError(f"row of length {len(r)} for {len(self.col_labels)} column labels")
            if any(not 0 <= v < self.field.q for v in r):
                raise ValueError(f"entry outside GF({self.field.q})")
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("duplicate row label")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("duplicate column label")

    @classmethod
    def from_rows(
        cls,
        field: Field,
        rows: Sequence[Sequence[int]],
        row_labels: Optional[Sequence[Label]] = None,
        col_labels: Optional[Sequence[Label]] = None,
    ) -> "Matrix":
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        n_cols = len(rows[0]) if rows else len(col_labels or ())
        if row_labels is None:
            row_labels = range(len(rows))
        if col_labels is None:
            col_labels = range(n_cols)
        return cls(field, tuple(row_labels), tuple(col_labels), rows)

    @classmethod
    def identity(cls, field: Field, labels: Sequence[Label]) -> "Matrix":
        n = len(labels)
        return cls.from_rows(field, [[int(i == j) for j in range(n)] for i in range(n)], labels, labels)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    @property
    def is_square(self) -> bool:
        return len(self.row_labels) == len(self.col_labels)

    def entry(self, row: Label, col: Label) -> int:
        return self.rows[self.row_labels.index(row)][self.col_labels.index(col)]

    def row(self, label: Label) -> Dict[Label, int]:
        return dict(zip(self.col_labels, self.rows[self.row_labels.index(label)]))

    def column(self, label: Label) -> Dict[Label, int]:
        j = self.col_labels.index(label)
        return {r: row[j] for r, row in zip(self.row_labels, self.rows)}

    def submatrix(self, row_labels: Iterable[Label], col_labels: Iterable[Label]) -> "Matrix":
        row_labels, col_labels = tuple(row_labels), tuple(col_labels)
        ri = [self.row_labels.index(r) for r in row_labels]
        ci = [self.col_labels.index(c) for c in col_labels]
        return Matrix(self.field, row_labels, col_labels, tuple(tuple(self.rows[i][j] for j in ci) for i in ri))

    def extended(self, row_label: Label, new_row: Vector, col_label: Label, new_col: Vector, corner: int) -> "Matrix":
        """The matrix with one extra row and one extra column appended."""
        rows = [r + (new_col.get(lbl, 0),) for lbl, r in zip(self.row_labels, self.rows)]
        rows.append(tuple(new_row.get(c, 0) for c in self.col_labels) + (corner,))
        return Matrix(self.field, self.row_labels + (row_label,), self.col_labels + (col_label,), tuple(rows))

    def support(self) -> List[Tuple[Label, Label]]:
        return [
            (r, c)
            for r, row in zip(self.row_labels, self.rows)
            for c, v in zip(self.col_labels, row)
            if v
        ]

    def __str__(self) -> str:
        head = "      " + " ".join(f"{c!s:>4}" for c in self.col_labels)
        body = [f"{r!s:>5} " + " ".join(f"{v:>4}" for v in row) for r, row in zip(self.row_labels, self.rows)]
        return "\n".join([head] + body)


def _eliminate(field: Field, rows: List[List[int]], n_cols: int) -> int:
    """Reduce ``rows`` in place to row echelon form, pivoting only in the
    first ``n_cols`` columns (later columns ride along); return the rank."""
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        width = len(prow)
        inv = field.inv(prow[col])
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                factor = field.mul(f, inv)
                row = rows[i]
                for j in range(col, width):
                    if prow[j]:
                        row[j] = field.sub(row[j], field.mul(factor, prow[j]))
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_of(field: Field, rows: Sequence[Sequence[int]]) -> int:
    """Rank of an unlabeled row list."""
    if not rows:
        return 0
    return _eliminate(field, [list(r) for r in rows], len(rows[0]))


def rank(m: Matrix) -> int:
    return rank_of(m.field, m.rows)


def is_full_rank(m: Matrix) -> bool:
    return m.is_square and rank(m) == len(m.row_labels)


def is_full_rank_extension(base: Matrix, new_row: Vector, new_col: Vector, corner: int) -> bool:
    """True iff appending ``new_row``/``new_col``/``corner`` to the square,
    full-rank ``base`` gives a full-rank (K+1) x (K+1) matrix."""
    if not is_full_rank(base):
        raise BaseNotFullRankError(f"base matrix of shape {base.shape} is not square and full rank")
    rows = [list(r) + [new_col.get(lbl, 0)] for lbl, r in zip(base.row_labels, base.rows)]
    rows.append([new_row.get(c, 0) for c in base.col_labels] + [corner])
    return _eliminate(base.field, rows, len(rows)) == len(rows)


def solve_left(a: Matrix, x: Union[Vector, Sequence[int]]) -> Dict[Label, int]:
    """The unique ``c`` (keyed by row label) with ``c . a == x``."""
    field = a.field
    if not a.is_square:
        raise SingularMatrixError(f"matrix of shape {a.shape} is not square")
    if isinstance(x, Mapping):
        unknown = set(x) - set(a.col_labels)
        if unknown:
            raise DimensionMismatchError(f"vector has labels {sorted(map(str, unknown))} outside the matrix columns")
        target = [x.get(c, 0) for c in a.col_labels]
    else:
        target = list(x)
        if len(target) != len(a.col_labels):
            raise DimensionMismatchError(f"vector of length {len(target)} for {len(a.col_labels)} columns")
    n = len(a.row_labels)
    # transpose: one equation per column of a, unknowns are the rows
    aug = [[a.rows[i][j] for i in range(n)] + [target[j]] for j in range(n)]
    if _eliminate(field, aug, n) < n:
        raise SingularMatrixError("matrix is singular")
    coeffs = [0] * n
    for i in range(n - 1, -1, -1):
        acc = aug[i][n]
        for j in range(i + 1, n):
            if aug[i][j]:
                acc = field.sub(acc, field.mul(aug[i][j], coeffs[j]))
        coeffs[i] = field.div(acc, aug[i][i])
    return dict(zip(a.row_labels, coeffs))


def vector_times(m: Matrix, c: Union[Vector, Sequence[int]]) -> Dict[Label, int]:
    """Row vector ``c`` (keyed by row label) times ``m``, keyed by column label."""
    field = m.field
    coeffs = [c.get(r, 0) for r in m.row_labels] if isinstance(c, Mapping) else list(c)
    if len(coeffs) != len(m.row_labels):
        raise DimensionMismatchError(f"vector of length {len(coeffs)} for {len(m.row_labels)} rows")
    out = [0] * len(m.col_labels)
    for ci, row in zip(coeffs, m.rows):
        if ci:
            for j, v in enumerate(row):
                if v:
                    out[j] = field.add(out[j], field.mul(ci, v))
    return dict(zip(m.col_labels, out))


def find_l(used: Matrix, candidate_row: Vector) -> frozenset:
    """Smallest set of rows of the square full-rank ``used`` whose span holds
    ``candidate_row``: the rows with nonzero coefficient in the unique
    combination that reproduces it."""
    coeffs = solve_left(used, candidate_row)
    return frozenset(label for label, v in coeffs.items() if v)


def perfect_matching(m: Matrix) -> Matching:
    """A perfect matching of rows to columns inside the support of the square,
    full-rank ``m`` (one exists because some term of the determinant
    expansion is nonzero).  Rows are scanned in label order and columns in
    column order, so the result is deterministic."""
    if not is_full_rank(m):
        raise NotFullRankError(f"matrix of shape {m.shape} is not square and full rank")
    adj = [[j for j, v in enumerate(row) if v] for row in m.rows]
    match_col: List[Optional[int]] = [None] * len(m.col_labels)

    def augment(i: int, seen: List[bool]) -> bool:
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_col[j] is None or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    for i in range(len(m.row_labels)):
        if not augment(i, [False] * len(m.col_labels)):
            raise AssertionError("full-rank matrix without a support matching")
    return {m.row_labels[i]: m.col_labels[j] for j, i in enumerate(match_col)}


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Positional product: a's columns pair with b's rows in order."""
    if a.field != b.field:
        raise ValueError("matrices over different fields")
    if len(a.col_labels) != len(b.row_labels):
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    field = a.field
    rows = []
    for arow in a.rows:
        out = [0] * len(b.col_labels)
        for av, brow in zip(arow, b.rows):
            if av:
                for j, bv in enumerate(brow):
                    if bv:
                        out[j] = field.add(out[j], field.mul(av, bv))
        rows.append(tuple(out))
    return Matrix(field, a.row_labels, b.col_labels, tuple(rows))
