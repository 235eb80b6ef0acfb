"""Exact rational linear algebra: rank, nullspace, solving, congruence inertia.

Every decision made here (rank, solvability, signs of a quadratic form) is
taken in exact arithmetic over ``fractions.Fraction``.  No floating point
appears anywhere in this module.

Matrices have dense *semantics* (every ``A[i, j]`` is defined) but store only
nonzero entries per row, so the incidence-sized matrices produced by product
triangulations stay cheap to hold and to eliminate.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class NotSymmetricError(ValueError):
    """Raised when a symmetric-only operation receives an asymmetric matrix."""


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class RationalMatrix:
    """Exact rational matrix with sparse row storage.

    Rows are dicts ``{column: Fraction}`` holding the nonzero entries only.
    Instances are treated as immutable once built; construction helpers are
    the supported way to make one.
    """

    __slots__ = ("rows", "cols", "_data", "_solver")

    def __init__(self, rows: int, cols: int, data: list[dict[int, Fraction]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self._data = data if data is not None else [{} for _ in range(rows)]
        if len(self._data) != rows:
            raise ValueError("row count does not match data")
        self._solver: EchelonSolver | None = None

    # ---- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "RationalMatrix":
        data = []
        for i, v in enumerate(entries):
            v = _coerce(v)
            data.append({i: v} if v else {})
        return cls(len(data), len(data), data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            data.append({j: _coerce(v) for j, v in enumerate(row) if v})
        return cls(nrows, ncols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RationalMatrix":
        ncols = len(columns)
        nrows = rows if rows is not None else (len(columns[0]) if ncols else 0)
        data: list[dict[int, Fraction]] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("ragged columns")
            for i, v in enumerate(col):
                v = _coerce(v)
                if v:
                    data[i][j] = v
        return cls(nrows, ncols, data)

    @classmethod
    def vstack(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        if not blocks:
            raise ValueError("nothing to stack")
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("column counts differ")
        data = []
        for b in blocks:
            data.extend(dict(r) for r in b._data)
        return cls(sum(b.rows for b in blocks), cols, data)

    # ---- access --------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._data[i].get(j, ZERO)

    def row_items(self, i: int) -> Iterator[tuple[int, Fraction]]:
        return iter(self._data[i].items())

    def row_vector(self, i: int) -> list[Fraction]:
        row = self._data[i]
        return [row.get(j, ZERO) for j in range(self.cols)]

    def column_vector(self, j: int) -> list[Fraction]:
        return [self._data[i].get(j, ZERO) for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row_vector(i) for i in range(self.rows)]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def is_zero(self) -> bool:
        return all(not r for r in self._data)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        for i, row in enumerate(self._data):
            for j, v in row.items():
                if self._data[j].get(i, ZERO) != v:
                    return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._data == other._data

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # ---- arithmetic ----------------------------------------------------

    def transpose(self) -> "RationalMatrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for i, row in enumerate(self._data):
            for j, v in row.items():
                data[j][i] = v
        return RationalMatrix(self.cols, self.rows, data)

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        data = []
        for ra, rb in zip(self._data, other._data):
            row = dict(ra)
            for j, v in rb.items():
                s = row.get(j, ZERO) + v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
            data.append(row)
        return RationalMatrix(self.rows, self.cols, data)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, s) -> "RationalMatrix":
        s = _coerce(s)
        if not s:
            return RationalMatrix.zeros(self.rows, self.cols)
        data = [{j: v * s for j, v in row.items()} for row in self._data]
        return RationalMatrix(self.rows, self.cols, data)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        data: list[dict[int, Fraction]] = []
        for row in self._data:
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                for j, b in other._data[k].items():
                    s = acc.get(j, ZERO) + a * b
                    if s:
                        acc[j] = s
                    else:
                        acc.pop(j, None)
            data.append(acc)
        return RationalMatrix(self.rows, other.cols, data)

    def matvec(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("length mismatch")
        out = []
        for row in self._data:
            s = ZERO
            for j, v in row.items():
                x = vec[j]
                if x:
                    s += v * x
            out.append(s)
        return out

    # ---- factorization cache -------------------------------------------

    @property
    def solver(self) -> "EchelonSolver":
        if self._solver is None:
            self._solver = EchelonSolver(self)
        return self._solver


# ---------------------------------------------------------------------------
# Sparse fraction-free elimination
# ---------------------------------------------------------------------------


class EchelonSolver:
    """Sparse fraction-free row echelon form with a replayable operation log.

    The elimination runs once over integer-scaled rows; afterwards the object
    answers rank queries, produces nullspace vectors, and solves ``A x = b``
    for many right-hand sides by replaying the logged row operations on ``b``.

    Pivots are chosen from the sparsest remaining column, preferring entries
    with small numerators (bit length) and sparse rows.  This keeps both
    fill-in and integer growth low on incidence-like matrices while staying
    deterministic.
    """

    def __init__(self, matrix: RationalMatrix):
        self.cols = matrix.cols
        self.nrows = matrix.rows
        rows: list[dict[int, int] | None] = []
        scales: list[Fraction] = []
        for i in range(matrix.rows):
            row = matrix._data[i]
            if not row:
                rows.append({})
                scales.append(ONE)
                continue
            denom_lcm = 1
            for v in row.values():
                denom_lcm = lcm(denom_lcm, v.denominator)
            ints = {j: int(v * denom_lcm) for j, v in row.items()}
            g = 0
            for v in ints.values():
                g = gcd(g, v)
            if g > 1:
                ints = {j: v // g for j, v in ints.items()}
            rows.append(ints)
            scales.append(Fraction(denom_lcm, g if g > 1 else 1))
        self._scales = scales
        self._oplog: list[tuple[int, int, int, int, int]] = []
        self._pivots: list[tuple[int, int]] = []  # (column, row id), in order
        self._rows = rows
        self._eliminate()
        self.rank = len(self._pivots)
        pivot_cols = {c for c, _ in self._pivots}
        self.free_columns = [j for j in range(self.cols) if j not in pivot_cols]

    def _eliminate(self) -> None:
        rows = self._rows
        col_rows: dict[int, set[int]] = {}
        for r, row in enumerate(rows):
            for c in row:
                col_rows.setdefault(c, set()).add(r)
        heap = [(len(rs), c) for c, rs in col_rows.items()]
        heapq.heapify(heap)
        oplog = self._oplog
        while heap:
            count, c = heapq.heappop(heap)
            live = col_rows.get(c)
            if not live:
                continue
            if len(live) != count:
                heapq.heappush(heap, (len(live), c))
                continue
            # Pivot: smallest magnitude, then sparsest row, then row id.
            p_r = min(live, key=lambda r: (abs(rows[r][c]).bit_length(), len(rows[r]), r))
            prow = rows[p_r]
            pval = prow[c]
            # Freeze the pivot row: remove it from the active column index.
            for j in prow:
                s = col_rows.get(j)
                if s is not None:
                    s.discard(p_r)
                    if s:
                        heapq.heappush(heap, (len(s), j))
                    else:
                        del col_rows[j]
            self._pivots.append((c, p_r))
            targets = col_rows.pop(c, set())
            for r in targets:
                row = rows[r]
                a = row.pop(c)
                touched = set(row)
                if pval > 0:
                    new = {j: pval * v for j, v in row.items()}
                    mult = pval
                else:
                    new = {j: -pval * v for j, v in row.items()}
                    mult, a = -pval, -a
                for j, v in prow.items():
                    if j == c:
                        continue
                    s = new.get(j, 0) - a * v
                    if s:
                        new[j] = s
                    else:
                        new.pop(j, None)
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {j: v // g for j, v in new.items()}
                else:
                    g = 1
                oplog.append((r, p_r, mult, a, g))
                rows[r] = new
                for j in touched - set(new):
                    s = col_rows.get(j)
                    if s is not None:
                        s.discard(r)
                        heapq.heappush(heap, (len(s), j))
                        if not s:
                            del col_rows[j]
                for j in set(new) - touched:
                    s = col_rows.setdefault(j, set())
                    s.add(r)
                    heapq.heappush(heap, (len(s), j))

    @property
    def nullity(self) -> int:
        return self.cols - self.rank

    def _back_substitute(self, x: list[Fraction], rhs: dict[int, Fraction] | None = None) -> None:
        rows = self._rows
        for c, rid in reversed(self._pivots):
            row = rows[rid]
            s = rhs.get(rid, ZERO) if rhs is not None else ZERO
            for j, v in row.items():
                if j != c and x[j]:
                    s -= v * x[j]
            x[c] = s / row[c]

    def nullspace(self) -> list[list[Fraction]]:
        """One kernel vector per free column (value 1 there, 0 at other free columns)."""
        basis = []
        for f in self.free_columns:
            x = [ZERO] * self.cols
            x[f] = ONE
            self._back_substitute(x)
            basis.append(x)
        return basis

    def solve(self, rhs: Sequence) -> list[Fraction] | None:
        """Solve ``A x = rhs`` exactly; ``None`` if the system is inconsistent.

        Free variables are set to 0, so the answer is deterministic.
        """
        if len(rhs) != self.nrows:
            raise ValueError("length mismatch")
        b = {}
        for i, v in enumerate(rhs):
            if v:
                b[i] = _coerce(v) * self._scales[i]
        for r, p, mult, a, g in self._oplog:
            br = b.get(r, ZERO) * mult - a * b.get(p, ZERO)
            if g != 1:
                br /= g
            if br:
                b[r] = br
            else:
                b.pop(r, None)
        pivot_rows = {rid for _, rid in self._pivots}
        for i, v in b.items():
            if i not in pivot_rows and v:
                return None
        x = [ZERO] * self.cols
        self._back_substitute(x, b)
        return x


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def rank(matrix: RationalMatrix) -> int:
    """Exact rank via fraction-free sparse elimination."""
    return matrix.solver.rank


def _canonical_basis(vectors: list[list[Fraction]], length: int) -> list[list[Fraction]]:
    """Canonicalize a spanning set of a subspace.

    Reduced row echelon over the vectors, then each vector scaled to a
    primitive integer vector whose first nonzero entry is positive.  The
    result depends only on the subspace, not on the elimination order that
    produced the input.
    """
    work = [list(v) for v in vectors]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(length):
        p = next((i for i in range(r, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        pv = work[r][c]
        work[r] = [v / pv for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                m = work[i][c]
                work[i] = [a - m * b for a, b in zip(work[i], work[r])]
        pivots.append((r, c))
        r += 1
        if r == len(work):
            break
    out = []
    for i in range(r):
        row = work[i]
        denom = 1
        for v in row:
            denom = lcm(denom, v.denominator)
        ints = [int(v * denom) for v in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        lead = next(v for v in ints if v)
        if lead < 0:
            ints = [-v for v in ints]
        out.append([Fraction(v) for v in ints])
    return out


def nullspace_basis(matrix: RationalMatrix) -> RationalMatrix:
    """Columns span ``Ker(matrix)`` exactly, in a canonical reduced form."""
    vectors = _canonical_basis(matrix.solver.nullspace(), matrix.cols)
    return RationalMatrix.from_columns(vectors, rows=matrix.cols)


def solve(matrix: RationalMatrix, rhs: Sequence) -> list[Fraction] | None:
    """Exact solution of ``A x = b``, or ``None`` when inconsistent."""
    return matrix.solver.solve(rhs)


def solve_least_squares(matrix: RationalMatrix, rhs: Sequence) -> list[Fraction]:
    """Exact solution ``x`` of the normal equations ``AᵀA x = Aᵀ b``.

    When ``A x = b`` is consistent its exact solution is returned directly
    (it satisfies the normal equations with residual 0); otherwise the
    normal equations are formed and solved.  Either way the residual
    ``b - A x`` is exactly orthogonal to the column space of ``A``.
    """
    direct = matrix.solver.solve(rhs)
    if direct is not None:
        return direct
    at = matrix.transpose()
    normal = at @ matrix
    target = at.matvec([_coerce(v) for v in rhs])
    x = normal.solver.solve(target)
    if x is None:  # normal equations are always consistent
        raise ArithmeticError("normal equations reported inconsistent")
    return x


def congruence_diagonalize(matrix: RationalMatrix) -> tuple[RationalMatrix, RationalMatrix]:
    """Return ``(C, D)`` with ``Cᵀ S C = D`` diagonal and ``C`` invertible.

    Pivoting follows a fixed rule: first nonzero diagonal entry, else the
    first nonzero off-diagonal entry symmetrized by a row+column move.  The
    diagonal of ``D`` carries the inertia of ``S`` (Sylvester's law).
    """
    if matrix.rows != matrix.cols:
        raise NotSymmetricError("matrix is not square")
    if not matrix.is_symmetric():
        raise NotSymmetricError("matrix is not symmetric")
    n = matrix.rows
    a = [matrix.row_vector(i) for i in range(n)]
    c = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

    def add_col(dst: int, src: int, factor: Fraction) -> None:
        for i in range(n):
            if a[i][src]:
                a[i][dst] += factor * a[i][src]
        for i in range(n):
            if c[i][src]:
                c[i][dst] += factor * c[i][src]

    def add_row(dst: int, src: int, factor: Fraction) -> None:
        for j in range(n):
            if a[src][j]:
                a[dst][j] += factor * a[src][j]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in c:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if not a[k][k]:
            j = next((i for i in range(k + 1, n) if a[i][i]), None)
            if j is not None:
                swap(k, j)
            else:
                pair = next(
                    ((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j]),
                    None,
                )
                if pair is None:
                    break  # remaining block is zero
                i, j = pair
                add_row(i, j, ONE)
                add_col(i, j, ONE)
                if i != k:
                    swap(k, i)
        pivot = a[k][k]
        for r in range(k + 1, n):
            if a[k][r]:
                m = -a[k][r] / pivot
                add_row(r, k, m)
                add_col(r, k, m)
    diag = RationalMatrix.diagonal([a[i][i] for i in range(n)])
    cmat = RationalMatrix.from_rows(c)
    return cmat, diag


def inertia(matrix: RationalMatrix) -> tuple[int, int, int]:
    """Sylvester inertia ``(n_plus, n_minus, n_zero)`` of a symmetric matrix."""
    _, diag = congruence_diagonalize(matrix)
    pos = neg = zero = 0
    for i in range(matrix.rows):
        v = diag[i, i]
        if v > 0:
            pos += 1
        elif v < 0:
            neg += 1
        else:
            zero += 1
    return pos, neg, zero


def vector_eq(u: Iterable, v: Iterable) -> bool:
    return all(_coerce(a) == _coerce(b) for a, b in zip(u, v, strict=True))
