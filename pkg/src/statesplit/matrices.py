"""Exact integer matrices, characteristic polynomials, and Smith normal form.

Everything here is arbitrary-precision integer arithmetic; no floating
point is used anywhere.  Matrices are immutable values, so they can be
shared freely between threads and used as dictionary keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class IntMatrix:
    """An immutable ``rows x cols`` matrix of Python integers."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError(f"expected {self.cols} columns, got {len(row)}")
            for x in row:
                if not isinstance(x, int):
                    raise ValueError(f"non-integer entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        grid = tuple(tuple(int(x) for x in row) for row in rows)
        if not grid or not grid[0]:
            raise ValueError("matrix needs at least one row and one column")
        return cls(len(grid), len(grid[0]), grid)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.entries for x in row)

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols = list(zip(*other.entries))
        grid = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.entries
        )
        return IntMatrix(self.rows, other.cols, grid)

    __matmul__ = mul

    def add(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix addition")
        grid = tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return IntMatrix(self.rows, self.cols, grid)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(
            self.rows, self.cols, tuple(tuple(k * x for x in row) for row in self.entries)
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def trace(self) -> int:
        if not self.is_square:
            raise ValueError("trace requires a square matrix")
        return sum(self.entries[i][i] for i in range(self.rows))

    def power(self, n: int) -> "IntMatrix":
        if not self.is_square:
            raise ValueError("power requires a square matrix")
        if n < 0:
            raise ValueError("negative matrix power")
        out = IntMatrix.identity(self.rows)
        for _ in range(n):
            out = out.mul(self)
        return out

    def entry_sum(self) -> int:
        return sum(x for row in self.entries for x in row)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries))

    def det(self) -> int:
        """Exact determinant via fraction-free Bareiss elimination."""
        if not self.is_square:
            raise ValueError("determinant requires a square matrix")
        n = self.rows
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def char_poly(self) -> tuple[int, ...]:
        """Coefficients ``(1, c1, ..., cn)`` of ``det(tI - A) = t^n + c1 t^(n-1) + ... + cn``.

        Computed by the Faddeev-LeVerrier recursion; the divisions involved
        are exact for integer matrices and are asserted to be so.
        """
        if not self.is_square:
            raise ValueError("characteristic polynomial requires a square matrix")
        n = self.rows
        coeffs = [1]
        m = IntMatrix.identity(n)
        for k in range(1, n + 1):
            am = self.mul(m)
            t = am.trace()
            q, r = divmod(-t, k)
            assert r == 0, "Faddeev-LeVerrier division must be exact"
            coeffs.append(q)
            if k < n:
                m = am.add(IntMatrix.identity(n).scale(q))
        return tuple(coeffs)

    def pretty(self) -> str:
        width = max(len(str(x)) for row in self.entries for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.entries)


def block_antidiagonal(r: IntMatrix, s: IntMatrix) -> IntMatrix:
    """The square block matrix ``[[0, R], [S, 0]]`` (requires composable shapes)."""
    if r.cols != s.rows or s.cols != r.rows:
        raise ValueError("blocks do not compose to a square matrix")
    m, n = r.rows, s.rows
    grid = []
    for i in range(m):
        grid.append([0] * m + list(r.entries[i]))
    for i in range(n):
        grid.append(list(s.entries[i]) + [0] * n)
    return IntMatrix.from_rows(grid)


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form data ``U @ M @ V = D`` with ``U, V`` unimodular.

    ``factors`` is the chain of nonzero invariant factors ``d1 | d2 | ...``
    read off the diagonal of ``D``; zero diagonal entries are omitted.
    """

    u: IntMatrix
    diagonal: IntMatrix
    v: IntMatrix
    factors: tuple[int, ...]


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form of an integer matrix with transformation matrices.

    Returns ``SmithForm(u, d, v, factors)`` with ``u @ m @ v == d`` diagonal,
    ``det(u), det(v) in {1, -1}``, nonnegative diagonal, and each diagonal
    entry dividing the next.  All of this is asserted before returning.
    """
    rows, cols = m.rows, m.cols
    d = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, q: int) -> None:
        d[dst] = [a + q * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(src: int, dst: int, q: int) -> None:
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i: int) -> None:
        d[i] = [-a for a in d[i]]
        u[i] = [-a for a in u[i]]

    for t in range(min(rows, cols)):
        while True:
            # Bring the absolutely smallest nonzero entry of the
            # trailing block to the (t, t) pivot position.
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] != 0 and (
                        pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot != (t, t):
                if pivot[0] != t:
                    swap_rows(t, pivot[0])
                if pivot[1] != t:
                    swap_cols(t, pivot[1])
            progress = True
            while progress:
                progress = False
                for i in range(t + 1, rows):
                    if d[i][t]:
                        q = d[i][t] // d[t][t]
                        if q:
                            add_row(t, i, -q)
                        if d[i][t]:
                            swap_rows(t, i)
                            progress = True
                for j in range(t + 1, cols):
                    if d[t][j]:
                        q = d[t][j] // d[t][t]
                        if q:
                            add_col(t, j, -q)
                        if d[t][j]:
                            swap_cols(t, j)
                            progress = True
            # Absorb any entry the pivot does not divide and reduce again.
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if d[t][t] < 0:
            negate_row(t)

    u_m = IntMatrix.from_rows(u)
    v_m = IntMatrix.from_rows(v)
    d_m = IntMatrix.from_rows(d)
    assert u_m.mul(m).mul(v_m).entries == d_m.entries
    assert abs(u_m.det()) == 1 and abs(v_m.det()) == 1
    diag = [d_m[i, i] for i in range(min(rows, cols))]
    for i in range(len(diag) - 1):
        assert diag[i + 1] % diag[i] == 0 if diag[i] else diag[i + 1] == 0
    for i in range(rows):
        for j in range(cols):
            assert i == j or d_m[i, j] == 0
    factors = tuple(x for x in diag if x != 0)
    return SmithForm(u_m, d_m, v_m, factors)
