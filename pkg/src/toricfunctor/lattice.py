"""Exact integer linear algebra.

Smith and Hermite normal forms over the integers, together with the lattice
operations built on them: kernels, cokernels, saturation of a span and
complements of saturated sublattices.  Everything is done with Python ints,
so there is no overflow and no rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix.  Either dimension may be zero."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match its shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("column length mismatch")
        return cls(rows, len(columns), tuple(tuple(c[i] for c in columns) for i in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self.columns()))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            ocols = other.columns()
            return IntMatrix(
                self.rows,
                other.cols,
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.data),
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.data))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self) -> int:
        a = [[Fraction(x) for x in r] for r in self.data]
        rank = 0
        for col in range(self.cols):
            piv = next((i for i in range(rank, self.rows) if a[i][col] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            for i in range(rank + 1, self.rows):
                if a[i][col]:
                    f = a[i][col] / a[rank][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
            rank += 1
        return rank

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.data) or f"<{self.rows}x{self.cols}>"


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ A @ V == D with U, V unimodular and D in Smith normal form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """A finitely generated abelian group Z^free_rank + sum Z/t_i, given as a quotient.

    `projection` maps the ambient free lattice onto coordinates of the group:
    the first `free_rank` coordinates are free, the remaining ones are read
    modulo the matching entry of `torsion_orders`.
    """

    free_rank: int
    torsion_orders: tuple[int, ...]
    projection: IntMatrix

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def reduce(self, element: Sequence[int]) -> tuple[int, ...]:
        element = tuple(element)
        if len(element) != self.ngens:
            raise InputError(f"group element has {len(element)} coordinates, expected {self.ngens}")
        free = element[: self.free_rank]
        tors = tuple(x % t for x, t in zip(element[self.free_rank:], self.torsion_orders))
        return free + tors

    def image(self, vector: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(self.projection @ vector)

    def is_zero(self, element: Sequence[int]) -> bool:
        return not any(self.reduce(element))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(tuple(x + y for x, y in zip(a, b)))


def _snf_full(A: IntMatrix):
    """Smith normal form returning (U, D, V, U^-1, V^-1) as nested lists."""
    m, n = A.rows, A.cols
    D = [list(r) for r in A.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, c):  # row_i += c * row_j
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= c * r[i]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(j, i, c):  # col_j += c * col_i
        for r in D:
            r[j] += c * r[i]
        for r in V:
            r[j] += c * r[i]
        Vi[i] = [a - c * b for a, b in zip(Vi[i], Vi[j])]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            row_neg(t)
        if D[t][t] == 0:
            break
    return U, D, V, Ui, Vi


def smith_normal_form(A: IntMatrix) -> SnfDecomposition:
    """Return U, D, V with U @ A @ V == D in Smith normal form.

    Pivots are chosen as the smallest nonzero entry by absolute value.  The
    diagonal of D is nonnegative and each nonzero entry divides the next.
    """
    U, D, V, _, _ = _snf_full(A)
    return SnfDecomposition(
        IntMatrix.from_rows(U, A.rows),
        IntMatrix.from_rows(D, A.cols),
        IntMatrix.from_rows(V, A.cols),
    )


def hermite_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns (H, W) with W @ A == H.

    H is in echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot).  W is unimodular.
    """
    m, n = A.rows, A.cols
    H = [list(r) for r in A.data]
    W = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_add(i, j, c):
        H[i] = [a + c * b for a, b in zip(H[i], H[j])]
        W[i] = [a + c * b for a, b in zip(W[i], W[j])]

    pr = 0
    for col in range(n):
        if pr == m:
            break
        while True:
            nz = [i for i in range(pr, m) if H[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][col]))
            H[pr], H[piv] = H[piv], H[pr]
            W[pr], W[piv] = W[piv], W[pr]
            for i in range(pr + 1, m):
                if H[i][col]:
                    row_add(i, pr, -(H[i][col] // H[pr][col]))
            if not any(H[i][col] for i in range(pr + 1, m)):
                break
        if not H[pr][col]:
            continue
        if H[pr][col] < 0:
            H[pr] = [-x for x in H[pr]]
            W[pr] = [-x for x in W[pr]]
        for i in range(pr):
            if H[i][col]:
                row_add(i, pr, -(H[i][col] // H[pr][col]))
        pr += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(W, m)


def cokernel(A: IntMatrix) -> AbelianGroupPresentation:
    """Presentation of Z^rows / image(A)."""
    U, D, _, _, _ = _snf_full(A)
    m = A.rows
    diag = [D[i][i] for i in range(min(A.rows, A.cols))]
    rank = sum(1 for d in diag if d)
    free_rows = [U[i] for i in range(rank, m)]
    tors = [(diag[i], U[i]) for i in range(rank) if diag[i] > 1]
    rows = free_rows + [r for _, r in tors]
    return AbelianGroupPresentation(
        free_rank=len(free_rows),
        torsion_orders=tuple(d for d, _ in tors),
        projection=IntMatrix.from_rows(rows, m),
    )


def _column_hnf(M: IntMatrix) -> IntMatrix:
    # canonicalise a column basis: Hermite form of the transposed matrix
    if M.cols == 0:
        return M
    H, _ = hermite_normal_form(M.T)
    return IntMatrix.from_rows([r for r in H.data if any(r)], M.rows).T if H.rows else M


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel {v : A v = 0}."""
    U, D, V, _, _ = _snf_full(A)
    rank = sum(1 for i in range(min(A.rows, A.cols)) if D[i][i])
    basis = IntMatrix.from_rows(V, A.cols).select_columns(range(rank, A.cols))
    return _column_hnf(basis)


def saturate_span(vectors: Sequence[Sequence[int]], ambient_rank: int) -> IntMatrix:
    """Basis (as columns) of the saturated sublattice N cap Span_R(vectors)."""
    B = IntMatrix.from_columns(vectors, ambient_rank)
    annihilator = kernel_basis(B.T)
    return kernel_basis(IntMatrix.from_rows(annihilator.columns(), ambient_rank))


def complement(sublattice_basis: IntMatrix, ambient_rank: int) -> IntMatrix:
    """Columns extending a saturated sublattice basis to a basis of Z^ambient_rank."""
    S = sublattice_basis
    if S.rows != ambient_rank:
        raise InputError("sublattice basis does not live in the ambient lattice")
    _, D, _, Ui, _ = _snf_full(S)
    k = S.cols
    diag = [D[i][i] for i in range(min(S.rows, k))]
    if len(diag) < k or any(d != 1 for d in diag):
        raise InputError(
            f"sublattice is not saturated or not a basis (Smith diagonal {diag})")
    return IntMatrix.from_rows(Ui, ambient_rank).select_columns(range(k, ambient_rank))


def solve_integer(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution x of A x = b, or None when none exists."""
    b = tuple(b)
    if len(b) != A.rows:
        raise ValueError("right-hand side length mismatch")
    U, D, V, _, _ = _snf_full(A)
    c = [sum(u * x for u, x in zip(row, b)) for row in U]
    y = [0] * A.cols
    for i in range(A.rows):
        d = D[i][i] if i < A.cols else 0
        if d == 0:
            if c[i]:
                return None
        elif c[i] % d:
            return None
        else:
            y[i] = c[i] // d
    return tuple(sum(v * t for v, t in zip(row, y)) for row in V)


def in_lattice(vector: Sequence[int], generators: Sequence[Sequence[int]]) -> bool:
    vector = tuple(vector)
    if not generators:
        return not any(vector)
    return solve_integer(IntMatrix.from_columns(generators, len(vector)), vector) is not None


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    U, D, V, _, _ = _snf_full(M)
    if any(D[i][i] != 1 for i in range(M.rows)):
        raise InputError("matrix is not unimodular")
    # U M V = I  =>  M^-1 = V U
    return IntMatrix.from_rows(V, M.cols) @ IntMatrix.from_rows(U, M.rows)
