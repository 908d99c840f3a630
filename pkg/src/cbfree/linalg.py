"""Small dense matrices over exact rationals (or floats, opt-in).

Everything downstream manipulates matrices of modest size (at most a few
dozen rows), so a hand-rolled immutable matrix over ``fractions.Fraction``
beats pulling in heavier machinery and keeps every identity check exact.
Matrices are hashable, which the evaluation caches rely on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Scalar = Union[Fraction, float, int]


class LinAlgError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


class Mat:
    """Immutable dense matrix.  Entries are Fractions (exact mode) or floats."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Sequence[Scalar]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise LinAlgError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise LinAlgError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Mat is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(n: int, m: int | None = None, *, exact: bool = True) -> "Mat":
        m = n if m is None else m
        z = Fraction(0) if exact else 0.0
        return Mat([[z] * m for _ in range(n)])

    @staticmethod
    def identity(n: int, *, exact: bool = True) -> "Mat":
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return Mat([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def unit(n: int, m: int, i: int, j: int, *, exact: bool = True) -> "Mat":
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return Mat([[one if (r, c) == (i, j) else zero for c in range(m)] for r in range(n)])

    # -- basic queries -----------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def max_abs(self) -> float:
        return max(abs(float(x)) for r in self.rows for x in r)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        return Mat([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return Mat([[-a for a in r] for r in self.rows])

    def scale(self, s: Scalar) -> "Mat":
        return Mat([[a * s for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
            bt = list(zip(*other.rows))
            return Mat([[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.rows])
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.rows)))

    def trace(self):
        if not self.is_square():
            raise LinAlgError("trace of non-square matrix")
        return sum(self.rows[i][i] for i in range(self.nrows))

    def map(self, f: Callable[[Scalar], Scalar]) -> "Mat":
        return Mat([[f(a) for a in r] for r in self.rows])

    def to_float(self) -> "Mat":
        return self.map(float)

    def to_exact(self) -> "Mat":
        return self.map(_as_fraction)

    def inverse(self) -> "Mat":
        """Gauss-Jordan inverse; exact over Fractions."""
        if not self.is_square():
            raise LinAlgError("inverse of non-square matrix")
        n = self.nrows
        a = [list(r) for r in self.rows]
        b = [list(r) for r in Mat.identity(n, exact=not self._is_float()).rows]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise LinAlgError("matrix is singular")
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                b[col], b[piv] = b[piv], b[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            b[col] = [x / p for x in b[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                    b[r] = [x - f * y for x, y in zip(b[r], b[col])]
        return Mat(b)

    def _is_float(self) -> bool:
        return isinstance(self.rows[0][0], float)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.rows)
            object.__setattr__(self, "_hash", h)
        return h

    def diff_norm(self, other: "Mat") -> float:
        return (self - other).max_abs()

    def __repr__(self):
        return f"Mat({[list(r) for r in self.rows]!r})"

    # -- (de)serialization ---------------------------------------------------

    def to_json(self):
        """Row-major nested lists; exact entries as "p/q" strings, floats as numbers."""
        out = []
        for r in self.rows:
            row = []
            for x in r:
                if isinstance(x, Fraction):
                    row.append(f"{x.numerator}/{x.denominator}")
                else:
                    row.append(x)
            out.append(row)
        return out

    @staticmethod
    def from_json(data) -> "Mat":
        rows = []
        for r in data:
            row = []
            for x in r:
                if isinstance(x, str):
                    num, _, den = x.partition("/")
                    row.append(Fraction(int(num), int(den or "1")))
                else:
                    row.append(x)
            rows.append(row)
        return Mat(rows)


# -- free-standing helpers ---------------------------------------------------


def vec(m: Mat) -> tuple:
    """Row-major flattening of a matrix into a coordinate tuple."""
    return tuple(x for r in m.rows for x in r)


def unvec(v: Sequence[Scalar], n: int, m: int) -> Mat:
    if len(v) != n * m:
        raise LinAlgError("length mismatch in unvec")
    return Mat([v[i * m:(i + 1) * m] for i in range(n)])


def left_mult_matrix(b: Mat) -> Mat:
    """Matrix of x -> b*x on row-major vectorized square matrices."""
    n = b.nrows
    cols = []
    rows = [[None] * (n * n) for _ in range(n * n)]
    del cols
    for i in range(n):
        for j in range(n):
            # image of the (i,j) matrix unit is b * E_ij: column index i*n+j
            for r in range(n):
                rows[r * n + j][i * n + j] = b[r, i]
    zero = Fraction(0) if not b._is_float() else 0.0
    return Mat([[x if x is not None else zero for x in row] for row in rows])


def right_mult_matrix(b: Mat) -> Mat:
    """Matrix of x -> x*b on row-major vectorized square matrices."""
    n = b.nrows
    rows = [[None] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            # image of E_ij is E_ij * b, supported on row i
            for c in range(n):
                rows[i * n + c][i * n + j] = b[j, c]
    zero = Fraction(0) if not b._is_float() else 0.0
    return Mat([[x if x is not None else zero for x in row] for row in rows])


def nullspace_basis(rows: Sequence[Sequence[Scalar]]) -> list[tuple]:
    """Basis of the right nullspace of the given (stacked) constraint rows.

    Exact Gaussian elimination; returns coordinate tuples.
    """
    if not rows:
        raise LinAlgError("no constraint rows")
    ncols = len(rows[0])
    a = [list(r) for r in rows if any(x != 0 for x in r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -a[ri][fc]
        basis.append(tuple(v))
    return basis


def random_int_mat(rng, n: int, m: int | None = None, *, lo: int = -2, hi: int = 2,
                   exact: bool = True) -> Mat:
    """Random small-integer matrix; integer entries keep Fraction arithmetic cheap."""
    m = n if m is None else m
    conv = Fraction if exact else float
    return Mat([[conv(rng.randint(lo, hi)) for _ in range(m)] for _ in range(n)])
