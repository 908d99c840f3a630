"""Concrete unital algebra pairs B inside D over exact rationals.

B and D are full matrix algebras; the inclusion is a unital injective
homomorphism, by default block-diagonal repetition padded with an identity
block.  Everything downstream works through this context so that both the
generic case (B strictly smaller than D) and the degenerations (B = D,
scalar dimensions) run the same code path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import Mat, nullspace_basis, random_int_mat

EXACT = "exact"
FLOAT64 = "float64"


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraContext:
    """Dimensions, scalar mode, and the embedding of B into D."""

    dim_b: int
    dim_d: int
    scalar_mode: str = EXACT
    embedding: str = "block-diagonal"

    def __post_init__(self):
        if self.dim_b < 1 or self.dim_d < self.dim_b:
            raise AlgebraError("need 1 <= dim_b <= dim_d")
        if self.scalar_mode not in (EXACT, FLOAT64):
            raise AlgebraError(f"unknown scalar mode {self.scalar_mode!r}")
        if self.embedding != "block-diagonal":
            raise AlgebraError(f"unknown embedding spec {self.embedding!r}")

    # -- scalars ---------------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.scalar_mode == EXACT

    def scalar(self, x) -> Fraction | float:
        return Fraction(x) if self.exact else float(x)

    def tol(self, tol: float | None = None) -> float:
        if self.exact:
            return 0.0
        return 1e-9 if tol is None else tol

    # -- elements ---------------------------------------------------------------

    def one_b(self) -> Mat:
        return Mat.identity(self.dim_b, exact=self.exact)

    def zero_b(self) -> Mat:
        return Mat.zeros(self.dim_b, exact=self.exact)

    def one_d(self) -> Mat:
        return Mat.identity(self.dim_d, exact=self.exact)

    def zero_d(self) -> Mat:
        return Mat.zeros(self.dim_d, exact=self.exact)

    def check_b(self, b: Mat) -> Mat:
        if b.shape != (self.dim_b, self.dim_b):
            raise AlgebraError(f"B element has shape {b.shape}, want {(self.dim_b,) * 2}")
        return b

    def check_d(self, d: Mat) -> Mat:
        if d.shape != (self.dim_d, self.dim_d):
            raise AlgebraError(f"D element has shape {d.shape}, want {(self.dim_d,) * 2}")
        return d

    def basis_b(self) -> tuple[Mat, ...]:
        n = self.dim_b
        return tuple(Mat.unit(n, n, i, j, exact=self.exact) for i in range(n) for j in range(n))

    def random_b(self, rng, lo: int = -2, hi: int = 2) -> Mat:
        return random_int_mat(rng, self.dim_b, lo=lo, hi=hi, exact=self.exact)

    # -- the inclusion -----------------------------------------------------------

    def embed(self, b: Mat) -> Mat:
        """Unital injective homomorphism B -> D: diag(b, ..., b, 1-pad)."""
        self.check_b(b)
        k, rem = divmod(self.dim_d, self.dim_b)
        zero = self.scalar(0)
        rows = []
        for blk in range(k):
            off = blk * self.dim_b
            for i in range(self.dim_b):
                row = [zero] * self.dim_d
                for j in range(self.dim_b):
                    row[off + j] = b[i, j]
                rows.append(row)
        for i in range(rem):
            row = [zero] * self.dim_d
            row[k * self.dim_b + i] = self.scalar(1)
            rows.append(row)
        return Mat(rows)

    def in_embedded_b(self, d: Mat) -> bool:
        self.check_d(d)
        top = Mat([[d[i, j] for j in range(self.dim_b)] for i in range(self.dim_b)])
        return self.embed(top) == d

    @cached_property
    def _commutant(self) -> tuple[Mat, ...]:
        """Basis of the commutant of embed(B) inside D (exact computation)."""
        nd = self.dim_d
        rows = []
        for b in self.basis_b():
            e = self.embed(b)
            # [X, e] = 0 as a linear constraint on vec(X)
            for r in range(nd):
                for c in range(nd):
                    row = [self.scalar(0)] * (nd * nd)
                    for t in range(nd):
                        row[r * nd + t] += e[t, c]
                        row[t * nd + c] -= e[r, t]
                    rows.append(row)
        basis = nullspace_basis(rows)
        out = []
        for v in basis:
            out.append(Mat([[self.scalar(v[i * nd + j]) for j in range(nd)] for i in range(nd)]))
        return tuple(out)

    def commutant_basis(self) -> tuple[Mat, ...]:
        return self._commutant

    def random_commutant(self, rng, lo: int = -2, hi: int = 2) -> Mat:
        out = self.zero_d()
        for m in self._commutant:
            out = out + m.scale(self.scalar(rng.randint(lo, hi)))
        return out

    # -- validation & serialization ------------------------------------------------

    def validate(self, rng=None) -> None:
        """Check the embedding is unital, multiplicative, and injective on a basis."""
        if self.embed(self.one_b()) != self.one_d():
            raise AlgebraError("embedding is not unital")
        basis = self.basis_b()
        images = set()
        for x in basis:
            images.add(self.embed(x))
            for y in basis:
                if self.embed(x * y) != self.embed(x) * self.embed(y):
                    raise AlgebraError("embedding is not multiplicative")
        if len(images) != len(basis):
            raise AlgebraError("embedding is not injective on the basis")

    def to_json(self) -> str:
        return json.dumps({
            "dim_b": self.dim_b,
            "dim_d": self.dim_d,
            "scalar_mode": self.scalar_mode,
            "embedding": self.embedding,
        }, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "AlgebraContext":
        d = json.loads(text)
        return AlgebraContext(d["dim_b"], d["dim_d"], d["scalar_mode"], d["embedding"])


def make_context(dim_b: int, dim_d: int, embedding: str = "block-diagonal",
                 scalar_mode: str = EXACT) -> AlgebraContext:
    ctx = AlgebraContext(dim_b, dim_d, scalar_mode, embedding)
    ctx.validate()
    return ctx


def b_to_d(ctx: AlgebraContext, b: Mat) -> Mat:
    """The inclusion B -> D."""
    return ctx.embed(b)
