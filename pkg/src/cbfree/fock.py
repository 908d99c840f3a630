"""Truncated amalgamated c-free products and their expectations.

A factor is a pointed B-B-bimodule X = B + X0 where X0 is a *free right
B-module* of rank ``rank`` whose left B-action is a unital homomorphism
B -> M_rank(B), together with a D-valued row q intertwining the left action.
Coordinates of a tensor word are then a single B-entry per multi-index, so
the amalgamated tensor product is exact and the product space is the span of
alternating words, truncated at ``max_word_len``.

Left operators on a factor are (1+rank) square grids over B acting by left
multiplication on coordinates; right operators are mirror grids acting by
right multiplication (available when the left action is uniformly diagonal).
Lifted operators act on the product space by first/last-letter absorption
with reinjection of the B-component; words that would outgrow the truncation
raise instead of silently dropping mass.

Everything here is immutable after construction and evaluation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import AlgebraContext
from .linalg import Mat, left_mult_matrix, right_mult_matrix, random_int_mat, unvec, vec


class TruncationError(RuntimeError):
    """A tensor word outgrew the configured truncation length."""


class FaceError(ValueError):
    """Operator violates the commutation requirement for its face."""


class FactorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# factors
# ---------------------------------------------------------------------------


def apply_linmap(m: Mat, b: Mat) -> Mat:
    """Apply a vectorized linear map B -> B to a B element."""
    col = Mat([[x] for x in vec(b)])
    out = m * col
    return unvec([out[i, 0] for i in range(out.nrows)], b.nrows, b.ncols)


def linmap_two_sided(p: Mat, q: Mat) -> Mat:
    """Vectorized matrix of x -> p * x * q."""
    return left_mult_matrix(p) * right_mult_matrix(q)


@dataclass(frozen=True)
class PointedBimodule:
    """One factor: reduced part of free right-rank ``rank`` with left action
    ``lam`` (grid of vectorized maps B -> B) and q-map row ``q_row``."""

    ctx: AlgebraContext
    rank: int
    lam: tuple[tuple[Mat, ...], ...]
    q_row: tuple[Mat, ...]
    uniform_diagonal: bool = False
    label: str = "factor"

    @property
    def reduced_dim(self) -> int:
        return self.rank

    def lam_apply(self, j: int, i: int, b: Mat) -> Mat:
        return apply_linmap(self.lam[j][i], b)

    def left_action_blocks(self, b: Mat) -> list[list[Mat]]:
        """The M_rank(B) value of the left action at b."""
        return [[self.lam_apply(j, i, b) for i in range(self.rank)] for j in range(self.rank)]

    def validate(self) -> None:
        ctx = self.ctx
        one = ctx.one_b()
        if len(self.lam) != self.rank or any(len(row) != self.rank for row in self.lam):
            raise FactorError("left action grid has wrong shape")
        if len(self.q_row) != self.rank:
            raise FactorError("q row has wrong length")
        for j in range(self.rank):
            for i in range(self.rank):
                want = one if i == j else ctx.zero_b()
                if self.lam_apply(j, i, one) != want:
                    raise FactorError("left action is not unital")
        basis = ctx.basis_b()
        for x in basis:
            for y in basis:
                lx = self.left_action_blocks(x)
                ly = self.left_action_blocks(y)
                lxy = self.left_action_blocks(x * y)
                for j in range(self.rank):
                    for i in range(self.rank):
                        acc = ctx.zero_b()
                        for t in range(self.rank):
                            acc = acc + lx[j][t] * ly[t][i]
                        if acc != lxy[j][i]:
                            raise FactorError("left action is not multiplicative")
        for b in basis:
            lb = self.left_action_blocks(b)
            for i in range(self.rank):
                acc = ctx.zero_d()
                for j in range(self.rank):
                    acc = acc + self.q_row[j] * ctx.embed(lb[j][i])
                if acc != ctx.embed(b) * self.q_row[i]:
                    raise FactorError("q row does not intertwine the left action")

    def to_json(self):
        return {
            "label": self.label,
            "rank": self.rank,
            "uniform_diagonal": self.uniform_diagonal,
            "lam": [[m.to_json() for m in row] for row in self.lam],
            "q_row": [m.to_json() for m in self.q_row],
        }

    @staticmethod
    def from_json(ctx: AlgebraContext, data) -> "PointedBimodule":
        lam = tuple(tuple(Mat.from_json(m) for m in row) for row in data["lam"])
        q_row = tuple(Mat.from_json(m) for m in data["q_row"])
        f = PointedBimodule(ctx, data["rank"], lam, q_row,
                            data.get("uniform_diagonal", False), data.get("label", "factor"))
        f.validate()
        return f


def diagonal_factor(ctx: AlgebraContext, rank: int, q_row: Sequence[Mat] | None = None,
                    label: str = "diag") -> PointedBimodule:
    """Left action b -> diag(b, ..., b); q entries must commute with embed(B)."""
    d2 = ctx.dim_b ** 2
    ident = Mat.identity(d2, exact=ctx.exact)
    zero = Mat.zeros(d2, exact=ctx.exact)
    lam = tuple(tuple(ident if i == j else zero for i in range(rank)) for j in range(rank))
    if q_row is None:
        basis = ctx.commutant_basis()
        q_row = tuple(basis[i % len(basis)] for i in range(rank))
    f = PointedBimodule(ctx, rank, lam, tuple(q_row), uniform_diagonal=True, label=label)
    f.validate()
    return f


def zero_q_factor(ctx: AlgebraContext, rank: int, label: str = "zeroq") -> PointedBimodule:
    """Nilpotent q-map: F degenerates to embed(E) on this factor."""
    return diagonal_factor(ctx, rank, q_row=[ctx.zero_d()] * rank, label=label)


def cancel_pair_factor(ctx: AlgebraContext, q0: Mat | None = None,
                       label: str = "cancel") -> PointedBimodule:
    """Rank-2 diagonal factor with q = (C, -C): lets generators be centered
    under both expectations while keeping higher moments rich."""
    if q0 is None:
        basis = ctx.commutant_basis()
        q0 = basis[-1]
    return diagonal_factor(ctx, 2, q_row=[q0, -q0], label=label)


def conjugated_factor(ctx: AlgebraContext, rank: int, rng, label: str = "conj") -> PointedBimodule:
    """Left action b -> S diag(b,...,b) S^{-1} for a random invertible S in
    M_rank(B); exercises genuinely off-diagonal left cascades."""
    db = ctx.dim_b
    # S = I + strictly lower block part: always invertible
    big = Mat.identity(rank * db, exact=ctx.exact)
    rows = [list(r) for r in big.rows]
    for bj in range(rank):
        for bi in range(bj):
            blk = random_int_mat(rng, db, lo=-1, hi=1, exact=ctx.exact)
            for i in range(db):
                for j in range(db):
                    rows[bj * db + i][bi * db + j] = blk[i, j]
    s_big = Mat(rows)
    s_inv = s_big.inverse()

    def block(m: Mat, j: int, i: int) -> Mat:
        return Mat([[m[j * db + a, i * db + b] for b in range(db)] for a in range(db)])

    lam = tuple(
        tuple(
            sum(
                (linmap_two_sided(block(s_big, j, t), block(s_inv, t, i))
                 for t in range(rank)),
                Mat.zeros(db * db, exact=ctx.exact),
            )
            for i in range(rank)
        )
        for j in range(rank)
    )
    basis = ctx.commutant_basis()
    c_row = [basis[i % len(basis)] for i in range(rank)]
    q_row = tuple(
        sum((c_row[j] * ctx.embed(block(s_inv, j, i)) for j in range(rank)), ctx.zero_d())
        for i in range(rank)
    )
    f = PointedBimodule(ctx, rank, lam, q_row, uniform_diagonal=False, label=label)
    f.validate()
    return f


# ---------------------------------------------------------------------------
# factor operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorOperator:
    """Operator on one factor: a (1+rank) grid over B.

    side "left": coordinates transform by left multiplication,
    (Zx)_i = sum_j grid[i][j] * x_j.  side "right": mirror grid acting by
    right multiplication, (Zx)_j = sum_i x_i * grid[j][i].
    """

    side: str
    grid: tuple[tuple[Mat, ...], ...]

    @property
    def size(self) -> int:
        return len(self.grid)

    def entry(self, i: int, j: int) -> Mat:
        return self.grid[i][j]


def left_b_operator(factor: PointedBimodule, b: Mat) -> FactorOperator:
    """L_b on the factor."""
    factor.ctx.check_b(b)
    r = factor.rank
    zero = factor.ctx.zero_b()
    blocks = factor.left_action_blocks(b)
    grid = [[zero] * (1 + r) for _ in range(1 + r)]
    grid[0][0] = b
    for j in range(r):
        for i in range(r):
            grid[1 + j][1 + i] = blocks[j][i]
    return FactorOperator("left", tuple(tuple(row) for row in grid))


def right_b_operator(factor: PointedBimodule, b: Mat) -> FactorOperator:
    """R_b on the factor."""
    factor.ctx.check_b(b)
    r = factor.rank
    zero = factor.ctx.zero_b()
    grid = [[zero] * (1 + r) for _ in range(1 + r)]
    for i in range(1 + r):
        grid[i][i] = b
    return FactorOperator("right", tuple(tuple(row) for row in grid))


def compose_factor_ops(outer: FactorOperator, inner: FactorOperator) -> FactorOperator:
    """Operator composition outer o inner (inner applied first), same side."""
    if outer.side != inner.side:
        raise FaceError("cannot compose operators of different sides")
    n = outer.size
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for t in range(n):
                if outer.side == "left":
                    term = outer.grid[i][t] * inner.grid[t][j]
                else:
                    # right action composes through right multiplication:
                    # x -> x * inner[t][j] -> x * inner[t][j] * outer[i][t]
                    term = inner.grid[t][j] * outer.grid[i][t]
                acc = term if acc is None else acc + term
            row.append(acc)
        rows.append(tuple(row))
    return FactorOperator(outer.side, tuple(rows))


def factor_expectations(factor: PointedBimodule, op: FactorOperator) -> tuple[Mat, Mat]:
    """(E, F) of a factor operator: B-part of op(vacuum) and its q image."""
    ctx = factor.ctx
    e = op.grid[0][0]
    f = ctx.embed(e)
    for v in range(factor.rank):
        f = f + factor.q_row[v] * ctx.embed(op.grid[1 + v][0])
    return e, f


def random_left_operator(factor: PointedBimodule, rng, *, centered: str | None = None,
                         lo: int = -2, hi: int = 2) -> FactorOperator:
    """Random element of the left algebra; optional centering.

    centered=None: raw draw.  "E": subtract L_{E(Z)}.  "EF": also zero the
    F-expectation (requires the cancel-pair q structure, rank >= 2).
    """
    r = factor.rank
    ctx = factor.ctx
    grid = [[random_int_mat(rng, ctx.dim_b, lo=lo, hi=hi, exact=ctx.exact)
             for _ in range(1 + r)] for _ in range(1 + r)]
    op = FactorOperator("left", tuple(tuple(row) for row in grid))
    if centered in ("E", "EF"):
        op = subtract_left_b(factor, op, op.grid[0][0])
    if centered == "EF":
        op = _cancel_f_creation(factor, op, column=True)
    return op


def random_right_operator(factor: PointedBimodule, rng, *, centered: str | None = None,
                          lo: int = -2, hi: int = 2) -> FactorOperator:
    if not factor.uniform_diagonal:
        raise FaceError("right operator grids require a uniformly diagonal left action")
    r = factor.rank
    ctx = factor.ctx
    grid = [[random_int_mat(rng, ctx.dim_b, lo=lo, hi=hi, exact=ctx.exact)
             for _ in range(1 + r)] for _ in range(1 + r)]
    op = FactorOperator("right", tuple(tuple(row) for row in grid))
    if centered in ("E", "EF"):
        b = op.grid[0][0]
        rb = right_b_operator(factor, b)
        op = FactorOperator("right", tuple(
            tuple(op.grid[i][j] - rb.grid[i][j] for j in range(1 + r)) for i in range(1 + r)))
    if centered == "EF":
        op = _cancel_f_creation(factor, op, column=True)
    return op


def subtract_left_b(factor: PointedBimodule, op: FactorOperator, b: Mat) -> FactorOperator:
    lb = left_b_operator(factor, b)
    n = op.size
    return FactorOperator("left", tuple(
        tuple(op.grid[i][j] - lb.grid[i][j] for j in range(n)) for i in range(n)))


def _cancel_f_creation(factor: PointedBimodule, op: FactorOperator, column: bool) -> FactorOperator:
    if factor.rank < 2 or factor.q_row[1] != -factor.q_row[0]:
        raise FactorError("EF centering needs a cancel-pair factor (q = (C, -C))")
    rows = [list(r) for r in op.grid]
    rows[2][0] = rows[1][0]
    return FactorOperator(op.side, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# the truncated product space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepSpace:
    """Truncated amalgamated c-free product of the factors."""

    ctx: AlgebraContext
    factors: tuple[PointedBimodule, ...]
    max_word_len: int

    def __post_init__(self):
        if not self.factors:
            raise FactorError("need at least one factor")
        if any(f.ctx != self.ctx for f in self.factors):
            raise FactorError("incompatible factor contexts")
        if self.max_word_len < 1:
            raise FactorError("max_word_len must be >= 1")

    @cached_property
    def words(self) -> tuple[tuple[int, ...], ...]:
        """Alternating factor-index words up to the truncation length."""
        out: list[tuple[int, ...]] = [()]
        frontier: list[tuple[int, ...]] = [()]
        for _ in range(self.max_word_len):
            nxt = []
            for w in frontier:
                for k in range(len(self.factors)):
                    if not w or w[0] != k:
                        nxt.append((k,) + w)
            out.extend(nxt)
            frontier = nxt
        return tuple(sorted(out, key=lambda w: (len(w), w)))

    def free_rank(self) -> int:
        total = 0
        for w in self.words:
            r = 1
            for k in w:
                r *= self.factors[k].rank
            total += r
        return total

    def basis(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        out = []
        for w in self.words:
            ranges = [range(self.factors[k].rank) for k in w]
            def rec(i, midx):
                if i == len(ranges):
                    out.append((w, tuple(midx)))
                    return
                for v in ranges[i]:
                    rec(i + 1, midx + [v])
            rec(0, [])
        return out

    def vacuum(self) -> dict:
        return {((), ()): self.ctx.one_b()}


def _merge(acc: dict, key, val: Mat):
    cur = acc.get(key)
    new = val if cur is None else cur + val
    if new.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = new


def _left_act(space: RepSpace, word: tuple[int, ...], b: Mat,
              midx: tuple[int, ...], beta: Mat) -> list[tuple[tuple[int, ...], Mat]]:
    """Left action of b on the single coordinate (word, midx) -> beta.

    The action cascades: b multiplies through the first letter's left action,
    whose B-valued entries act on the remainder, down to the trailing B slot.
    Returns a list of (new_midx, new_beta) pairs for the same word.
    """
    if b.is_zero() or beta.is_zero():
        return []
    if not word:
        out = b * beta
        return [] if out.is_zero() else [((), out)]
    factor = space.factors[word[0]]
    i = midx[0]
    results = []
    if factor.uniform_diagonal:
        js = [i]
    else:
        js = range(factor.rank)
    for j in js:
        bj = b if factor.uniform_diagonal else factor.lam_apply(j, i, b)
        if bj.is_zero():
            continue
        for tail_midx, new_beta in _left_act(space, word[1:], bj, midx[1:], beta):
            results.append(((j,) + tail_midx, new_beta))
    return results


# -- primitive product-space operators ----------------------------------------


@dataclass(frozen=True)
class Prim:
    kind: str            # "lift_left" | "lift_right" | "lmul" | "rmul"
    factor: int | None
    payload: object      # FactorOperator for lifts, Mat for b-multiplications


@dataclass(frozen=True)
class ProductOperator:
    """Word-ready operator on a RepSpace: a composition of primitives.

    ``prims[-1]`` acts first (operator composition order).  The face tag
    records which algebra the operator belongs to; factor is None for pure
    B-operators, which belong to every family.
    """

    face: str                     # "l" or "r"
    factor: int | None
    prims: tuple[Prim, ...]

    def lmul_b(self, b: Mat) -> "ProductOperator":
        """L_b * self (pre-decoration)."""
        return ProductOperator(self.face, self.factor, (Prim("lmul", None, b),) + self.prims)

    def rmul_b_pre(self, b: Mat) -> "ProductOperator":
        """R_b * self (pre-decoration)."""
        return ProductOperator(self.face, self.factor, (Prim("rmul", None, b),) + self.prims)

    def mul_lmul(self, b: Mat) -> "ProductOperator":
        """self * L_b (post-decoration)."""
        return ProductOperator(self.face, self.factor, self.prims + (Prim("lmul", None, b),))

    def mul_rmul(self, b: Mat) -> "ProductOperator":
        """self * R_b (post-decoration)."""
        return ProductOperator(self.face, self.factor, self.prims + (Prim("rmul", None, b),))

    def __mul__(self, other: "ProductOperator") -> "ProductOperator":
        if self.face != other.face:
            raise FaceError("cannot multiply operators of different faces")
        factor = self.factor if self.factor is not None else other.factor
        if other.factor is not None and self.factor is not None and other.factor != self.factor:
            raise FaceError("cannot multiply operators of different factors")
        return ProductOperator(self.face, factor, self.prims + other.prims)


def lift_left(space: RepSpace, k: int, op: FactorOperator) -> ProductOperator:
    """Left representation of a factor operator on the product space."""
    if op.side != "left":
        raise FaceError("lift_left requires a left factor operator")
    if op.size != 1 + space.factors[k].rank:
        raise FaceError("operator grid does not match the factor rank")
    return ProductOperator("l", k, (Prim("lift_left", k, op),))


def lift_right(space: RepSpace, k: int, op: FactorOperator) -> ProductOperator:
    if op.side != "right":
        raise FaceError("lift_right requires a right factor operator")
    if op.size != 1 + space.factors[k].rank:
        raise FaceError("operator grid does not match the factor rank")
    if not space.factors[k].uniform_diagonal:
        _check_right_commutation(space.factors[k], op)
    return ProductOperator("r", k, (Prim("lift_right", k, op),))


def lmul(b: Mat, face: str = "l") -> ProductOperator:
    """The product-space operator L_b (a left operator)."""
    return ProductOperator(face, None, (Prim("lmul", None, b),))


def rmul(b: Mat, face: str = "r") -> ProductOperator:
    """The product-space operator R_b (a right operator)."""
    return ProductOperator(face, None, (Prim("rmul", None, b),))


def _check_right_commutation(factor: PointedBimodule, op: FactorOperator) -> None:
    """Verify the grid commutes with every L_b on the factor coordinates."""
    mat_z = factor_matrix(factor, op)
    for b in factor.ctx.basis_b():
        mat_l = factor_matrix(factor, left_b_operator(factor, b))
        if mat_z * mat_l != mat_l * mat_z:
            raise FaceError("right operator does not commute with the left B-action")


def factor_matrix(factor: PointedBimodule, op: FactorOperator) -> Mat:
    """Materialize a factor operator on the (1+rank)*dim_b^2 coordinates."""
    d2 = factor.ctx.dim_b ** 2
    n = (1 + factor.rank) * d2
    cols = []
    for slot in range(1 + factor.rank):
        for unit in factor.ctx.basis_b():
            col = [factor.ctx.scalar(0)] * n
            for out_slot in range(1 + factor.rank):
                if op.side == "left":
                    img = op.grid[out_slot][slot] * unit
                else:
                    img = unit * op.grid[out_slot][slot]
                for idx, x in enumerate(vec(img)):
                    col[out_slot * d2 + idx] = x
            cols.append(col)
    return Mat(list(zip(*cols)))


# -- applying operators -------------------------------------------------------


def apply_prim(space: RepSpace, prim: Prim, vecd: dict) -> dict:
    out: dict = {}
    if prim.kind == "lmul":
        b = prim.payload
        for (word, midx), beta in vecd.items():
            for new_midx, new_beta in _left_act(space, word, b, midx, beta):
                _merge(out, (word, new_midx), new_beta)
        return out
    if prim.kind == "rmul":
        b = prim.payload
        for (word, midx), beta in vecd.items():
            nb = beta * b
            if not nb.is_zero():
                _merge(out, (word, midx), nb)
        return out
    if prim.kind == "lift_left":
        k = prim.factor
        op: FactorOperator = prim.payload
        r = space.factors[k].rank
        for (word, midx), beta in vecd.items():
            if word and word[0] == k:
                i = midx[0]
                tail_word, tail_midx = word[1:], midx[1:]
                for o in range(1 + r):
                    zb = op.grid[o][1 + i]
                    for nm, nb in _left_act(space, tail_word, zb, tail_midx, beta):
                        if o == 0:
                            _merge(out, (tail_word, nm), nb)
                        else:
                            _merge(out, (word, (o - 1,) + nm), nb)
            else:
                for o in range(1 + r):
                    zb = op.grid[o][0]
                    for nm, nb in _left_act(space, word, zb, midx, beta):
                        if o == 0:
                            _merge(out, (word, nm), nb)
                        else:
                            if len(word) + 1 > space.max_word_len:
                                raise TruncationError(
                                    f"word length {len(word) + 1} exceeds truncation "
                                    f"{space.max_word_len}")
                            _merge(out, ((k,) + word, (o - 1,) + nm), nb)
        return out
    if prim.kind == "lift_right":
        k = prim.factor
        op = prim.payload
        r = space.factors[k].rank
        for (word, midx), beta in vecd.items():
            if word and word[-1] == k:
                i = midx[-1]
                head_word, head_midx = word[:-1], midx[:-1]
                for o in range(1 + r):
                    nb = beta * op.grid[o][1 + i]
                    if nb.is_zero():
                        continue
                    if o == 0:
                        _merge(out, (head_word, head_midx), nb)
                    else:
                        _merge(out, (word, head_midx + (o - 1,)), nb)
            else:
                for o in range(1 + r):
                    nb = beta * op.grid[o][0]
                    if nb.is_zero():
                        continue
                    if o == 0:
                        _merge(out, (word, midx), nb)
                    else:
                        if len(word) + 1 > space.max_word_len:
                            raise TruncationError(
                                f"word length {len(word) + 1} exceeds truncation "
                                f"{space.max_word_len}")
                        _merge(out, (word + (k,), midx + (o - 1,)), nb)
        return out
    raise ValueError(f"unknown primitive {prim.kind}")


def apply_operator(space: RepSpace, op: ProductOperator, vecd: dict) -> dict:
    for prim in reversed(op.prims):
        vecd = apply_prim(space, prim, vecd)
    return vecd


def apply_word(space: RepSpace, ops: Sequence[ProductOperator]) -> dict:
    """Apply the operator word ops[0] * ... * ops[-1] to the vacuum."""
    vecd = space.vacuum()
    for op in reversed(ops):
        vecd = apply_operator(space, op, vecd)
    return vecd


def expectation_E(space: RepSpace, ops: Sequence[ProductOperator]) -> Mat:
    """B-valued expectation: the vacuum component of the word's action."""
    vecd = apply_word(space, ops)
    return vecd.get(((), ()), space.ctx.zero_b())


def q_of_vector(space: RepSpace, vecd: dict) -> Mat:
    """The D-valued state: ordered product of factor q values per tensor word."""
    ctx = space.ctx
    out = ctx.zero_d()
    for (word, midx), beta in vecd.items():
        val = None
        for pos in range(len(word)):
            q = space.factors[word[pos]].q_row[midx[pos]]
            val = q if val is None else val * q
        term = ctx.embed(beta) if val is None else val * ctx.embed(beta)
        out = out + term
    return out


def expectation_F(space: RepSpace, ops: Sequence[ProductOperator]) -> Mat:
    """D-valued expectation: q applied to the word's action on the vacuum."""
    return q_of_vector(space, apply_word(space, ops))


def free_product(factors: Iterable[PointedBimodule], max_word_len: int) -> RepSpace:
    factors = tuple(factors)
    ctx = factors[0].ctx
    return RepSpace(ctx, factors, max_word_len)


def factor_space(factor: PointedBimodule) -> RepSpace:
    """The factor viewed as its own (single-factor) representation space."""
    return RepSpace(factor.ctx, (factor,), 1)


def operator_matrix(space: RepSpace, op: ProductOperator) -> Mat:
    """Materialize the action on the truncated space (small spaces only)."""
    ctx = space.ctx
    basis = space.basis()
    key_index = {}
    units = ctx.basis_b()
    d2 = len(units)
    for i, key in enumerate(basis):
        key_index[key] = i
    n = len(basis) * d2
    cols = []
    for (word, midx) in basis:
        for u, unit in enumerate(units):
            out = apply_operator(space, op, {(word, midx): unit})
            col = [ctx.scalar(0)] * n
            for (w2, m2), beta in out.items():
                base = key_index[(w2, m2)] * d2
                for idx, x in enumerate(vec(beta)):
                    col[base + idx] = x
            cols.append(col)
    return Mat(list(zip(*cols)))


# ---------------------------------------------------------------------------
# reproducible random generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomPairDraw:
    """Deterministic draw of left/right face generators for one factor."""

    factor: int
    seed: int
    left_ops: tuple[ProductOperator, ...]
    right_ops: tuple[ProductOperator, ...]
    manifest: dict = field(compare=False, default_factory=dict)


def random_pair(space: RepSpace, k: int, seed: int, *, count: int = 2,
                centered: str | None = None, lo: int = -2, hi: int = 2) -> RandomPairDraw:
    """Seeded left/right generators of factor k, lifted to the product."""
    import random as _random

    rng = _random.Random(seed)
    factor = space.factors[k]
    lefts = tuple(
        lift_left(space, k, random_left_operator(factor, rng, centered=centered, lo=lo, hi=hi))
        for _ in range(count))
    rights: tuple[ProductOperator, ...] = ()
    if factor.uniform_diagonal:
        rights = tuple(
            lift_right(space, k,
                       random_right_operator(factor, rng, centered=centered, lo=lo, hi=hi))
            for _ in range(count))
    manifest = {
        "factor": k,
        "seed": seed,
        "count": count,
        "centered": centered,
        "entry_range": [lo, hi],
        "max_word_len": space.max_word_len,
        "scalar_mode": space.ctx.scalar_mode,
    }
    return RandomPairDraw(k, seed, lefts, rights, manifest)
