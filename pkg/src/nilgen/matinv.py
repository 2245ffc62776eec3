"""Exact matrix layer for the classical types.

Matrices live in sl(N), so(N) or sp(N) with split anti-diagonal forms, so the
upper triangular matrices form a Borel subalgebra.  All arithmetic is over
the rationals (sympy DomainMatrix over QQ); the generic matrix X is never held
symbolically, only evaluated at representatives and seeded random points.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .exponents import degrees
from .rootsys import RootDatum

SEED_ENV = "NILGEN_SEED"
DEFAULT_SEED = 20240


class MatrixError(ValueError):
    pass


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, DEFAULT_SEED))


# ---------------------------------------------------------------------------
# helpers around DomainMatrix


def qq(x) -> object:
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ.convert(x)


def matrix(rows: Sequence[Sequence]) -> DomainMatrix:
    rows = [[qq(v) for v in row] for row in rows]
    size = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix(rows, size, QQ)


def zeros(n: int, m: int | None = None) -> DomainMatrix:
    return DomainMatrix.zeros((n, n if m is None else m), QQ)


def eye(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ)


def unit(n: int, i: int, j: int, value=1) -> DomainMatrix:
    rows = [[QQ(0)] * n for _ in range(n)]
    rows[i][j] = qq(value)
    return DomainMatrix(rows, (n, n), QQ)


def same(a: DomainMatrix, b: DomainMatrix) -> bool:
    """Entrywise equality (== on DomainMatrix also compares the internal format)."""
    return a.shape == b.shape and (a - b).is_zero_matrix


def entries(m: DomainMatrix) -> list[list]:
    return m.to_list()


def trace(m: DomainMatrix):
    rows = m.to_list()
    return sum((rows[i][i] for i in range(len(rows))), QQ(0))


def trace_product(a: DomainMatrix, b: DomainMatrix):
    """tr(ab) without forming the product."""
    ra, rb = a.to_list(), b.to_list()
    n = len(ra)
    return sum((ra[i][k] * rb[k][i] for i in range(n) for k in range(n)), QQ(0))


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def to_json_matrix(m: DomainMatrix) -> list[list[str]]:
    return [[str(to_fraction(v)) for v in row] for row in m.to_list()]


def from_json_matrix(rows: Sequence[Sequence]) -> DomainMatrix:
    return matrix([[Fraction(str(v)) for v in row] for row in rows])


def mpow(m: DomainMatrix, k: int) -> DomainMatrix:
    if k < 0:
        raise MatrixError("negative power")
    return eye(m.shape[0]) if k == 0 else m**k


# ---------------------------------------------------------------------------
# realizations


@dataclass(frozen=True)
class AlgebraRealization:
    """sl(N), so(N) or sp(N) with the split anti-diagonal form."""

    kind: str
    size: int

    def __post_init__(self) -> None:
        if self.kind not in ("sl", "so", "sp"):
            raise MatrixError(f"unknown realization kind {self.kind!r}")
        if self.kind == "sp" and self.size % 2:
            raise MatrixError("sp needs even size")
        if self.size < 2:
            raise MatrixError("size must be at least 2")

    @cached_property
    def form(self) -> DomainMatrix | None:
        n = self.size
        if self.kind == "sl":
            return None
        rows = [[QQ(0)] * n for _ in range(n)]
        for k in range(n):
            rows[k][n - 1 - k] = QQ(1) if (self.kind == "so" or k < n // 2) else QQ(-1)
        return DomainMatrix(rows, (n, n), QQ)

    @cached_property
    def basis(self) -> tuple[DomainMatrix, ...]:
        n = self.size
        out = []
        if self.kind == "sl":
            for a in range(n):
                for b in range(n):
                    if a != b:
                        out.append(unit(n, a, b))
            for a in range(n - 1):
                out.append(unit(n, a, a) - unit(n, a + 1, a + 1))
            return tuple(out)
        for a in range(n):
            for b in range(n):
                if a + b <= n - 1:
                    m = self.project(unit(n, a, b)) * QQ(2)
                    if not m.is_zero_matrix:
                        out.append(m)
        return tuple(out)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def project(self, m: DomainMatrix) -> DomainMatrix:
        """Trace-form orthogonal projection onto the algebra."""
        if self.kind == "sl":
            n = self.size
            return m - eye(n) * (trace(m) / QQ(n))
        j = self.form
        jinv = j.inv()
        return (m - jinv * m.transpose() * j) * QQ(1, 2)

    def contains(self, m: DomainMatrix) -> bool:
        if self.kind == "sl":
            return trace(m) == 0
        j = self.form
        return (m.transpose() * j + j * m).is_zero_matrix

    @cached_property
    def gram_inverse(self) -> DomainMatrix:
        b = self.basis
        g = matrix([[to_fraction(trace_product(x, y)) for y in b] for x in b])
        return g.inv()

    def coordinates(self, m: DomainMatrix) -> list:
        """Coefficients of m in the basis (m must lie in the algebra)."""
        pairing = matrix([[to_fraction(trace_product(m, x))] for x in self.basis])
        return [row[0] for row in (self.gram_inverse * pairing).to_list()]

    def random_element(self, rng: random.Random, bound: int = 5) -> DomainMatrix:
        out = zeros(self.size)
        for b in self.basis:
            c = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
            if c:
                out = out + b * qq(c)
        return out


def realization_for(datum: RootDatum) -> AlgebraRealization:
    f, n = datum.rtype.family, datum.rank
    if f == "A":
        return AlgebraRealization("sl", n + 1)
    if f == "B":
        return AlgebraRealization("so", 2 * n + 1)
    if f == "C":
        return AlgebraRealization("sp", 2 * n)
    if f == "D":
        return AlgebraRealization("so", 2 * n)
    raise MatrixError(f"{datum.rtype} has no matrix realization here")


# ---------------------------------------------------------------------------
# nilpotent representatives


def matrix_rank(m: DomainMatrix) -> int:
    return m.rank()


def jordan_type(m: DomainMatrix) -> tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix from the ranks of its powers."""
    n = m.shape[0]
    ranks = [n]
    power = eye(n)
    while ranks[-1]:
        power = power * m
        ranks.append(power.rank())
        if len(ranks) > n + 1:
            raise MatrixError("matrix is not nilpotent")
    ranks.append(0)
    blocks = []
    for k in range(1, len(ranks) - 1):
        count = ranks[k - 1] - 2 * ranks[k] + ranks[k + 1]
        blocks += [k] * count
    return tuple(sorted(blocks, reverse=True))


def check_partition(partition: Sequence[int], kind: str, size: int) -> None:
    if sum(partition) != size or any(p <= 0 for p in partition):
        raise MatrixError(f"{list(partition)} is not a partition of {size}")
    bad_parity = {"so": 0, "sp": 1}.get(kind)
    if bad_parity is None:
        return
    for p in set(partition):
        if p % 2 == bad_parity and list(partition).count(p) % 2:
            kind_word = "even" if bad_parity == 0 else "odd"
            raise MatrixError(f"{kind}({size}): {kind_word} part {p} must occur with even multiplicity")


@dataclass(frozen=True)
class NilpotentRep:
    partition: tuple[int, ...]
    realization: AlgebraRealization
    e: DomainMatrix = field(repr=False)
    h: DomainMatrix = field(repr=False)
    f: DomainMatrix = field(repr=False)

    @property
    def matrix(self) -> DomainMatrix:
        return self.e


def _sl2_block(p: int) -> tuple[list[list[Fraction]], list[list[Fraction]], list[list[Fraction]], list[int]]:
    """Irreducible p-dim sl2 module: e raises, h diagonal, f lowers, with sign pattern c."""
    c = [1 if k <= p // 2 else -1 for k in range(1, p)]
    e = [[Fraction(0)] * p for _ in range(p)]
    f = [[Fraction(0)] * p for _ in range(p)]
    h = [[Fraction(0)] * p for _ in range(p)]
    for k in range(1, p):
        e[k - 1][k] = Fraction(c[k - 1])
        f[k][k - 1] = Fraction(c[k - 1] * k * (p - k))
    for k in range(p):
        h[k][k] = Fraction(p - 1 - 2 * k)
    return e, h, f, c


def jordan_rep(partition: Sequence[int], real: AlgebraRealization, very_even_tag: int | None = None) -> NilpotentRep:
    """A nilpotent e with the given Jordan type in the algebra, with an sl2-triple (e, h, f).

    Blocks that are self-dual for the form carry an anti-diagonal form; the
    others come in pairs U + U* with the hyperbolic form.  The resulting Witt
    basis is then moved onto the standard form.
    """
    part = tuple(sorted(partition, reverse=True))
    kind, size = real.kind, real.size
    check_partition(part, kind, size)
    if kind == "sl":
        e, h, f = _assemble_sl(part)
    else:
        e, h, f = _assemble_form(part, kind, size)
    rep = NilpotentRep(part, real, e, h, f)
    _check_rep(rep)
    if very_even_tag is not None:
        if not is_very_even(part, kind, size):
            raise MatrixError("very even tag given for a partition that is not very even")
        if very_even_tag not in (1, 2):
            raise MatrixError("very even tag must be 1 or 2")
        if very_even_class(rep) != very_even_tag:
            rep = _swap_middle(rep)
    return rep


def is_very_even(partition: Sequence[int], kind: str, size: int) -> bool:
    return kind == "so" and size % 2 == 0 and all(p % 2 == 0 for p in partition)


def _block_diag(blocks: list[list[list[Fraction]]]) -> list[list[Fraction]]:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[at + i][at + j] = v
        at += len(b)
    return out


def _assemble_sl(part):
    es, hs, fs = [], [], []
    for p in part:
        e, h, f, _ = _sl2_block(p)
        es.append(e)
        hs.append(h)
        fs.append(f)
    return matrix(_block_diag(es)), matrix(_block_diag(hs)), matrix(_block_diag(fs))


def _assemble_form(part, kind: str, size: int):
    """Build e, h, f on a direct sum of blocks with form G', then change basis to the standard form."""
    self_dual_parity = 1 if kind == "so" else 0
    es, hs, fs, gs = [], [], [], []
    pairs: list[tuple[int, int]] = []  # hyperbolic pairs (u, w) with G'(u, w) = 1
    middles: list[tuple[int, int]] = []  # (index, G'(m, m)) for odd so blocks
    at = 0
    counts: dict[int, int] = {}
    for p in part:
        counts[p] = counts.get(p, 0) + 1
    middle_sign = 1
    for p in sorted(counts, reverse=True):
        mult = counts[p]
        if p % 2 == self_dual_parity:
            for _ in range(mult):
                e, h, f, _ = _sl2_block(p)
                sign = 1
                if kind == "so":
                    sign, middle_sign = middle_sign, -middle_sign
                g = [[Fraction(0)] * p for _ in range(p)]
                for k in range(p):
                    if kind == "so":
                        g[k][p - 1 - k] = Fraction(sign)
                    else:
                        g[k][p - 1 - k] = Fraction(1 if k < p // 2 else -1)
                es.append(e)
                hs.append(h)
                fs.append(f)
                gs.append(g)
                for k in range(p // 2):
                    pairs.append((at + k, at + p - 1 - k) if sign == 1 else (at + k, at + p - 1 - k, -1))
                if p % 2:
                    middles.append((at + p // 2, sign))
                at += p
        else:
            for _ in range(mult // 2):
                e, h, f, _ = _sl2_block(p)
                ne = [[-e[j][i] for j in range(p)] for i in range(p)]
                nh = [[-h[j][i] for j in range(p)] for i in range(p)]
                nf = [[-f[j][i] for j in range(p)] for i in range(p)]
                es.append(_block_diag([e, ne]))
                hs.append(_block_diag([h, nh]))
                fs.append(_block_diag([f, nf]))
                g = [[Fraction(0)] * (2 * p) for _ in range(2 * p)]
                for k in range(p):
                    g[k][p + k] = Fraction(1)
                    g[p + k][k] = Fraction(1 if kind == "so" else -1)
                gs.append(g)
                for k in range(p):
                    pairs.append((at + k, at + p + k))
                at += 2 * p
    e1, h1, f1, g1 = (_block_diag(x) for x in (es, hs, fs, gs))

    # Witt basis as columns of the change-of-basis matrix
    def vec(idx_coeffs):
        v = [Fraction(0)] * size
        for i, c in idx_coeffs:
            v[i] += c
        return v

    hyper: list[tuple[list[Fraction], list[Fraction]]] = []
    for pr in pairs:
        if len(pr) == 3:
            u, w, _ = pr
            hyper.append((vec([(u, 1)]), vec([(w, -1)])))
        else:
            u, w = pr
            hyper.append((vec([(u, 1)]), vec([(w, 1)])))
    mids = list(middles)
    while len(mids) >= 2:
        (a, sa), (b, sb) = mids.pop(0), mids.pop(0)
        if sa == sb:
            raise MatrixError("middle vectors must alternate in sign")
        plus, minus = (a, b) if sa == 1 else (b, a)
        hyper.append((vec([(plus, 1), (minus, 1)]), vec([(plus, Fraction(1, 2)), (minus, Fraction(-1, 2))])))
    cols: list[list[Fraction] | None] = [None] * size
    for k, (u, w) in enumerate(hyper):
        cols[k] = u
        cols[size - 1 - k] = w
    if mids:
        (a, sa), = mids
        if sa != 1:
            raise MatrixError("leftover middle vector has the wrong sign")
        cols[size // 2] = vec([(a, 1)])
    if any(c is None for c in cols):
        raise MatrixError("Witt basis construction left a gap")
    basis = matrix([[cols[j][i] for j in range(size)] for i in range(size)])
    gp = matrix(g1)
    real = AlgebraRealization(kind, size)
    if not same(basis.transpose() * gp * basis, real.form):
        raise MatrixError("Witt basis does not carry the standard form")
    binv = basis.inv()
    return tuple(binv * matrix(x) * basis for x in (e1, h1, f1))


def _check_rep(rep: NilpotentRep) -> None:
    real = rep.realization
    for name, m in (("e", rep.e), ("h", rep.h), ("f", rep.f)):
        if not real.contains(m):
            raise MatrixError(f"{name} is not in {real.kind}({real.size})")
    e, h, f = rep.e, rep.h, rep.f
    if not (same(h * e - e * h, e * QQ(2)) and same(h * f - f * h, f * QQ(-2)) and same(e * f - f * e, h)):
        raise MatrixError("(e, h, f) is not an sl2-triple")
    if jordan_type(e) != rep.partition:
        raise MatrixError(f"representative has Jordan type {jordan_type(e)}, wanted {rep.partition}")


def very_even_class(rep: NilpotentRep) -> int:
    """1 or 2: which SO(2n)-class of maximal isotropic subspaces contains Im e^(n/2).

    Class 1 meets span(e_1..e_n) in even codimension.
    """
    size = rep.realization.size
    n = size // 2
    image = mpow(rep.e, n // 2)
    if image.rank() != n:
        raise MatrixError("not a very even element of type [n,n]")
    ref = matrix([[1 if i == k else 0 for k in range(n)] for i in range(size)])
    joint = image.hstack(ref).rank()
    meet = 2 * n - joint
    return 1 if (n - meet) % 2 == 0 else 2


def _swap_middle(rep: NilpotentRep) -> NilpotentRep:
    """Conjugate by the form-preserving swap of e_n and e_(n+1) (determinant -1)."""
    size = rep.realization.size
    n = size // 2
    perm = list(range(size))
    perm[n - 1], perm[n] = perm[n], perm[n - 1]
    s = matrix([[1 if perm[j] == i else 0 for j in range(size)] for i in range(size)])
    new = NilpotentRep(rep.partition, rep.realization, s * rep.e * s, s * rep.h * s, s * rep.f * s)
    _check_rep(new)
    return new


def embed_odd_orthogonal(m: DomainMatrix) -> DomainMatrix:
    """so(2n+1) -> so(2n+2) as the stabilizer of w = e_(n+1) - e_(n+2)/2.

    The middle vector of the odd form goes to u = e_(n+1) + e_(n+2)/2, which
    has square length 1 and is orthogonal to w.
    """
    odd = m.shape[0]
    n = odd // 2
    big = AlgebraRealization("so", odd + 1)
    small = AlgebraRealization("so", odd)
    cols = []
    for k in range(odd):
        v = [Fraction(0)] * (odd + 1)
        if k < n:
            v[k] = Fraction(1)
        elif k == n:
            v[n], v[n + 1] = Fraction(1), Fraction(1, 2)
        else:
            v[k + 1] = Fraction(1)
        cols.append(v)
    p = matrix([[cols[j][i] for j in range(odd)] for i in range(odd + 1)])
    left = small.form.inv() * p.transpose() * big.form
    out = p * m * left
    if not big.contains(out):
        raise MatrixError("embedding left so(2n+2)")
    return out


def power_vanishes(rep: NilpotentRep | DomainMatrix, k: int) -> bool:
    m = rep.e if isinstance(rep, NilpotentRep) else rep
    return mpow(m, k).is_zero_matrix


# ---------------------------------------------------------------------------
# Pfaffians


def _fraction_rows(m) -> list[list[Fraction]]:
    if isinstance(m, DomainMatrix):
        return [[to_fraction(v) for v in row] for row in m.to_list()]
    return [[Fraction(v) for v in row] for row in m]


def is_skew(rows: Sequence[Sequence[Fraction]]) -> bool:
    n = len(rows)
    return all(rows[i][j] == -rows[j][i] for i in range(n) for j in range(n))


def _pfaffian_rows(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    a = [row[:] for row in a]
    result = Fraction(1)
    for k in range(0, n, 2):
        piv = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            a[k + 1], a[piv] = a[piv], a[k + 1]
            for row in a:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            result = -result
        p = a[k][k + 1]
        result *= p
        for i in range(k + 2, n):
            beta = a[k][i] / p
            alpha = -a[k + 1][i] / p
            if beta == 0 and alpha == 0:
                continue
            # v_i <- v_i - alpha v_k - beta v_(k+1), applied to rows and columns
            for j in range(n):
                a[i][j] -= alpha * a[k][j] + beta * a[k + 1][j]
            for j in range(n):
                a[j][i] -= alpha * a[j][k] + beta * a[j][k + 1]
    return result


def _pfaffian_expansion(a: list[list[Fraction]]) -> Fraction:
    """Expansion along the first remaining row, memoised on the set of remaining indices."""
    n = len(a)
    memo: dict[int, Fraction] = {0: Fraction(1)}

    def pf(mask: int) -> Fraction:
        if mask in memo:
            return memo[mask]
        idx = [i for i in range(n) if mask >> i & 1]
        first = idx[0]
        total = Fraction(0)
        for pos, j in enumerate(idx[1:]):
            v = a[first][j]
            if v:
                sub = pf(mask & ~(1 << first) & ~(1 << j))
                total += v * sub if pos % 2 == 0 else -v * sub
        memo[mask] = total
        return total

    return pf((1 << n) - 1)


def pfaffian(m, check: bool = True) -> Fraction:
    """Pf of an even skew-symmetric matrix by expansion along the first row; Pf^2 = det is asserted."""
    rows = _fraction_rows(m)
    n = len(rows)
    if n % 2:
        raise MatrixError("Pfaffian needs even size")
    if not is_skew(rows):
        raise MatrixError("matrix is not skew-symmetric")
    value = _pfaffian_expansion(rows)
    if check and n:
        det = to_fraction(matrix(rows).det())
        if value * value != det:
            raise MatrixError(f"Pf^2 = {value * value} but det = {det}")
    return value


def pfaffian_elimination(m) -> Fraction:
    """Pf by skew congruence elimination; the fast route used for gradients."""
    rows = _fraction_rows(m)
    if len(rows) % 2 or not is_skew(rows):
        raise MatrixError("Pfaffian needs an even skew-symmetric matrix")
    return _pfaffian_rows(rows) if rows else Fraction(1)


def pf_orientation(n: int) -> int:
    """Sign in front of Pf(J X) on so(2n), chosen so the very even orbit tagged 1 takes the + sign."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


def pf_invariant(m: DomainMatrix) -> Fraction:
    """The Pfaffian as an invariant on so(2n), pf_orientation(n) * Pf(J M)."""
    real = AlgebraRealization("so", m.shape[0])
    return pf_orientation(m.shape[0] // 2) * pfaffian(real.form * m)


def _minor(rows, drop: Iterable[int]) -> list[list[Fraction]]:
    drop = set(drop)
    keep = [i for i in range(len(rows)) if i not in drop]
    return [[rows[i][j] for j in keep] for i in keep]


def pfaffian_partials(m) -> list[list[Fraction]]:
    """dPf/da_ij for i < j (0-based): (-1)^(i+j+1) Pf of the minor without rows/columns i, j."""
    rows = _fraction_rows(m)
    n = len(rows)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            sign = -1 if (i + j) % 2 == 0 else 1
            out[i][j] = sign * _pfaffian_rows(_minor(rows, (i, j)))
    return out


def pfaffian_gradient(m: DomainMatrix, real: AlgebraRealization) -> list[Fraction]:
    """d/dt pf_invariant(M + t B)|_{t=0} for every basis element B of so(2n)."""
    if real.kind != "so" or real.size % 2 or m.shape[0] != real.size:
        raise MatrixError("Pfaffian gradient needs so(2n) and a matching matrix")
    j = real.form
    sign = pf_orientation(real.size // 2)
    partial = pfaffian_partials(j * m)
    n = real.size
    out = []
    for b in real.basis:
        jb = _fraction_rows(j * b)
        out.append(sign * sum(partial[r][c] * jb[r][c] for r in range(n) for c in range(r + 1, n)))
    return out


# ---------------------------------------------------------------------------
# trace invariants and the circle product


def trace_invariant(m: DomainMatrix, d: int) -> Fraction:
    return to_fraction(trace(mpow(m, d)))


def trace_gradient(m: DomainMatrix, d: int, real: AlgebraRealization) -> list[Fraction]:
    """d tr(X^d) along each basis element: d * tr(M^(d-1) B)."""
    p = mpow(m, d - 1)
    return [d * to_fraction(trace_product(p, b)) for b in real.basis]


def _dot_dual(u: Sequence, v: Sequence, real: AlgebraRealization) -> Fraction:
    gi = real.gram_inverse.to_list()
    total = QQ(0)
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = gi[i]
        total += qq(ui) * sum((row[k] * qq(vk) for k, vk in enumerate(v) if vk != 0), QQ(0))
    return to_fraction(total)


def circle_product_trace(a: int, b: int, m: DomainMatrix, real: AlgebraRealization) -> Fraction:
    """(p o q)(M) for p = tr(X^(a+1)), q = tr(X^(b+1)), using trace-form dual bases."""
    return _dot_dual(trace_gradient(m, a + 1, real), trace_gradient(m, b + 1, real), real)


def hessian_trace(m: DomainMatrix, a: int, real: AlgebraRealization) -> list[list[Fraction]]:
    """H_ji = d^2 tr(X^(a+1)) / dx_j dx_i = (a+1) sum_{r+s=a-1} tr(M^r B_j M^s B_i)."""
    basis = real.basis
    powers = [mpow(m, r) for r in range(max(a, 1))]
    flat_b = [_fraction_rows(b) for b in basis]
    out = []
    for bj in basis:
        k = zeros(real.size)
        for r in range(a):
            k = k + powers[r] * bj * powers[a - 1 - r]
        kr = _fraction_rows(k)
        n = real.size
        out.append([(a + 1) * sum(kr[x][y] * bi[y][x] for x in range(n) for y in range(n)) for bi in flat_b])
    return out


@dataclass(frozen=True)
class EulerCheck:
    lhs: Fraction
    rhs: Fraction
    circle: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def euler_check(a: int, b: int, m: DomainMatrix, real: AlgebraRealization) -> EulerCheck:
    """sum_j x_j w_j = a * (p o q) with w_j = sum_i H_ji dq/dy_i, p of degree a+1."""
    coords = [to_fraction(c) for c in real.coordinates(m)]
    hess = hessian_trace(m, a, real)
    gq = trace_gradient(m, b + 1, real)
    gi = real.gram_inverse.to_list()
    dual_q = [to_fraction(sum((row[k] * qq(v) for k, v in enumerate(gq) if v), QQ(0))) for row in gi]
    w = [sum(hj[i] * dual_q[i] for i in range(len(dual_q))) for hj in hess]
    lhs = sum(x * wj for x, wj in zip(coords, w))
    circ = circle_product_trace(a, b, m, real)
    return EulerCheck(lhs, a * circ, circ)


# ---------------------------------------------------------------------------
# very even orbits


@dataclass(frozen=True)
class VeryEvenResult:
    sign: int
    slope: Fraction
    trace_slope: Fraction
    pf_slope: Fraction


def very_even_check(rep: NilpotentRep, samples: Sequence[Fraction] = (Fraction(1), Fraction(2), Fraction(-3, 2))) -> VeryEvenResult:
    """The c in {1, -1} with grad(tr(X^n)/2n + c Pf(X)) = 0 at e, for e of type [n,n], n even."""
    real = rep.realization
    size = real.size
    n = size // 2
    if real.kind != "so" or rep.partition != (n, n) or n % 2:
        raise MatrixError("very_even_check needs [n,n] in so(2n) with n even")
    fpow = mpow(rep.f, n - 1)
    if not real.contains(fpow):
        raise MatrixError("f^(n-1) is not in the algebra")
    slope = None
    tr_slope = pf_slope = None
    for x in samples:
        sx = rep.e + fpow * qq(x)
        power = mpow(sx, n)
        lam = to_fraction(power.to_list()[0][0])
        if not same(power, eye(size) * qq(lam)):
            raise MatrixError("s(x)^n is not scalar")
        a = lam / x
        if slope is None:
            slope = a
        elif a != slope:
            raise MatrixError("s(x)^n is not linear in x")
        tr = trace_invariant(sx, n)
        if tr != 2 * n * a * x:
            raise MatrixError("tr(s(x)^n) != 2n a x")
        pf = pf_invariant(sx)
        if pf * pf != (a * x) ** 2:
            raise MatrixError("Pf(s(x))^2 != (a x)^2")
        tr_slope, pf_slope = tr / x, pf / x
    grad_tr = [g / (2 * n) for g in trace_gradient(rep.e, n, real)]
    grad_pf = pfaffian_gradient(rep.e, real)
    signs = [c for c in (1, -1) if all(t + c * p == 0 for t, p in zip(grad_tr, grad_pf))]
    if len(signs) != 1:
        raise MatrixError(f"expected exactly one working sign, found {signs}")
    return VeryEvenResult(signs[0], slope, tr_slope, pf_slope)


# ---------------------------------------------------------------------------
# degree condition and two-generator ideals


@dataclass(frozen=True)
class Copy:
    """A copy of the adjoint module, labelled by exponent and by the invariant it comes from."""

    exponent: int
    kind: str = "tr"  # tr, pf or mix (D_n, n even: tr(X^n)/2n +- Pf)

    @property
    def degree(self) -> int:
        return self.exponent + 1

    def __str__(self) -> str:
        if self.kind == "pf":
            return "grad Pf"
        if self.kind == "mix":
            return "grad(tr(X^n)/2n +- Pf)"
        return f"V_{self.exponent}"


def _d_even(datum: RootDatum) -> bool:
    return datum.rtype.family == "D" and datum.rank % 2 == 0


def degree_condition(d_k: int, d_l: int, datum: RootDatum, kind_k: str = "tr", kind_l: str = "tr") -> bool:
    """Whether the ideal of the copy from f_l contains the copy from f_k.

    The plain criterion is d_k - d_l + 2 in the degrees; in D_n, n even, a
    Pfaffian source only reaches d_k = 2n - 2, and a degree-n target other
    than tr(X^n) is reached only from d_l = 2.
    """
    degs = degrees(datum)
    if d_k not in degs or d_l not in degs:
        raise MatrixError(f"degrees {d_k}, {d_l} are not both degrees of {datum.rtype}")
    plain = (d_k - d_l + 2) in degs
    if _d_even(datum):
        n = datum.rank
        if kind_l == "pf":
            return plain and (d_k == 2 * n - 2 or (d_k == d_l and kind_k == "pf"))
        if d_k == n and kind_k != "tr" and not (kind_l == kind_k and d_l == d_k):
            return plain and d_l == 2
    return plain


def contains(source: Copy, target: Copy, datum: RootDatum) -> bool:
    if source == target:
        return True
    if target.degree < source.degree:
        return False
    return degree_condition(target.degree, source.degree, datum, target.kind, source.kind)


def closure(source: Copy, pool: Iterable[Copy], datum: RootDatum) -> set[Copy]:
    return {c for c in pool if contains(source, c, datum)}


def _copy_key(c: Copy) -> tuple[int, int]:
    return (c.degree, ("pf", "tr", "mix").index(c.kind))


def _pair_key(pair: "TwoGenerated") -> tuple:
    return tuple(_copy_key(g) for g in pair.generators)


def minimal_generators(ideal: Iterable[Copy], datum: RootDatum) -> list[Copy]:
    """Copies in the ideal not contained in the principal ideal of another member."""
    members = sorted(set(ideal), key=_copy_key)
    return [c for c in members if not any(o != c and contains(o, c, datum) for o in members)]


def adjoint_copies(datum: RootDatum) -> list[Copy]:
    """Copies of V_theta in C[N], one per fundamental invariant (D_n: Pf gives the degree n-1 copy)."""
    if datum.rtype.family == "D":
        n = datum.rank
        out = [Copy(2 * i - 1) for i in range(1, n)]
        out.append(Copy(n - 1, "pf"))
        return sorted(out, key=lambda c: (c.exponent, c.kind != "pf"))
    return [Copy(d - 1) for d in degrees(datum)]


@dataclass(frozen=True)
class TwoGenerated:
    ideal: tuple[Copy, ...]
    generators: tuple[Copy, ...]

    def label(self) -> tuple[str, str]:
        return tuple(str(g) for g in self.generators)


def minimal_pairs(datum: RootDatum) -> list[TwoGenerated]:
    """Ideals needing two generating copies.

    Types A and E: the ideals spanned by the top s copies, s = 1..n.  Type D:
    the ideals generated by X^(2i+1) together with the Pfaffian copy (or, for
    n even, the tr(X^n)/2n +- Pf copy).
    """
    f = datum.rtype.family
    if f not in "ADE":
        raise MatrixError("minimal_pairs covers the simply-laced types")
    copies = adjoint_copies(datum)
    out: list[TwoGenerated] = []
    if f in "AE":
        ordered = sorted(copies, key=lambda c: c.exponent)
        for s in range(1, len(ordered) + 1):
            ideal = ordered[-s:]
            gens = minimal_generators(ideal, datum)
            if len(gens) > 2:
                raise MatrixError(f"ideal {[str(c) for c in ideal]} needs {len(gens)} generators")
            if len(gens) == 2:
                out.append(TwoGenerated(tuple(ideal), tuple(gens)))
        return sorted(out, key=_pair_key)
    n = datum.rank
    odd = [c for c in copies if c.kind == "tr"]
    specials = [Copy(n - 1, "pf")] + ([Copy(n - 1, "mix")] if n % 2 == 0 else [])
    pool = copies + specials[1:]
    seen = set()
    for sp in specials:
        for x in odd:
            ideal = frozenset(closure(sp, pool, datum) | closure(x, pool, datum))
            gens = minimal_generators(ideal, datum)
            if len(gens) == 2 and ideal not in seen:
                seen.add(ideal)
                out.append(TwoGenerated(tuple(sorted(ideal, key=_copy_key)), tuple(gens)))
    return sorted(out, key=_pair_key)


# ---------------------------------------------------------------------------
# orbit verification


@dataclass(frozen=True)
class CopyCheck:
    degree: int
    realization: str
    flagged: bool
    vanishes: bool

    @property
    def agrees(self) -> bool:
        return self.flagged == self.vanishes


def evaluate_copy(realization: str, rep: NilpotentRep, sign: int | None = None) -> bool:
    """Whether the named copy vanishes at the representative."""
    real = rep.realization
    if realization.startswith("X^"):
        return power_vanishes(rep, int(realization[2:]))
    if realization == "grad Pf restricted from so(2n+2)":
        big = embed_odd_orthogonal(rep.e)
        return all(v == 0 for v in pfaffian_gradient(big, AlgebraRealization("so", big.shape[0])))
    if realization == "grad Pf":
        return all(v == 0 for v in pfaffian_gradient(rep.e, real))
    if realization.startswith("grad(tr(X^n)/2n"):
        c = 1 if "+ Pf" in realization else -1
        n = real.size // 2
        grad_tr = [g / (2 * n) for g in trace_gradient(rep.e, n, real)]
        grad_pf = pfaffian_gradient(rep.e, real)
        return all(t + c * p == 0 for t, p in zip(grad_tr, grad_pf))
    raise MatrixError(f"no matrix test for {realization!r}")


@lru_cache(maxsize=None)
def _rep_cached(partition: tuple[int, ...], kind: str, size: int, tag: int | None) -> NilpotentRep:
    return jordan_rep(partition, AlgebraRealization(kind, size), tag)


def orbit_rep(theta: Sequence[int], datum: RootDatum) -> NilpotentRep:
    from .orbits import richardson_orbit

    orbit = richardson_orbit(theta, datum)
    real = realization_for(datum)
    return _rep_cached(orbit.partition, real.kind, real.size, orbit.very_even_tag)


def verify_orbit(theta: Sequence[int], datum: RootDatum) -> list[CopyCheck]:
    """Compare the vanishing flags of every copy of V_phi with the matrix evaluation."""
    from .orbits import vanishing_copies

    rep = orbit_rep(theta, datum)
    out = []
    for copy in vanishing_copies(theta, datum):
        out.append(CopyCheck(copy.degree, copy.realization, copy.flagged, evaluate_copy(copy.realization, rep)))
    return out
