"""Root systems of the simple Lie algebras in Bourbaki numbering.

Weights live in simple-root coordinates.  The Cartan matrix is stored as
``cartan[i][j] = <alpha_i, alpha_j^vee>`` so the pairing of a weight with the
coroot of ``alpha_j`` is the dot product of its coordinates with column ``j``.
Simple-root indices are 1-based everywhere in the public API.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

Weight = tuple[int, ...]

FAMILIES = "ABCDEFG"

# dim g for the simple Lie algebras, used only as a cross-check on root counts
_DIMENSION = {
    "A": lambda n: n * (n + 2),
    "B": lambda n: n * (2 * n + 1),
    "C": lambda n: n * (2 * n + 1),
    "D": lambda n: n * (2 * n - 1),
    "E": lambda n: {6: 78, 7: 133, 8: 248}[n],
    "F": lambda n: 52,
    "G": lambda n: 14,
}


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        f, n = self.family, self.rank
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }.get(f)
        if not ok:
            raise RootSystemError(f"no simple root system of type {f}{n}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    @property
    def dimension(self) -> int:
        return _DIMENSION[self.family](self.rank)

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise RootSystemError(f"cannot parse root system type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))


def _edges(family: str, n: int) -> list[tuple[int, int]]:
    """Dynkin diagram edges (1-based, unordered)."""
    if family in "ABCFG":
        return [(i, i + 1) for i in range(1, n)]
    if family == "D":
        return [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    # E_n: chain 1-3-4-5-...-n with 2 attached to 4
    return [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, n)]


def _squared_lengths(family: str, n: int) -> list[int]:
    """Squared lengths of the simple roots, short roots normalised to 1 (or 2 if simply laced)."""
    if family == "B":
        return [2] * (n - 1) + [1]
    if family == "C":
        return [1] * (n - 1) + [2]
    if family == "F":
        return [2, 2, 1, 1]
    if family == "G":
        return [1, 3]
    return [2] * n


def cartan_matrix(rtype: RootSystemType) -> tuple[tuple[int, ...], ...]:
    n = rtype.rank
    lengths = _squared_lengths(rtype.family, n)
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    for a, b in _edges(rtype.family, n):
        i, j = a - 1, b - 1
        # <alpha_i, alpha_j^vee> = 2 (a_i, a_j) / (a_j, a_j); the longer root picks up the multiplicity
        if lengths[i] >= lengths[j]:
            c[i][j] = -(lengths[i] // lengths[j])
            c[j][i] = -1
        else:
            c[i][j] = -1
            c[j][i] = -(lengths[j] // lengths[i])
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class RootDatum:
    rtype: RootSystemType
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Weight, ...]
    lengths: tuple[str, ...]
    simple_squared_lengths: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.rtype.rank

    @property
    def simple_roots(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def simple(self, i: int) -> Weight:
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def is_short_simple(self, i: int) -> bool:
        return self.simple_squared_lengths[i - 1] == min(self.simple_squared_lengths)

    def is_long_simple(self, i: int) -> bool:
        return not self.rtype.simply_laced and not self.is_short_simple(i)

    def short_simple_roots(self) -> tuple[int, ...]:
        return tuple(i for i in self.simple_roots if self.is_short_simple(i))

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.cartan[i - 1][j - 1] != 0

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in self.simple_roots if self.adjacent(i, j))

    def short_positive_roots(self) -> tuple[Weight, ...]:
        return tuple(r for r, tag in zip(self.positive_roots, self.lengths) if tag == "short")

    def is_root(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        return w in _root_set(self) or tuple(-c for c in w) in _root_set(self)

    def is_short_root(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        if any(c < 0 for c in w):
            w = tuple(-c for c in w)
        idx = _root_index(self).get(w)
        return idx is not None and self.lengths[idx] == "short"

    def __str__(self) -> str:
        return str(self.rtype)


@lru_cache(maxsize=None)
def _root_set(datum: RootDatum) -> frozenset[Weight]:
    return frozenset(datum.positive_roots)


@lru_cache(maxsize=None)
def _root_index(datum: RootDatum) -> dict[Weight, int]:
    return {r: k for k, r in enumerate(datum.positive_roots)}


def pairing(weight: Sequence[int], i: int, datum: RootDatum) -> int:
    """<weight, alpha_i^vee>."""
    col = i - 1
    return sum(c * datum.cartan[k][col] for k, c in enumerate(weight))


def pairings(weight: Sequence[int], datum: RootDatum) -> tuple[int, ...]:
    return tuple(pairing(weight, i, datum) for i in datum.simple_roots)


def reflect(weight: Sequence[int], i: int, datum: RootDatum) -> Weight:
    p = pairing(weight, i, datum)
    return tuple(c - p if k == i - 1 else c for k, c in enumerate(weight))


def height(weight: Sequence[int]) -> int:
    return sum(weight)


def add(*weights: Sequence[int]) -> Weight:
    return tuple(sum(cs) for cs in zip(*weights))


def scale(k: int, weight: Sequence[int]) -> Weight:
    return tuple(k * c for c in weight)


def inner_product(u: Sequence[int], v: Sequence[int], datum: RootDatum) -> Fraction:
    """W-invariant form with (alpha_i, alpha_i) = simple_squared_lengths[i]."""
    sq = datum.simple_squared_lengths
    total = Fraction(0)
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            if vj:
                # (a_i, a_j) = <a_i, a_j^vee> (a_j, a_j) / 2
                total += ui * vj * Fraction(datum.cartan[i][j] * sq[j], 2)
    return total


@lru_cache(maxsize=None)
def build(rtype: RootSystemType) -> RootDatum:
    n = rtype.rank
    cartan = cartan_matrix(rtype)
    sq = tuple(_squared_lengths(rtype.family, n))
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for i in range(n):
                p = sum(c * cartan[k][i] for k, c in enumerate(root))
                image = tuple(c - p if k == i else c for k, c in enumerate(root))
                if all(c >= 0 for c in image) and any(image) and image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    roots = tuple(sorted(found, key=lambda r: (sum(r), r)))

    proto = RootDatum(rtype, cartan, roots, (), sq)
    norms = [inner_product(r, r, proto) for r in roots]
    short = min(norms)
    if rtype.simply_laced:
        tags = tuple("short" for _ in roots)
    else:
        tags = tuple("short" if v == short else "long" for v in norms)
    return RootDatum(rtype, cartan, roots, tags, sq)


def build_from_string(text: str) -> RootDatum:
    return build(RootSystemType.parse(text))


def dominant_short_root(datum: RootDatum) -> Weight:
    """The highest short root phi (equal to theta when simply laced)."""
    return _dominant(datum, "short")


def dominant_long_root(datum: RootDatum) -> Weight:
    if datum.rtype.simply_laced:
        return _dominant(datum, "short")
    return _dominant(datum, "long")


def _dominant(datum: RootDatum, tag: str) -> Weight:
    candidates = [
        r
        for r, t in zip(datum.positive_roots, datum.lengths)
        if t == tag and all(p >= 0 for p in pairings(r, datum))
    ]
    if len(candidates) != 1:
        raise RootSystemError(f"expected a unique dominant {tag} root in {datum}")
    return candidates[0]


def is_orthogonal_short(indices: Iterable[int], datum: RootDatum) -> bool:
    idx = sorted(set(indices))
    if any(not 1 <= i <= datum.rank for i in idx):
        return False
    if not all(datum.is_short_simple(i) for i in idx):
        return False
    return all(datum.cartan[i - 1][j - 1] == 0 for i, j in combinations(idx, 2))


def orthogonal_short_subsets(
    datum: RootDatum, within: Iterable[int] | None = None
) -> list[tuple[int, ...]]:
    """All orthogonal sets of short simple roots (including the empty set), sorted by size then lex."""
    pool = [i for i in (within if within is not None else datum.simple_roots) if datum.is_short_simple(i)]
    out: list[tuple[int, ...]] = []
    for k in range(len(pool) + 1):
        for combo in combinations(sorted(pool), k):
            if is_orthogonal_short(combo, datum):
                out.append(combo)
    return out


def orthogonal_to(weight: Sequence[int], datum: RootDatum) -> tuple[int, ...]:
    """Simple roots alpha with <weight, alpha^vee> = 0."""
    return tuple(i for i in datum.simple_roots if pairing(weight, i, datum) == 0)


@dataclass(frozen=True)
class Folding:
    source: RootSystemType
    target: RootSystemType
    perm: dict[int, int]  # epsilon on simple-root indices
    order: int

    @property
    def fixed(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, j in self.perm.items() if i == j))

    @property
    def moved(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, j in self.perm.items() if i != j))


def folding(datum: RootDatum, order: int = 2) -> Folding:
    """Diagram automorphism epsilon and the folded type.

    D_{n+1} -> B_n, A_{2n-1} -> C_n, E_6 -> F_4 for order 2; D_4 -> G_2 for order 3.
    Fixed nodes become long simple roots of the folded type, moved nodes short ones.
    """
    f, n = datum.rtype.family, datum.rank
    ident = {i: i for i in range(1, n + 1)}
    if order == 3:
        if (f, n) != ("D", 4):
            raise RootSystemError(f"{datum} has no order-3 diagram automorphism")
        return Folding(datum.rtype, RootSystemType("G", 2), {**ident, 1: 3, 3: 4, 4: 1}, 3)
    if order != 2:
        raise RootSystemError(f"unsupported folding order {order}")
    if f == "D":
        return Folding(datum.rtype, RootSystemType("B", n - 1), {**ident, n - 1: n, n: n - 1}, 2)
    if f == "A" and n % 2 == 1 and n >= 3:
        return Folding(datum.rtype, RootSystemType("C", (n + 1) // 2), {i: n + 1 - i for i in ident}, 2)
    if f == "E" and n == 6:
        return Folding(datum.rtype, RootSystemType("F", 4), {**ident, 1: 6, 6: 1, 3: 5, 5: 3}, 2)
    raise RootSystemError(f"{datum} admits no folding to a non-simply-laced type")
