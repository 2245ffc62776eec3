"""Exponents and generalized exponents from root heights.

Both lists are dual partitions of height histograms: the exponents come from
all positive roots, the generalized exponents of V_phi from the short ones.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rootsys import RootDatum, RootSystemError, build, folding, height


def dual_partition(parts: Sequence[int]) -> list[int]:
    """Conjugate of a partition, returned in ascending order."""
    parts = [p for p in parts if p > 0]
    if not parts:
        return []
    top = max(parts)
    return sorted(sum(1 for p in parts if p >= k) for k in range(1, top + 1))


def height_histogram(roots: Iterable[Sequence[int]]) -> list[int]:
    counts = Counter(height(r) for r in roots)
    if not counts:
        return []
    return [counts.get(h, 0) for h in range(1, max(counts) + 1)]


def exponents(datum: RootDatum) -> list[int]:
    return dual_partition(height_histogram(datum.positive_roots))


def generalized_exponents_phi(datum: RootDatum) -> list[int]:
    return dual_partition(height_histogram(datum.short_positive_roots()))


def degrees(datum: RootDatum) -> list[int]:
    return [m + 1 for m in exponents(datum)]


@dataclass(frozen=True)
class DegreeSplit:
    f0_degrees: tuple[int, ...]
    f1_degrees: tuple[int, ...]


def degree_split(datum: RootDatum, order: int = 2) -> DegreeSplit:
    """Split the degrees of a simply-laced type into epsilon-invariant and anti-invariant parts.

    F0 - 1 must be the exponents of the folded algebra and F1 - 1 its
    generalized phi-exponents.  For the order-3 folding of D4 the non-invariant
    part carries each phi-exponent twice (one per nontrivial eigenvalue).
    """
    fold = folding(datum, order)
    folded = build(fold.target)
    remaining = Counter(degrees(datum))
    f0 = [m + 1 for m in exponents(folded)]
    for d in f0:
        if remaining[d] == 0:
            raise RootSystemError(f"degree {d} of {fold.target} missing from {datum}")
        remaining[d] -= 1
    f1 = sorted(remaining.elements())
    phi_exps = generalized_exponents_phi(folded)
    expected = sorted(phi_exps * (order - 1))
    if [d - 1 for d in f1] != expected:
        raise RootSystemError(f"anti-invariant degrees {f1} do not match phi-exponents {phi_exps}")
    return DegreeSplit(tuple(f0), tuple(f1))
