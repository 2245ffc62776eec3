"""Richardson orbits induced from orthogonal short simple roots.

For Theta a set of orthogonal short simple roots the parabolic P_Theta has
Levi factor with root system Theta, and O_Theta is the orbit dense in its
nilradical.  Classical orbits are identified by partitions, exceptional ones
by a bundled table of Bala-Carter labels and weighted Dynkin diagrams.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .exponents import degrees, generalized_exponents_phi
from .rootsys import (
    RootDatum,
    dominant_long_root,
    dominant_short_root,
    is_orthogonal_short,
)

FIRST, SECOND = "First", "Second"
TABLE_ENV = "NILGEN_ORBIT_TABLE"


class OrbitError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitDescriptor:
    family_type: str
    theta: tuple[int, ...]
    label: str
    partition: tuple[int, ...] | None
    weighted_dynkin: tuple[int, ...]
    very_even_tag: int | None = None

    @property
    def s(self) -> int:
        return len(self.theta)

    def to_json(self) -> dict:
        out = {"label": self.label, "theta": list(self.theta), "weighted_dynkin": list(self.weighted_dynkin)}
        if self.partition is not None:
            out["partition"] = list(self.partition)
        if self.very_even_tag is not None:
            out["very_even_tag"] = self.very_even_tag
        return out


# ---------------------------------------------------------------------------
# exceptional table


@lru_cache(maxsize=None)
def _load_table(path: str | None) -> tuple[dict, ...]:
    if path is None:
        text = resources.files("nilgen").joinpath("data/exceptional_orbits.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = json.loads(text)["orbits"]
    for row in rows:
        for key in ("type", "label", "s", "weighted_dynkin", "theta_class"):
            if key not in row:
                raise OrbitError(f"orbit table row missing {key!r}: {row}")
    return tuple(rows)


def exceptional_table(path: str | None = None) -> tuple[dict, ...]:
    return _load_table(path or os.environ.get(TABLE_ENV))


def exceptional_row(theta: Sequence[int], datum: RootDatum, path: str | None = None) -> dict:
    key = sorted(theta)
    for row in exceptional_table(path):
        if row["type"] == str(datum.rtype) and key in row["theta_class"]:
            return row
    raise OrbitError(f"no table entry for theta={key} in {datum.rtype}")


def theta_for_label(label: str, datum: RootDatum, path: str | None = None) -> tuple[int, ...]:
    """A representative Theta for a named exceptional orbit."""
    for row in exceptional_table(path):
        if row["type"] == str(datum.rtype) and row["label"] == label:
            return tuple(row["theta_class"][0])
    raise OrbitError(f"unknown orbit {label!r} in {datum.rtype}")


# ---------------------------------------------------------------------------
# classical partitions and weighted Dynkin diagrams


def _check_theta(theta: Sequence[int], datum: RootDatum) -> tuple[int, ...]:
    th = tuple(sorted(set(theta)))
    if not th:
        raise OrbitError("Theta must be nonempty")
    if not is_orthogonal_short(th, datum):
        raise OrbitError(f"Theta={list(th)} is not a set of orthogonal short simple roots")
    return th


def classical_partition(theta: Sequence[int], datum: RootDatum) -> tuple[tuple[int, ...], int | None]:
    th = _check_theta(theta, datum)
    f, n, s = datum.rtype.family, datum.rank, len(th)
    if f == "A":
        return tuple(sorted((n + 1 - s, s), reverse=True)), None
    if f == "B":
        return (2 * n - 1, 1, 1), None
    if f == "C":
        return tuple(sorted((2 * n - 2 * s, 2 * s), reverse=True)), None
    if f == "D":
        spinors = {n - 1, n} & set(th)
        if len(spinors) == 2:
            return tuple(sorted((2 * n - 2 * s + 1, 2 * s - 3, 1, 1), reverse=True)), None
        if 2 * s == n:
            return (n, n), 1 if n - 1 in th else 2
        return (2 * n - 2 * s - 1, 2 * s + 1), None
    raise OrbitError(f"{datum.rtype} is not classical")


def partition_weighted_dynkin(
    partition: Sequence[int], family: str, n: int, very_even_tag: int | None = None
) -> tuple[int, ...]:
    """alpha_i(h) from the eigenvalues p-1, p-3, ..., 1-p of h on the natural module."""
    eig = sorted((p - 1 - 2 * k for p in partition for k in range(p)), reverse=True)
    if family == "A":
        return tuple(eig[i] - eig[i + 1] for i in range(n))
    top = eig[:n]
    vals = [top[i] - top[i + 1] for i in range(n - 1)]
    if family == "B":
        vals.append(top[n - 1])
    elif family == "C":
        vals.append(2 * top[n - 1])
    elif family == "D":
        vals.append(top[n - 2] + top[n - 1])
        if very_even_tag == 2:
            vals[n - 2], vals[n - 1] = vals[n - 1], vals[n - 2]
    else:
        raise OrbitError(f"no natural module for family {family}")
    return tuple(vals)


def _partition_label(partition: Sequence[int], tag: int | None) -> str:
    text = "[" + ",".join(map(str, partition)) + "]"
    return f"{text}^{tag}" if tag else text


def richardson_orbit(theta: Sequence[int], datum: RootDatum, table: str | None = None) -> OrbitDescriptor:
    th = _check_theta(theta, datum)
    f, n = datum.rtype.family, datum.rank
    if f in "ABCD":
        part, tag = classical_partition(th, datum)
        wd = partition_weighted_dynkin(part, f, n, tag)
        return OrbitDescriptor(str(datum.rtype), th, _partition_label(part, tag), part, wd, tag)
    row = exceptional_row(th, datum, table)
    return OrbitDescriptor(str(datum.rtype), th, row["label"], None, tuple(row["weighted_dynkin"]))


def weighted_dynkin(orbit: OrbitDescriptor, datum: RootDatum) -> tuple[int, ...]:
    return orbit.weighted_dynkin


def _evaluate(weight: Sequence[int], h: Sequence[int]) -> int:
    return sum(c * v for c, v in zip(weight, h))


def phi_of_h(orbit: OrbitDescriptor, datum: RootDatum) -> int:
    return _evaluate(dominant_short_root(datum), orbit.weighted_dynkin)


def theta_of_h(orbit: OrbitDescriptor, datum: RootDatum) -> int:
    return _evaluate(dominant_long_root(datum), orbit.weighted_dynkin)


def richardson_dimension(theta: Sequence[int], datum: RootDatum) -> int:
    """dim O_Theta = 2 dim n_Theta; the Levi has exactly s positive roots."""
    s = len(_check_theta(theta, datum))
    return datum.rtype.dimension - datum.rank - 2 * s


def graded_dimensions(h: Sequence[int], datum: RootDatum) -> dict[int, int]:
    """dim g_k for the grading by h (k >= 0)."""
    dims = {0: datum.rank}
    for root in datum.positive_roots:
        k = _evaluate(root, h)
        dims[k] = dims.get(k, 0) + (2 if k == 0 else 1)
    return dims


def orbit_dimension_from_h(h: Sequence[int], datum: RootDatum) -> int:
    dims = graded_dimensions(h, datum)
    return datum.rtype.dimension - dims.get(0, 0) - dims.get(1, 0)


def check_orbit(orbit: OrbitDescriptor, datum: RootDatum) -> None:
    """Dimension self-check of a table or partition row against Theta."""
    got = orbit_dimension_from_h(orbit.weighted_dynkin, datum)
    want = richardson_dimension(orbit.theta, datum)
    if got != want:
        raise OrbitError(f"{orbit.label}: h-grading gives dim {got}, Richardson dimension is {want}")
    if any(v not in (0, 1, 2) for v in orbit.weighted_dynkin):
        raise OrbitError(f"{orbit.label}: weighted Dynkin values outside {{0,1,2}}")


# ---------------------------------------------------------------------------
# families and generators


def classify_family(theta: Sequence[int], datum: RootDatum) -> str:
    """First iff m^phi_{r-s+1} > phi(h)/2."""
    orbit = richardson_orbit(theta, datum)
    m = _phi_exponent(datum, datum_r(datum) - orbit.s + 1)
    return FIRST if 2 * m > phi_of_h(orbit, datum) else SECOND


def datum_r(datum: RootDatum) -> int:
    return len(datum.short_simple_roots())


def _phi_exponent(datum: RootDatum, position: int) -> int:
    exps = generalized_exponents_phi(datum)
    if not 1 <= position <= len(exps):
        raise OrbitError(f"no generalized exponent m^phi_{position} in {datum.rtype}")
    return exps[position - 1]


def _m_theta_position(theta: Sequence[int], datum: RootDatum) -> int:
    r, s = datum_r(datum), len(theta)
    return r - s + 1 if classify_family(theta, datum) == FIRST else -(-r // 2)


def m_theta(theta: Sequence[int], datum: RootDatum) -> int:
    return _phi_exponent(datum, _m_theta_position(theta, datum))


@dataclass(frozen=True)
class LabeledDegree:
    degree: int
    kind: str  # "tr", "pf" or "f"
    text: str


def labeled_degrees(datum: RootDatum) -> list[LabeledDegree]:
    """Fundamental invariants with their degrees, sorted; in D ties put Pf before tr."""
    f, n = datum.rtype.family, datum.rank
    if f == "A":
        out = [LabeledDegree(k, "tr", f"tr(X^{k})") for k in range(2, n + 2)]
    elif f in "BC":
        out = [LabeledDegree(2 * k, "tr", f"tr(X^{2 * k})") for k in range(1, n + 1)]
    elif f == "D":
        out = [LabeledDegree(2 * k, "tr", f"tr(X^{2 * k})") for k in range(1, n)]
        out.append(LabeledDegree(n, "pf", "Pf(X)"))
        out.sort(key=lambda d: (d.degree, d.kind != "pf"))
    else:
        out = [LabeledDegree(d, "f", f"f{i}") for i, d in enumerate(degrees(datum), 1)]
    if [d.degree for d in out] != degrees(datum):
        raise OrbitError(f"labeled degrees disagree with exponents for {datum.rtype}")
    return out


_TWO_COPY_LABELS = {6: ("E6(a3)",), 7: ("E7(a3)", "E6(a1)"), 8: ("E8(a3)", "E8(a4)")}


def needs_second_copy(orbit: OrbitDescriptor, datum: RootDatum) -> bool:
    f = datum.rtype.family
    if f == "E":
        return orbit.label in _TWO_COPY_LABELS[datum.rank]
    if f == "D" and orbit.partition is not None:
        n, s = datum.rank, orbit.s
        return s >= 3 and orbit.partition == tuple(sorted((2 * n - 2 * s + 1, 2 * s - 3, 1, 1), reverse=True))
    return False


@dataclass(frozen=True)
class GeneratorSpec:
    orbit: str
    family: str
    m_theta: int
    v_degrees: tuple[int, ...]
    v_realization: tuple[str, ...]
    invariant_degrees: tuple[int, ...]
    invariant_realization: tuple[str, ...]
    invariant_indices: tuple[int, ...] = field(default=())
    v_modules: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "orbit": self.orbit,
            "family": self.family,
            "m_theta": self.m_theta,
            "v_degrees": list(self.v_degrees),
            "v_modules": list(self.v_modules or ("V_phi",) * len(self.v_degrees)),
            "invariant_degrees": list(self.invariant_degrees),
            "invariant_indices": list(self.invariant_indices),
            "realization": {"v": list(self.v_realization), "invariants": list(self.invariant_realization)},
        }


def very_even_realization(tag: int) -> str:
    sign = "+" if tag == 1 else "-"
    return f"grad(tr(X^n)/2n {sign} Pf(X))"


def _v_realization(orbit: OrbitDescriptor, datum: RootDatum, v_degrees: Sequence[int]) -> tuple[str, ...]:
    f, n = datum.rtype.family, datum.rank
    if f in "AC":
        return tuple(f"X^{m}" for m in v_degrees)
    if f == "B":
        return ("grad Pf restricted from so(2n+2)",)
    if f == "D":
        if orbit.very_even_tag:
            return (very_even_realization(orbit.very_even_tag),)
        out = []
        pf_used = False
        for m in v_degrees:
            if m == n - 1 and not pf_used and orbit.partition[-1] == 1:
                out.append("grad Pf")
                pf_used = True
            else:
                out.append(f"X^{m}")
        return tuple(out)
    return tuple(f"V_{m}" for m in v_degrees)


def generator_spec(theta: Sequence[int], datum: RootDatum) -> GeneratorSpec:
    orbit = richardson_orbit(theta, datum)
    fam = classify_family(theta, datum)
    r, n, s = datum_r(datum), datum.rank, orbit.s
    mt = m_theta(theta, datum)
    v = [mt]
    if needs_second_copy(orbit, datum):
        v.append(_phi_exponent(datum, r - s + 2))
    labeled = labeled_degrees(datum)
    if fam == FIRST:
        idx = list(range(1, n - s + 1))
    else:
        skip = -(-n // 2)
        idx = [i for i in range(1, n - s + 2) if i != skip]
    return GeneratorSpec(
        orbit=orbit.label,
        family=fam,
        m_theta=mt,
        v_degrees=tuple(v),
        v_realization=_v_realization(orbit, datum, v),
        invariant_degrees=tuple(labeled[i - 1].degree for i in idx),
        invariant_realization=tuple(labeled[i - 1].text for i in idx),
        invariant_indices=tuple(idx),
        v_modules=("V_phi",) * len(v),
    )


@dataclass(frozen=True)
class CopyFlag:
    position: int
    degree: int
    flagged: bool
    by_inequality: bool
    realization: str


def _copy_realization(position: int, degree: int, orbit: OrbitDescriptor, datum: RootDatum) -> str:
    f, n = datum.rtype.family, datum.rank
    if f in "AC":
        return f"X^{degree}"
    if f == "B":
        return "grad Pf restricted from so(2n+2)"
    if f == "D":
        if position == -(-n // 2):
            if orbit.very_even_tag:
                return very_even_realization(orbit.very_even_tag)
            return "grad Pf"
        return f"X^{degree}"
    return f"V_{degree}"


def vanishing_copies(theta: Sequence[int], datum: RootDatum) -> list[CopyFlag]:
    """Each copy of V_phi in C[N], with whether it lies in the ideal of O_Theta.

    A copy in degree m vanishes when m > phi(h)/2.  For the second family this
    catches s - 1 copies; the remaining one sits at m_Theta.
    """
    orbit = richardson_orbit(theta, datum)
    half = phi_of_h(orbit, datum)
    second = classify_family(theta, datum) == SECOND
    extra = _m_theta_position(theta, datum) if second else None
    out = []
    for pos, m in enumerate(generalized_exponents_phi(datum), 1):
        ineq = 2 * m > half
        out.append(CopyFlag(pos, m, ineq or pos == extra, ineq, _copy_realization(pos, m, orbit, datum)))
    return out


# ---------------------------------------------------------------------------
# folded orbits in non-simply-laced types


def folded_orbit_spec(case: str, n: int | None = None, s: int | None = None) -> GeneratorSpec:
    """Generators for the B_n, C_n (n odd) and F4(a2) cases obtained by folding."""
    key = case.upper().replace("_", "")
    if key == "B":
        if n is None or s is None or not 1 <= s or 2 * s - 1 > 2 * n - 2 * s + 1:
            raise OrbitError("type B folded case needs n and 1 <= s with 2s-1 <= 2n-2s+1")
        v, real, mods = [n], ["V_phi in degree n"], ["V_phi"]
        if s >= 2:
            v.append(2 * n - 2 * s + 1)
            real.append(f"X^{2 * n - 2 * s + 1}")
            mods.append("V_theta")
        inv = list(range(2, 2 * n - 2 * s + 1, 2))
        label = f"[{2 * n - 2 * s + 1},{2 * s - 1},1]"
    elif key == "C":
        if n is None or n % 2 == 0:
            raise OrbitError("type C folded case needs odd n")
        v, real, mods = [n], [f"X^{n}"], ["V_theta"]
        inv = list(range(2, n, 2))
        label = f"[{n},{n}]"
    elif key in ("F4(A2)", "F4A2"):
        return GeneratorSpec("F4(a2)", "", 7, (7, 8), ("V_7", "V_8"), (2, 6), ("f1", "f2"), (1, 2), ("V_theta", "V_phi"))
    else:
        raise OrbitError(f"unknown folded case {case!r}")
    return GeneratorSpec(
        orbit=label,
        family="",
        m_theta=v[0],
        v_degrees=tuple(v),
        v_realization=tuple(real),
        invariant_degrees=tuple(inv),
        invariant_realization=tuple(f"tr(X^{d})" for d in inv),
        v_modules=tuple(mods),
    )
