"""Bookkeeping calculus for twisted cohomology states (Omega, lambda, shift).

A state stands for the graded module H_Omega(lambda)[-shift]; only the
triple is tracked, never the module.  The elementary moves each raise the
height of lambda and add 1 (A1, A2) or 2 (A3) to the shift; the A2-zero move
only trades one root of Omega for an adjacent one.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

from .rootsys import (
    RootDatum,
    Weight,
    add,
    dominant_short_root,
    height,
    is_orthogonal_short,
    orthogonal_short_subsets,
    orthogonal_to,
    pairing,
    scale,
)

A1, A2, A3, A2_ZERO = "A1", "A2", "A3", "A2Zero"
NORMALIZED, OBSTRUCTED = "Normalized", "Obstructed"


class MoveError(ValueError):
    """A move was requested whose preconditions fail."""


@dataclass(frozen=True)
class CohomState:
    omega: tuple[int, ...]
    weight: Weight
    shift: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", tuple(sorted(set(self.omega))))
        object.__setattr__(self, "weight", tuple(self.weight))

    def to_json(self) -> dict:
        return {"omega": list(self.omega), "lambda": list(self.weight), "shift": self.shift}


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    beta: int
    auxiliary: tuple[int, ...]
    before: CohomState
    after: CohomState

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "beta": self.beta,
            "auxiliary": list(self.auxiliary),
            "lambda_after": list(self.after.weight),
            "omega_after": list(self.after.omega),
            "shift_after": self.after.shift,
        }


@dataclass(frozen=True)
class RewriteOutcome:
    status: str
    final: CohomState
    trace: tuple[MoveRecord, ...] = ()
    obstruction: str | None = None

    @property
    def normalized(self) -> bool:
        return self.status == NORMALIZED


def check_state(state: CohomState, datum: RootDatum) -> None:
    if not is_orthogonal_short(state.omega, datum):
        raise MoveError(f"Omega={list(state.omega)} is not a set of orthogonal short simple roots")
    bad = [a for a in state.omega if pairing(state.weight, a, datum) != 0]
    if bad:
        raise MoveError(f"lambda={list(state.weight)} pairs nonzero with Omega roots {bad}")


def _single_bond(datum: RootDatum, i: int, j: int) -> bool:
    return datum.cartan[i - 1][j - 1] == -1 and datum.cartan[j - 1][i - 1] == -1


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise MoveError(message)


def _common_checks(state: CohomState, beta: int, datum: RootDatum, expected: int) -> None:
    _require(1 <= beta <= datum.rank, f"no simple root {beta}")
    _require(beta not in state.omega, f"beta={beta} lies in Omega")
    p = pairing(state.weight, beta, datum)
    _require(p == expected, f"<lambda, alpha_{beta}^vee> = {p}, need {expected}")


def _orthogonal_to_rest(datum: RootDatum, roots: Sequence[int], rest: Sequence[int]) -> bool:
    return all(not datum.adjacent(r, o) and r != o for r in roots for o in rest)


def apply_a1(state: CohomState, beta: int, datum: RootDatum) -> CohomState:
    _common_checks(state, beta, datum, -1)
    _require(_orthogonal_to_rest(datum, [beta], state.omega), f"beta={beta} is not orthogonal to Omega")
    return CohomState(state.omega, add(state.weight, datum.simple(beta)), state.shift + 1)


def _a2_checks(state: CohomState, beta: int, beta1: int, datum: RootDatum, expected: int) -> None:
    _common_checks(state, beta, datum, expected)
    _require(beta1 in state.omega, f"beta1={beta1} is not in Omega")
    _require(_single_bond(datum, beta, beta1), f"alpha_{beta}, alpha_{beta1} do not span an A2")
    _require(pairing(state.weight, beta1, datum) == 0, f"<lambda, alpha_{beta1}^vee> != 0")
    rest = [o for o in state.omega if o != beta1]
    _require(_orthogonal_to_rest(datum, [beta, beta1], rest), "A2 pair is not orthogonal to the rest of Omega")


def apply_a2(state: CohomState, beta: int, beta1: int, datum: RootDatum) -> CohomState:
    _a2_checks(state, beta, beta1, datum, -1)
    omega = [o for o in state.omega if o != beta1] + [beta]
    weight = add(state.weight, datum.simple(beta), datum.simple(beta1))
    return CohomState(tuple(omega), weight, state.shift + 1)


def apply_a2_zero(state: CohomState, beta: int, beta1: int, datum: RootDatum) -> CohomState:
    _a2_checks(state, beta, beta1, datum, 0)
    omega = [o for o in state.omega if o != beta1] + [beta]
    return CohomState(tuple(omega), state.weight, state.shift)


def apply_a3(state: CohomState, beta: int, beta1: int, beta2: int, datum: RootDatum) -> CohomState:
    _common_checks(state, beta, datum, -1)
    _require(beta1 != beta2, "beta1 and beta2 must differ")
    for b in (beta1, beta2):
        _require(b in state.omega, f"beta={b} is not in Omega")
        _require(_single_bond(datum, beta, b), f"alpha_{beta}, alpha_{b} do not form an A2 edge")
        _require(pairing(state.weight, b, datum) == 0, f"<lambda, alpha_{b}^vee> != 0")
    rest = [o for o in state.omega if o not in (beta1, beta2)]
    _require(_orthogonal_to_rest(datum, [beta, beta1, beta2], rest), "A3 is not orthogonal to the rest of Omega")
    s = datum.simple
    weight = add(state.weight, s(beta1), scale(2, s(beta)), s(beta2))
    return CohomState(state.omega, weight, state.shift + 2)


def _move_for(state: CohomState, beta: int, datum: RootDatum) -> MoveRecord | str:
    """The forced move through beta (pairing -1 assumed), or an obstruction message."""
    nb = [o for o in state.omega if datum.adjacent(beta, o)]
    if len(nb) >= 3:
        return f"D4 subsystem centred at alpha_{beta} with end nodes {nb} in Omega"
    if nb and datum.is_long_simple(beta):
        return f"long alpha_{beta} adjacent to short alpha_{nb[0]} in Omega (root-string exclusion)"
    if not nb:
        return MoveRecord(A1, beta, (), state, apply_a1(state, beta, datum))
    if len(nb) == 1:
        return MoveRecord(A2, beta, (nb[0],), state, apply_a2(state, beta, nb[0], datum))
    return MoveRecord(A3, beta, tuple(nb), state, apply_a3(state, beta, nb[0], nb[1], datum))


def move_options(state: CohomState, datum: RootDatum) -> list[tuple[int, MoveRecord | str]]:
    """Every simple beta with <lambda, beta^vee> = -1, with its move or obstruction, by index."""
    return [
        (b, _move_for(state, b, datum))
        for b in datum.simple_roots
        if b not in state.omega and pairing(state.weight, b, datum) == -1
    ]


def normalize(state: CohomState, datum: RootDatum) -> RewriteOutcome:
    """Rewrite a short positive root lambda up to phi, lowest admissible index first."""
    check_state(state, datum)
    if not datum.is_short_root(state.weight) or any(c < 0 for c in state.weight):
        raise MoveError(f"lambda={list(state.weight)} is not a short positive root")
    phi = dominant_short_root(datum)
    return _rewrite(state, datum, lambda w: w == phi)


def _rewrite(state: CohomState, datum: RootDatum, done) -> RewriteOutcome:
    trace: list[MoveRecord] = []
    current = state
    while not done(current.weight):
        options = move_options(current, datum)
        if not options:
            raise MoveError(f"no simple root pairs to -1 with lambda={list(current.weight)}")
        moves = [m for _, m in options if isinstance(m, MoveRecord)]
        if not moves:
            return RewriteOutcome(OBSTRUCTED, current, tuple(trace), options[0][1])
        trace.append(moves[0])
        current = moves[0].after
    return RewriteOutcome(NORMALIZED, current, tuple(trace))


def omega_class(omega: Sequence[int], weight: Sequence[int], datum: RootDatum) -> frozenset[tuple[int, ...]]:
    """All Omega reachable from ``omega`` by A2-zero moves at fixed ``weight``."""
    start = tuple(sorted(omega))
    seen = {start}
    stack = [start]
    while stack:
        om = stack.pop()
        st = CohomState(om, tuple(weight))
        for b1 in om:
            for b in datum.neighbors(b1):
                try:
                    nxt = apply_a2_zero(st, b, b1, datum).omega
                except MoveError:
                    continue
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return frozenset(seen)


def class_representative(omega: Sequence[int], weight: Sequence[int], datum: RootDatum) -> tuple[int, ...]:
    return min(omega_class(omega, weight, datum))


def branch_outcomes(state: CohomState, datum: RootDatum) -> frozenset[tuple[int, tuple[int, ...]]]:
    """Exhaustive branching over move choices from a short positive root to phi.

    Returns the set of (total shift increment, class representative of final Omega)
    over all maximal move sequences; obstructed branches contribute ("obstructed", ...).
    """
    check_state(state, datum)
    phi = dominant_short_root(datum)
    return _branch(CohomState(state.omega, state.weight, 0), datum, phi)


@lru_cache(maxsize=None)
def _branch(state: CohomState, datum: RootDatum, phi: Weight) -> frozenset:
    if state.weight == phi:
        return frozenset({(0, class_representative(state.omega, phi, datum))})
    out = set()
    for _, m in move_options(state, datum):
        if isinstance(m, str):
            out.add((-1, ()))
            continue
        inc = m.after.shift - m.before.shift
        for total, rep in _branch(CohomState(m.after.omega, m.after.weight, 0), datum, phi):
            out.add((total + inc if total >= 0 else -1, rep))
    return frozenset(out)


def main_lemma_macro(state: CohomState, chain: Sequence[int], datum: RootDatum) -> CohomState:
    """One composite step along an A_k chain beta_1 - ... - beta_k.

    Adds beta_1 + ... + beta_k with shift k - t, where t counts Omega roots in
    the chain and its neighbourhood; every such root slides one step towards beta_1.
    """
    chain = list(chain)
    k = len(chain)
    _require(k >= 1, "empty chain")
    for a, b in zip(chain, chain[1:]):
        _require(_single_bond(datum, a, b), f"chain is not of type A at {a}-{b}")
    _require(len(set(chain)) == k, "chain repeats a root")
    for i, a in enumerate(chain):
        for b in chain[i + 2 :]:
            _require(not datum.adjacent(a, b), "chain is not a path")
    closure = set(chain) | {nb for c in chain for nb in datum.neighbors(c)}
    inside = [o for o in state.omega if o in closure]
    _require(set(inside) <= set(chain[1:]), "Omega meets the neighbourhood of the chain outside beta_2..beta_k")
    _require(pairing(state.weight, chain[0], datum) == -1, "<lambda, beta_1^vee> != -1")
    _require(all(pairing(state.weight, c, datum) == 0 for c in chain[1:]), "lambda does not vanish on beta_2..beta_k")
    t = len(inside)
    moved = {chain[chain.index(o) - 1] for o in inside}
    omega = tuple(o for o in state.omega if o not in closure) + tuple(moved)
    weight = add(state.weight, *[datum.simple(c) for c in chain])
    return CohomState(omega, weight, state.shift + k - t)


def elementary_chain(state: CohomState, chain: Sequence[int], datum: RootDatum) -> tuple[CohomState, list[MoveRecord]]:
    """The same step as main_lemma_macro, carried out by A1 and A2 moves."""
    trace = []
    current = state
    i = 0
    chain = list(chain)
    while i < len(chain):
        b = chain[i]
        if i + 1 < len(chain) and chain[i + 1] in current.omega:
            nxt = apply_a2(current, b, chain[i + 1], datum)
            trace.append(MoveRecord(A2, b, (chain[i + 1],), current, nxt))
            i += 2
        else:
            nxt = apply_a1(current, b, datum)
            trace.append(MoveRecord(A1, b, (), current, nxt))
            i += 1
        current = nxt
    return current, trace


# ---------------------------------------------------------------------------
# P-covariants of weight phi


@dataclass(frozen=True)
class CovariantResult:
    omega: tuple[int, ...]
    exists: bool
    degree: int | None
    end_root: int | None = None
    end_omega: tuple[int, ...] | None = None
    obstruction: str | None = None
    trace: tuple[MoveRecord, ...] = field(default=(), repr=False)


def admissible_omegas(datum: RootDatum) -> list[tuple[int, ...]]:
    """Orthogonal short Omega with phi in X*(P_Omega)."""
    return orthogonal_short_subsets(datum, orthogonal_to(dominant_short_root(datum), datum))


def covariant_exists(omega: Sequence[int], datum: RootDatum) -> CovariantResult:
    """Run the normalisation backwards from -phi, searching all move choices.

    Success means reaching -alpha for a simple alpha; the covariant then has
    degree equal to the accumulated shift plus one.
    """
    omega = tuple(sorted(omega))
    phi = dominant_short_root(datum)
    check_state(CohomState(omega, phi), datum)
    start = CohomState(omega, scale(-1, phi), 0)
    found = _reverse_search(start, datum)
    if isinstance(found, str):
        return CovariantResult(omega, False, None, obstruction=found)
    trace = tuple(found)
    end = trace[-1].after if trace else start
    alpha = next(i for i in datum.simple_roots if end.weight == scale(-1, datum.simple(i)))
    return CovariantResult(omega, True, end.shift + 1, alpha, end.omega, trace=trace)


def _is_negative_simple(weight: Weight) -> bool:
    return sorted(weight)[0] == -1 and sum(weight) == -1 and all(c in (0, -1) for c in weight)


def _reverse_search(start: CohomState, datum: RootDatum) -> list[MoveRecord] | str:
    first_obstruction: list[str] = []
    dead: set[tuple] = set()

    def dfs(state: CohomState) -> list[MoveRecord] | None:
        if _is_negative_simple(state.weight):
            return []
        key = (state.omega, state.weight)
        if key in dead:
            return None
        for _, m in move_options(state, datum):
            if isinstance(m, str):
                if not first_obstruction:
                    first_obstruction.append(m)
                continue
            rest = dfs(m.after)
            if rest is not None:
                return [m] + rest
        dead.add(key)
        return None

    path = dfs(start)
    if path is None:
        return first_obstruction[0] if first_obstruction else "no move available"
    return path


def covariant_degree(omega: Sequence[int], datum: RootDatum) -> int:
    res = covariant_exists(omega, datum)
    if not res.exists:
        raise MoveError(f"no P-covariant of weight phi for Omega={list(omega)}: {res.obstruction}")
    return res.degree


def forward_covariant_table(datum: RootDatum) -> dict[tuple[int, ...], set[int]]:
    """Covariants obtained from the forward data Theta = Omega' + {alpha}.

    For every orthogonal short Theta and alpha in Theta, normalise
    H_{Theta - alpha}(alpha)[-1]; the final Omega (and its A2-zero class at phi)
    carries a covariant whose degree is the final shift.
    """
    phi = dominant_short_root(datum)
    table: dict[tuple[int, ...], set[int]] = {}
    for theta in orthogonal_short_subsets(datum):
        for alpha in theta:
            rest = tuple(o for o in theta if o != alpha)
            out = normalize(CohomState(rest, datum.simple(alpha), 1), datum)
            if not out.normalized:
                continue
            for om in omega_class(out.final.omega, phi, datum):
                table.setdefault(om, set()).add(out.final.shift)
    return table


def listed_exception(omega: Sequence[int], datum: RootDatum) -> bool:
    """The closed list of Omega without a covariant of weight phi."""
    om = set(omega)
    f, n = datum.rtype.family, datum.rank
    if f == "B":
        return om == {n}
    if f == "C":
        return 1 in om
    if f == "D":
        return {1, n - 1, n} <= om
    if f == "F":
        return om == {3}
    if f == "E" and n == 6:
        return om == {1, 4, 6}
    if f == "E" and n == 7:
        return om in ({3, 5, 7}, {2, 3, 5, 7})
    if f == "E" and n == 8:
        return {2, 5, 7} <= om
    return False


def initial_state(omega: Sequence[int], weight: Sequence[int], shift: int = 0) -> CohomState:
    return CohomState(tuple(omega), tuple(weight), shift)


def replace_shift(state: CohomState, shift: int) -> CohomState:
    return replace(state, shift=shift)


__all__ = [
    "A1",
    "A2",
    "A3",
    "A2_ZERO",
    "CohomState",
    "CovariantResult",
    "MoveError",
    "MoveRecord",
    "RewriteOutcome",
    "admissible_omegas",
    "apply_a1",
    "apply_a2",
    "apply_a2_zero",
    "apply_a3",
    "branch_outcomes",
    "class_representative",
    "covariant_degree",
    "covariant_exists",
    "elementary_chain",
    "forward_covariant_table",
    "height",
    "listed_exception",
    "main_lemma_macro",
    "move_options",
    "normalize",
    "omega_class",
]
