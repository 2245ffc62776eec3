from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import lie_oracle as oracle
from nilgen import orbits
from nilgen.exponents import generalized_exponents_phi
from nilgen.orbits import FIRST, SECOND, OrbitError
from nilgen.rootsys import build_from_string, orthogonal_short_subsets

SMALL_TYPES = (
    [f"A{n}" for n in range(1, 9)]
    + [f"B{n}" for n in range(2, 9)]
    + [f"C{n}" for n in range(3, 9)]
    + [f"D{n}" for n in range(4, 9)]
    + ["E6", "E7", "E8", "F4", "G2"]
)


def thetas(name: str):
    return orthogonal_short_subsets(build_from_string(name))[1:]


def cases(names):
    return [(name, th) for name in names for th in thetas(name)]


# ---------------------------------------------------------------------------
# partitions and weighted Dynkin diagrams against matrix models

CLASSICAL_SMALL = (
    [f"A{n}" for n in range(1, 8)]
    + [f"B{n}" for n in range(2, 7)]
    + [f"C{n}" for n in range(3, 7)]
    + [f"D{n}" for n in range(4, 8)]
)


@pytest.mark.parametrize("name,theta", cases(CLASSICAL_SMALL))
def test_partition_matches_generic_nilradical(name, theta):
    d = build_from_string(name)
    orbit = orbits.richardson_orbit(theta, d)
    got = oracle.classical_jordan_type(d.rtype.family, d.rank, theta)
    assert tuple(sorted(got, reverse=True)) == orbit.partition


@pytest.mark.parametrize("name,theta", cases(CLASSICAL_SMALL))
def test_weighted_dynkin_grading_recovers_orbit(name, theta):
    # a generic element of g_2 for the grading by h lies in the orbit of h
    d = build_from_string(name)
    orbit = orbits.richardson_orbit(theta, d)
    m = oracle.generic_graded_element(d.rtype.family, d.rank, orbit.weighted_dynkin)
    assert tuple(sorted(oracle.jordan_type(m), reverse=True)) == orbit.partition
    if orbit.very_even_tag:
        assert oracle.isotropic_family(m, d.rank) + 1 == orbit.very_even_tag


@pytest.mark.parametrize("n", [4, 6, 8])
def test_very_even_tag_matches_isotropic_class(n):
    d = build_from_string(f"D{n}")
    seen = set()
    for th in thetas(f"D{n}"):
        orbit = orbits.richardson_orbit(th, d)
        if orbit.very_even_tag is None:
            continue
        m = oracle.generic_classical_nilpotent("D", n, th)
        assert oracle.isotropic_family(m, n) + 1 == orbit.very_even_tag
        assert orbit.very_even_tag == (1 if n - 1 in th else 2)
        seen.add(orbit.very_even_tag)
    assert seen == {1, 2}


def test_partition_weighted_dynkin_examples():
    assert orbits.partition_weighted_dynkin((3, 2), "A", 4) == (1, 1, 1, 1)
    assert orbits.partition_weighted_dynkin((5, 3), "D", 4) == (2, 0, 2, 2)
    assert orbits.partition_weighted_dynkin((4, 4), "D", 4, 1) == (0, 2, 0, 2)
    assert orbits.partition_weighted_dynkin((4, 4), "D", 4, 2) == (0, 2, 2, 0)
    assert orbits.partition_weighted_dynkin((7, 1, 1), "B", 4) == (2, 2, 2, 0)
    assert orbits.partition_weighted_dynkin((4, 2), "C", 3) == (2, 0, 2)


@pytest.mark.parametrize("name", ["E6", "E7", "E8"])
def test_exceptional_table_against_adjoint_action(name):
    d = build_from_string(name)
    alg = oracle.SimplyLacedAlgebra(d.cartan, d.positive_roots)
    for row in orbits.exceptional_table():
        if row["type"] != name:
            continue
        for th in row["theta_class"]:
            blocks = oracle.jordan_type(oracle.generic_nilradical_ad(alg, th))
            hits = oracle.find_weighted_dynkin(d.cartan, d.positive_roots, blocks)
            assert hits == [tuple(row["weighted_dynkin"])], (row["label"], th)


def test_exceptional_theta_classes_cover_all_sets():
    for name in ["E6", "E7", "E8", "F4", "G2"]:
        listed = sorted(
            tuple(th) for row in orbits.exceptional_table() if row["type"] == name for th in row["theta_class"]
        )
        assert listed == sorted(thetas(name))


@pytest.mark.parametrize("name", ["F4", "G2"])
def test_non_simply_laced_exceptional_rows_are_even(name):
    # the short-root Richardson orbits of F4 and G2 are distinguished: dim g_0 = dim g_2
    d = build_from_string(name)
    for row in orbits.exceptional_table():
        if row["type"] != name:
            continue
        dims = orbits.graded_dimensions(row["weighted_dynkin"], d)
        assert dims.get(1, 0) == 0
        assert dims[0] == dims[2]


# ---------------------------------------------------------------------------
# dimension and grading


@pytest.mark.parametrize("name,theta", cases(SMALL_TYPES))
def test_dimension_self_check(name, theta):
    d = build_from_string(name)
    orbit = orbits.richardson_orbit(theta, d)
    orbits.check_orbit(orbit, d)
    assert orbits.orbit_dimension_from_h(orbit.weighted_dynkin, d) == orbits.richardson_dimension(theta, d)


def test_check_orbit_rejects_bad_row():
    d = build_from_string("E6")
    good = orbits.richardson_orbit((1,), d)
    bad = orbits.OrbitDescriptor("E6", (1,), "fake", None, (2, 2, 2, 2, 2, 2))
    orbits.check_orbit(good, d)
    with pytest.raises(OrbitError):
        orbits.check_orbit(bad, d)


def test_invalid_theta():
    d = build_from_string("D5")
    with pytest.raises(OrbitError):
        orbits.richardson_orbit((1, 2), d)
    with pytest.raises(OrbitError):
        orbits.richardson_orbit((), d)
    with pytest.raises(OrbitError):
        orbits.richardson_orbit((2,), build_from_string("B3"))


@pytest.mark.parametrize(
    "name,theta,phi_h",
    [
        ("E6", (1,), 16), ("E6", (1, 4, 6), 10), ("E7", (2, 3, 5), 18),
        ("E8", (2, 3, 5, 7), 28), ("E8", (1,), 46), ("A5", (1, 3, 5), 4),
        ("D4", (1, 3), 6), ("F4", (3,), 10), ("G2", (1,), 2),
    ],
)
def test_phi_of_h_examples(name, theta, phi_h):
    d = build_from_string(name)
    orbit = orbits.richardson_orbit(theta, d)
    assert orbits.phi_of_h(orbit, d) == phi_h


# ---------------------------------------------------------------------------
# families

FIGURE_COLORS = {
    "D4": {"[5,3]": FIRST, "[3,3,1,1]": FIRST,
           "[4,4]^1": SECOND, "[4,4]^2": SECOND, "[5,1,1,1]": SECOND},
    "D5": {"[7,3]": FIRST, "[5,5]": FIRST, "[5,3,1,1]": FIRST, "[7,1,1,1]": SECOND},
    "D6": {"[9,3]": FIRST, "[7,5]": FIRST, "[5,5,1,1]": FIRST,
           "[9,1,1,1]": SECOND, "[6,6]^1": SECOND, "[6,6]^2": SECOND, "[7,3,1,1]": SECOND},
    "D7": {"[11,3]": FIRST, "[9,5]": FIRST, "[7,7]": FIRST, "[7,5,1,1]": FIRST,
           "[11,1,1,1]": SECOND, "[9,3,1,1]": SECOND},
}


@pytest.mark.parametrize("name", sorted(FIGURE_COLORS))
def test_family_colors_of_small_d(name):
    d = build_from_string(name)
    got = {}
    for th in thetas(name):
        got[orbits.richardson_orbit(th, d).label] = orbits.classify_family(th, d)
    assert got == FIGURE_COLORS[name]


def test_exceptional_families():
    for name in ["E6", "E8"]:
        d = build_from_string(name)
        assert {orbits.classify_family(th, d) for th in thetas(name)} == {FIRST}
    d = build_from_string("E7")
    for th in thetas("E7"):
        label = orbits.richardson_orbit(th, d).label
        assert orbits.classify_family(th, d) == (SECOND if label == "E6" else FIRST)


def expected_second(name: str, label: str, partition) -> bool:
    """Closed-form list of second-family orbits."""
    fam, n = name[0], int(name[1:])
    if fam == "E":
        return name == "E7" and label == "E6"
    if fam != "D" or partition is None:
        return False
    if n % 2 == 0 and tuple(partition) == (n, n):
        return True
    for s in range(2, n // 2 + 1):
        if tuple(partition) == tuple(sorted((2 * n - 2 * s + 1, 2 * s - 3, 1, 1), reverse=True)):
            return True
    return False


@pytest.mark.parametrize(
    "name", SMALL_TYPES + [f"D{n}" for n in range(9, 13)] + [f"A{n}" for n in range(9, 13)] + [f"C{n}" for n in range(9, 13)]
)
def test_second_family_closed_list(name):
    d = build_from_string(name)
    for th in thetas(name):
        orbit = orbits.richardson_orbit(th, d)
        second = orbits.classify_family(th, d) == SECOND
        assert second == expected_second(name, orbit.label, orbit.partition), (name, th, orbit.label)


# ---------------------------------------------------------------------------
# m_Theta, copies and generators


@pytest.mark.parametrize(
    "name,theta,m",
    [
        ("A5", (1,), 5), ("A5", (1, 3, 5), 3), ("C4", (1, 3), 4), ("B4", (4,), 4),
        ("D6", (1, 3, 5), 5), ("D6", (5, 6), 5), ("D6", (1,), 9),
        ("E6", (1,), 11), ("E7", (2, 5, 7), 9), ("E8", (1,), 29), ("E8", (2, 3, 5, 7), 17),
    ],
)
def test_m_theta_examples(name, theta, m):
    assert orbits.m_theta(theta, build_from_string(name)) == m


@pytest.mark.parametrize("name,theta", cases(SMALL_TYPES))
def test_flagged_copies_and_invariant_count(name, theta):
    d = build_from_string(name)
    flags = orbits.vanishing_copies(theta, d)
    assert sum(f.flagged for f in flags) == len(theta)
    spec = orbits.generator_spec(theta, d)
    assert len(spec.invariant_degrees) == d.rank - len(theta)
    assert spec.m_theta == min(f.degree for f in flags if f.flagged)
    assert spec.m_theta in generalized_exponents_phi(d)


def test_e6_orbit_in_e7_flags():
    d = build_from_string("E7")
    flags = orbits.vanishing_copies((2, 5, 7), d)
    assert [f.degree for f in flags if f.by_inequality] == [13, 17]
    assert [f.degree for f in flags if f.flagged] == [9, 13, 17]


@pytest.mark.parametrize(
    "name,theta,v,inv",
    [
        ("E6", (1, 4, 6), (7, 8), (2, 5, 6)),
        ("E7", (2, 5, 7), (9,), (2, 6, 8, 12)),
        ("E8", (1, 4, 6, 8), (17, 19), (2, 8, 12, 14)),
        ("C5", (1, 3), (6,), (2, 4, 6)),
        ("D6", (1, 3, 5), (5,), (2, 4, 6)),
        ("D6", (1, 5, 6), (5, 7), (2, 4, 6)),
        ("D5", (4, 5), (4,), (2, 4, 6)),
        ("B5", (5,), (5,), (2, 4, 6, 8)),
    ],
)
def test_generator_spec_examples(name, theta, v, inv):
    spec = orbits.generator_spec(theta, build_from_string(name))
    assert spec.v_degrees == v
    assert spec.invariant_degrees == inv


def test_generator_realizations():
    spec = orbits.generator_spec((1, 3, 5), build_from_string("D6"))
    assert spec.v_realization == ("grad(tr(X^n)/2n + Pf(X))",)
    assert spec.invariant_realization == ("tr(X^2)", "tr(X^4)", "tr(X^6)")
    spec = orbits.generator_spec((1, 3, 6), build_from_string("D6"))
    assert spec.v_realization == ("grad(tr(X^n)/2n - Pf(X))",)
    spec = orbits.generator_spec((1, 5, 6), build_from_string("D6"))
    assert spec.v_realization == ("grad Pf", "X^7")
    spec = orbits.generator_spec((1,), build_from_string("D6"))
    assert spec.invariant_realization == ("tr(X^2)", "tr(X^4)", "Pf(X)", "tr(X^6)", "tr(X^8)")
    spec = orbits.generator_spec((3,), build_from_string("B3"))
    assert spec.v_realization == ("grad Pf restricted from so(2n+2)",)
    assert orbits.generator_spec((1,), build_from_string("E6")).to_json()["v_modules"] == ["V_phi"]


def test_labeled_degrees_tie_order():
    labels = [x.text for x in orbits.labeled_degrees(build_from_string("D4"))]
    assert labels == ["tr(X^2)", "Pf(X)", "tr(X^4)", "tr(X^6)"]


def test_folded_specs():
    b = orbits.folded_orbit_spec("B", n=5, s=2)
    assert b.orbit == "[7,3,1]"
    assert b.v_degrees == (5, 7)
    assert b.v_modules == ("V_phi", "V_theta")
    assert b.invariant_degrees == (2, 4, 6)
    b1 = orbits.folded_orbit_spec("B", n=4, s=1)
    assert b1.v_degrees == (4,)
    c = orbits.folded_orbit_spec("C", n=5)
    assert (c.orbit, c.v_degrees, c.invariant_degrees) == ("[5,5]", (5,), (2, 4))
    f = orbits.folded_orbit_spec("F4(a2)")
    assert (f.v_degrees, f.invariant_degrees, f.v_modules) == ((7, 8), (2, 6), ("V_theta", "V_phi"))
    with pytest.raises(OrbitError):
        orbits.folded_orbit_spec("C", n=4)
    with pytest.raises(OrbitError):
        orbits.folded_orbit_spec("B", n=3, s=3)


def test_theta_for_label():
    d = build_from_string("E7")
    assert orbits.theta_for_label("E6", d) == (2, 5, 7)
    with pytest.raises(OrbitError):
        orbits.theta_for_label("nonsense", d)


@given(st.integers(4, 14), st.data())
def test_d_type_classification_is_consistent(n, data):
    d = build_from_string(f"D{n}")
    th = data.draw(st.sampled_from(thetas(f"D{n}")))
    orbit = orbits.richardson_orbit(th, d)
    assert sum(orbit.partition) == 2 * n
    fam = orbits.classify_family(th, d)
    assert (fam == SECOND) == expected_second(f"D{n}", orbit.label, orbit.partition)
    flags = orbits.vanishing_copies(th, d)
    assert sum(f.flagged for f in flags) == len(th)
