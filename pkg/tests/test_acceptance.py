"""Acceptance suite: the ten shipped guarantees, one test per guarantee.

Each test prints a single PASS line outside pytest's capture once its
assertions hold, so a full run shows one line per guarantee; a failing
guarantee surfaces as an ordinary pytest failure.  The selftest guarantee
dominates the runtime (a few minutes of exact arithmetic).
"""

import itertools
import json
import time
from fractions import Fraction

import pytest

import gradedpi.cli as cli
from gradedpi.algebras import (TripleSpec, catalog, matrix_over_division,
                               quotient_grading, regrade, tensor_product,
                               trivially_graded_reals)
from gradedpi.groups import (GroupHom, Subgroup, make_group, make_hom,
                             quotient_hom, squares_subgroup)
from gradedpi.identities import (GradedPolynomial, VarRef, evaluate,
                                 identity_space, is_identity,
                                 same_identities_up_to, theta_image)
from gradedpi.selftest import run_selftest
from gradedpi.structure import (classify, equiv_division,
                                equiv_matrix_over_division, normalize_triple)

# shared instances so per-algebra identity-space caches are reused
H4 = catalog("H4")
M2_4 = catalog("M2_4")
M2_2 = catalog("M2_2")
H2 = catalog("H2")
C2 = catalog("C2")
M2C_Z4 = catalog("M2C_Z4")
M2_8 = catalog("M2_8")
M4_4 = catalog("M4_4")
QUAT = catalog("quat_trivial")
P31 = catalog("pauli", 3, 1)
P32 = catalog("pauli", 3, 2)
P41 = catalog("pauli", 4, 1)
P43 = catalog("pauli", 4, 3)


def announce(capsys, text):
    with capsys.disabled():
        print(f"\nacceptance PASS  {text}")


def division_triple(a):
    return TripleSpec(a.support_subgroup(), a, (a.group.identity,))


def elementary_m2r(group, g_tuple):
    spec = TripleSpec(Subgroup.trivial(group), trivially_graded_reals(group),
                      g_tuple)
    return spec, matrix_over_division(spec)


def m2c_matrix_model():
    """2x2 over C (graded by the squares of Z4) with point degrees (e, a)."""
    g = M2C_Z4.group
    d = regrade(C2, make_hom(C2.group, g, [g.element((2,))]))
    h = Subgroup.generated_by(g, [g.element((2,))])
    return matrix_over_division(TripleSpec(h, d, (g.identity, g.element((1,)))))


def quaternions_tensor(a):
    ident = GroupHom(a.group, a.group, a.group.generators())
    return tensor_product(a, QUAT, a.group, ident, ident)


def test_01_m2_4_and_h4_agree_in_both_modes_to_degree_4(tmp_path, capsys):
    code = cli.main(["--cache-dir", str(tmp_path / "cache"), "--json",
                     "equiv", "--mode", "both", "--max-degree", "4",
                     "catalog:M2_4", "catalog:H4"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["verdict"] is True
    assert doc["structural"]["verdict"] is True
    assert doc["brute"]["equal"] is True
    assert doc["agreement"] is True
    announce(capsys, "1: equiv --mode both --max-degree 4 M2_4 H4 -> true, "
                     "modes agree")


def test_02_three_z2_graded_forms_of_m2_are_pairwise_equal(capsys):
    g = M2_2.group
    spec, elem = elementary_m2r(g, (g.identity, g.element((1,))))
    algebras = [("M2_2", M2_2), ("H2", H2), ("elementary", elem)]
    for (na, a), (nb, b) in itertools.combinations(algebras, 2):
        rep = same_identities_up_to(a, b, 4, names=(na, nb))
        assert rep.equal, f"{na} vs {nb}: {rep.detail}"
    triples = [normalize_triple(t)
               for t in (division_triple(M2_2), division_triple(H2), spec)]
    for ta, tb in itertools.combinations(triples, 2):
        assert equiv_matrix_over_division(ta, tb).verdict
    announce(capsys, "2: M2_2, H2, elementary M2(R) pairwise equal to "
                     "degree 4, brute and structural")


def test_03_m2c_z4_matches_its_matrix_over_division_model(capsys):
    rep = same_identities_up_to(M2C_Z4, m2c_matrix_model(), 3)
    assert rep.equal, rep.detail
    announce(capsys, "3: M2C_Z4 = 2x2 over C(2) with tuple (e,a) to degree 3")


def test_04_conjugate_pauli_bicharacters_give_equal_identities(capsys):
    ra, rb = classify(P31), classify(P32)
    assert ra.type_tag == rb.type_tag == "IV"
    assert ra.bichar != rb.bichar
    assert ra.bichar.conjugate() == rb.bichar
    structural = equiv_division(P31, P32)
    assert structural.verdict and "conjugate" in structural.reason
    assert same_identities_up_to(P31, P32, 3).equal
    announce(capsys, "4: pauli(3,1) vs pauli(3,2) equal via conjugate "
                     "bicharacters, brute agrees to degree 3")


def test_05_type_mismatch_yields_a_concrete_degree_2_witness(capsys):
    other = quaternions_tensor(M2_4)
    assert classify(M2_4).type_tag == "I"
    assert classify(other).type_tag == "III"
    rep = same_identities_up_to(M2_4, other, 2)
    assert not rep.equal
    e = M2_4.group.identity
    x, y = VarRef(e, 1), VarRef(e, 2)
    commutator = GradedPolynomial(M2_4.group, {(x, y): 1, (y, x): -1})
    assert rep.witness == commutator
    assert is_identity(rep.witness, M2_4)
    assert not is_identity(rep.witness, other)
    assignment = {v: other.basis_element(other.label_index(lbl))
                  for v, lbl in rep.witness_substitution.items()}
    assert not evaluate(rep.witness, assignment, other).is_zero()
    announce(capsys, "5: M2_4 (I) vs quaternions(x)M2_4 (III) differ with "
                     "witness [x_e,y_e], nonzero value exhibited")


def _quotient_homs(group):
    """Three grading-coarsening homs per grading group."""
    orders = group.orders
    if orders == (2,):
        z4, z22 = make_group((4,)), make_group((2, 2))
        return [quotient_hom(group, Subgroup.full(group)),
                make_hom(group, z4, [z4.element((2,))]),
                make_hom(group, z22, [z22.element((1, 1))])]
    if orders == (4,):
        z8 = make_group((8,))
        return [quotient_hom(group, squares_subgroup(group)),
                quotient_hom(group, Subgroup.full(group)),
                make_hom(group, z8, [z8.element((2,))])]
    if orders == (2, 2):
        return [quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 0))])),
                quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 1))])),
                quotient_hom(group, Subgroup.full(group))]
    if orders == (3, 3):
        return [quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 0))])),
                quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 1))])),
                quotient_hom(group, Subgroup.full(group))]
    if orders == (4, 4):
        return [quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 0))])),
                quotient_hom(group, squares_subgroup(group)),
                quotient_hom(group, Subgroup.full(group))]
    if orders == (2, 2, 2):
        return [quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((0, 0, 1))])),
                quotient_hom(group, Subgroup.generated_by(
                    group, [group.element((1, 1, 1))])),
                quotient_hom(group, Subgroup.full(group))]
    raise AssertionError(f"no hom set for orders {orders}")


def test_06_quotient_gradings_preserve_equal_identities(capsys):
    z22, z23 = H4.group, M2_8.group
    swap = make_hom(z22, z22, [z22.element((0, 1)), z22.element((1, 0))])
    ea = GroupHom(M2_4.group, z23,
                  (z23.element((1, 0, 0)), z23.element((0, 1, 0))))
    eb = GroupHom(C2.group, z23, (z23.element((0, 0, 1)),))
    g2 = M2_2.group
    pairs = [
        (H4, M2_4),
        (H2, M2_2),
        (M2C_Z4, m2c_matrix_model()),
        (P31, P32),
        (P41, P43),
        (M2_8, tensor_product(M2_4, C2, z23, ea, eb)),
        (M4_4, quaternions_tensor(M2_4)),
        (H4, regrade(H4, swap)),
        (M2_4, regrade(M2_4, swap)),
        (M2_2, elementary_m2r(g2, (g2.identity, g2.element((1,))))[1]),
    ]
    checked = 0
    for a, b in pairs:
        assert same_identities_up_to(a, b, 3).equal
        for theta in _quotient_homs(a.group):
            rep = same_identities_up_to(quotient_grading(a, theta),
                                        quotient_grading(b, theta), 3)
            assert rep.equal, f"{a.provenance} vs {b.provenance}: {rep.detail}"
            checked += 1
    assert checked == 30
    announce(capsys, "6: 10 equal-identity pairs stay equal to degree 3 "
                     "under 3 coarsening homs each (30 quotient checks)")


def test_07_squares_quotient_preserves_identity_verdicts(capsys):
    g = M2C_Z4.group
    theta = quotient_hom(g, squares_subgroup(g))
    coarse = quotient_grading(M2C_Z4, theta)
    support = sorted(M2C_Z4.support())
    forward = backward = 0
    for size in range(1, 4):
        for degs in itertools.combinations_with_replacement(support, size):
            space = identity_space(M2C_Z4, degs)
            for f in space.polynomials():
                assert is_identity(f, M2C_Z4)
                assert is_identity(theta_image(f, theta), coarse)
                forward += 1
            for perm in itertools.permutations(range(size)):
                mono = GradedPolynomial.monomial(
                    g, tuple(VarRef(degs[p], p + 1) for p in perm))
                assert not is_identity(mono, M2C_Z4)
                assert not is_identity(theta_image(mono, theta), coarse)
                backward += 1
    assert forward > 0 and backward > 0
    announce(capsys, f"7: squares quotient of M2C_Z4 preserves verdicts "
                     f"({forward} identities forward, {backward} monomials "
                     f"backward)")


def test_08_coset_criterion_for_elementary_tuples(capsys):
    g = make_group((2, 2))
    e, a = g.identity, g.element((1, 0))
    specs = {}
    algs = {}
    for tup in [(e, a), (a, e), (e, e)]:
        specs[tup], algs[tup] = elementary_m2r(g, tup)
    same = equiv_matrix_over_division(specs[(e, a)], specs[(a, e)])
    assert same.verdict
    diff = equiv_matrix_over_division(specs[(e, e)], specs[(e, a)])
    assert not diff.verdict and "coset" in diff.reason
    assert same_identities_up_to(algs[(e, a)], algs[(a, e)], 4).equal
    assert not same_identities_up_to(algs[(e, e)], algs[(e, a)], 4).equal
    announce(capsys, "8: tuples (e,a)~(a,e) and (e,e)!~(e,a) over Z2^2, "
                     "structural and brute to degree 4")


def test_09_bicharacter_axioms_hold_on_every_catalog_table(capsys):
    one = Fraction(1)
    tables = 0
    for a in (H4, M2_4, M2_2, H2, C2, M2C_Z4, M2_8, M4_4, QUAT,
              catalog("pauli", 2, 1), P31, P32, P41, P43):
        rep = classify(a)
        produced = [t for t in (rep.bichar,
                                rep.quotient.bichar if rep.quotient else None)
                    if t is not None]
        assert produced, f"no table on {a.provenance}"
        for t in produced:
            assert t.violations == ()
            dom = t.domain
            for g, h in itertools.product(dom, repeat=2):
                skew = t.value(g, h) * t.value(h, g)
                assert skew.is_rational() and skew.as_fraction() == one
                for k in dom:
                    assert t.value(g * h, k) == t.value(g, k) * t.value(h, k)
            if rep.type_tag == "I":
                assert t.is_real()
            tables += 1
    announce(capsys, f"9: bicharacter axioms hold exactly on all {tables} "
                     f"catalog tables; Type I tables real")


def test_10_selftest_catalog_closure_at_degree_4(capsys):
    t0 = time.time()
    report = run_selftest(max_degree=4)
    elapsed = time.time() - t0
    disagreements = sum(len(s.failures) for s in report["sections"])
    assert report["ok"] is True
    assert disagreements == 0
    for section in report["sections"]:
        assert section.ok, f"{section.name}: {section.failures}"
    assert elapsed <= 600, f"selftest took {elapsed:.0f}s, budget is 600s"
    announce(capsys, f"10: selftest at degree 4, zero disagreements "
                     f"in {elapsed:.0f}s (budget 600s)")
