"""Structural invariants of graded division algebras and the decision procedures.

The classification splits on dim A_e (1, 2 or 4 for a real division algebra)
and on whether A_e is central:

  dim A_e = 1          -> Type I, real commutation bicharacter on supp A
  dim A_e = 4          -> Type III, bicharacter recovered by Hall products
  dim A_e = 2 central  -> complex bicharacter w.r.t. a chosen unit J;
                          all values real -> Type I (regular), else Type IV
  dim A_e = 2 else     -> Type II; if supp A is elementary 2-group the real
                          table lives on the central support, otherwise the
                          comparison data is taken in the quotient by the
                          subgroup of squares.

Equivalence of graded identities is decided from these invariants; matrix
algebras over division gradings reduce to the Type I/IV case by
`normalize_triple` and are compared by `equiv_matrix_over_division`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .algebras import (AlgebraElement, GradedAlgebra, TripleSpec,
                       check_graded_division, quotient_grading, regrade,
                       twisted_group_algebra)
from .errors import InvariantViolation, PreconditionError
from .groups import (CosetDecomposition, GroupElement, GroupHom, Subgroup,
                     is_elementary_2group, quotient_hom, squares_subgroup,
                     subgroup_as_group)
from .scalars import CycloScalar


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# -- commutation factors ---------------------------------------------------


def _basis_pairs(a: GradedAlgebra, g: GroupElement, h: GroupElement):
    for i in a.component(g):
        for j in a.component(h):
            yield a.basis_element(i) * a.basis_element(j), \
                a.basis_element(j) * a.basis_element(i)


def _ratio(num: AlgebraElement, den: AlgebraElement):
    """num / den when num = lambda * den for a scalar; None otherwise."""
    k = min(den.coeffs)
    lam = num.coeffs.get(k)
    if lam is None:
        return None
    lam = lam / den.coeffs[k]
    if num == den.scale(lam):
        return lam
    return None


def commutation_factor(a: GradedAlgebra, g: GroupElement, h: GroupElement):
    """The real lambda with xy = lambda*yx on A_g x A_h, or None.

    Solved from the first nonvanishing basis pair, then verified against all
    pairs (bilinearity makes basis pairs sufficient).  None when some pair
    vanishes on one side only, when pairs disagree, or when every product
    vanishes (no unique factor).
    """
    lam = None
    for ab, ba in _basis_pairs(a, g, h):
        if ba.is_zero():
            if ab.is_zero():
                continue
            return None
        if lam is None:
            lam = _ratio(ab, ba)
            if lam is None or not lam.is_real():
                return None
        elif ab != ba.scale(lam):
            return None
    return lam


def _validate_complex_unit(a: GradedAlgebra, j: AlgebraElement):
    if not isinstance(j, AlgebraElement) or j.parent is not a:
        raise PreconditionError("invalid J: not an element of the algebra")
    if j.degree() is None:
        raise PreconditionError("invalid J: not homogeneous")
    if (j * j + a.one()).coeffs:
        raise PreconditionError("invalid J: J^2 is not minus the unit")
    for i in range(a.dim):
        b = a.basis_element(i)
        if j * b != b * j:
            raise PreconditionError("invalid J: not central")


def complex_commutation_factor(a: GradedAlgebra, g: GroupElement,
                               h: GroupElement, j: AlgebraElement):
    """lambda1 + lambda2*i with xy = lambda1*yx + lambda2*J*yx, or None."""
    _validate_complex_unit(a, j)
    sol = None
    pairs = []
    for ab, ba in _basis_pairs(a, g, h):
        if ba.is_zero():
            if ab.is_zero():
                continue
            return None
        pairs.append((ab, ba, j * ba))
    for ab, ba, jba in pairs:
        if sol is None:
            sol = _solve_two(ab, ba, jba)
            if sol is None:
                return None
        l1, l2 = sol
        if ab != ba.scale(l1) + jba.scale(l2):
            return None
    if sol is None:
        return None
    l1, l2 = sol
    if not l1.is_real() or not l2.is_real():
        return None
    m = _lcm(a.conductor, 4)
    return l1.promote(m) + l2.promote(m) * CycloScalar.root_of_unity(4, 1, m)


def _solve_two(target: AlgebraElement, u: AlgebraElement, v: AlgebraElement):
    """Scalars (l1, l2) with target = l1*u + l2*v, via exact elimination."""
    keys = sorted(set(target.coeffs) | set(u.coeffs) | set(v.coeffs))
    cond = target.parent.conductor
    zero = CycloScalar.zero(cond)
    eqs = [(u.coeffs.get(k, zero), v.coeffs.get(k, zero),
            target.coeffs.get(k, zero)) for k in keys]
    first = next((e for e in eqs if not e[0].is_zero()), None)
    if first is None:
        return None
    a1, b1, c1 = first
    second = None
    for a2, b2, c2 in eqs:
        res = b2 - a2 * b1 / a1
        if not res.is_zero():
            second = (res, c2 - a2 * c1 / a1)
            break
    if second is None:
        return None
    l2 = second[1] / second[0]
    l1 = (c1 - b1 * l2) / a1
    return l1, l2


# -- complex units ----------------------------------------------------------


def _central_part_vectors(a: GradedAlgebra, g: GroupElement):
    """Rational basis of {x in A_g : x central}, as coefficient tuples."""
    from .scalars import RowReducer, totient

    comp = a.component(g)
    if not comp:
        return []
    width = len(comp)
    slots = totient(a.conductor)
    reducer = RowReducer(width)
    for s in range(a.dim):
        bs = a.basis_element(s)
        rows: dict = {}
        for pos, t in enumerate(comp):
            bt = a.basis_element(t)
            diff = bt * bs - bs * bt
            for k, c in diff.coeffs.items():
                for slot, q in enumerate(c.rational_coordinates()):
                    if q:
                        row = rows.setdefault((k, slot), [Fraction(0)] * width)
                        row[pos] = q
        for row in rows.values():
            reducer.add(row)
        if reducer.rank == width:
            return []
    return reducer.nullspace_rows()


def _vector_element(a: GradedAlgebra, g: GroupElement, vec) -> AlgebraElement:
    comp = a.component(g)
    return AlgebraElement(a, {t: CycloScalar.rational(q, a.conductor)
                              for t, q in zip(comp, vec) if q})


def _unit_multiple(a: GradedAlgebra, x: AlgebraElement):
    """The scalar c with x = c * unit, or None."""
    one = a.one()
    if x.is_zero():
        return CycloScalar.zero(a.conductor)
    k = min(one.coeffs)
    c = x.coeffs.get(k)
    if c is None:
        return None
    c = c / one.coeffs[k]
    return c if x == one.scale(c) else None


def _normalize_sign(j: AlgebraElement) -> AlgebraElement:
    lead = j.coeffs[min(j.coeffs)]
    for q in lead.rational_coordinates():
        if q:
            return j if q > 0 else -j
    return j


def find_complex_unit(a: GradedAlgebra):
    """A central homogeneous J with J^2 = -unit, or None.

    Degrees g with g^2 = e are scanned in canonical order; in each, the
    central part is computed exactly and a square root of -unit is solved
    for when that part has dimension 1, or dimension 2 containing the unit.
    Ties are broken by making the leading rational coordinate positive.
    """
    from .scalars import sqrt_of_rational_in_field

    e = a.group.identity
    for g in a.support():
        if g * g != e:
            continue
        vecs = _central_part_vectors(a, g)
        if not vecs or len(vecs) > 2:
            continue
        elems = [_vector_element(a, g, v) for v in vecs]
        if len(elems) == 1:
            v = elems[0]
            c = _unit_multiple(a, v * v)
            if c is None or not c.is_rational():
                continue
            cq = c.as_fraction()
            if cq >= 0:
                continue
            x = sqrt_of_rational_in_field(Fraction(-1) / cq, a.conductor)
            if x is None:
                continue
            return _normalize_sign(v.scale(x))
        # dimension 2: need the unit in the central part (g = e case)
        one = a.one()
        if g != e or not all(c.is_rational() for c in one.coeffs.values()):
            continue
        w = None
        for cand in elems:
            if _unit_multiple(a, cand) is None:
                w = cand
                break
        if w is None:
            continue
        ww = w * w
        sol = _solve_two(ww, one, w)
        if sol is None:
            continue
        p, q = sol
        if not p.is_rational() or not q.is_rational():
            continue
        disc = p.as_fraction() + q.as_fraction() ** 2 / 4
        if disc == 0:
            continue
        y = sqrt_of_rational_in_field(Fraction(-1) / disc, a.conductor)
        if y is None or not y.is_real():
            continue
        x = -(y * q) / 2
        j = one.scale(x) + w.scale(y)
        if (j * j + one).coeffs:
            continue
        return _normalize_sign(j)
    return None


# -- bicharacter tables -----------------------------------------------------


@dataclass(frozen=True)
class BicharTable:
    """Commutation factors on domain x domain with the bicharacter axioms.

    flavor is "real" or "complex"; complex tables carry the unit used.
    Equality compares domain and values only, so a complex table whose
    values happen to be real equals the corresponding real table.
    """

    domain: tuple[GroupElement, ...]
    values: dict
    flavor: str = "real"
    unit: AlgebraElement | None = None
    violations: tuple[str, ...] = ()

    def value(self, g: GroupElement, h: GroupElement) -> CycloScalar:
        return self.values[(g, h)]

    def is_real(self) -> bool:
        return all(v.is_real() for v in self.values.values())

    def conjugate(self) -> "BicharTable":
        return BicharTable(self.domain,
                           {k: v.conjugate() for k, v in self.values.items()},
                           self.flavor, self.unit, self.violations)

    def values_equal(self, other: "BicharTable") -> bool:
        if self.domain != other.domain:
            return False
        return all(self.values[k] == other.values[k] for k in self.values)

    def __eq__(self, other):
        if not isinstance(other, BicharTable):
            return NotImplemented
        return self.values_equal(other)

    def __hash__(self):
        return hash(self.domain)

    def as_matrix(self) -> list[list[CycloScalar]]:
        return [[self.values[(g, h)] for h in self.domain] for g in self.domain]


def bicharacter_table(a: GradedAlgebra, domain, flavor: str = "real",
                      unit: AlgebraElement | None = None) -> BicharTable:
    """Full commutation-factor table over the domain, axioms checked exactly."""
    if isinstance(domain, Subgroup):
        dom = domain.elements
    else:
        dom = tuple(sorted(domain))
    if flavor not in ("real", "complex"):
        raise PreconditionError("flavor must be 'real' or 'complex'")
    if flavor == "complex" and unit is None:
        raise PreconditionError("complex tables need a complex unit J")
    values = {}
    for g in dom:
        for h in dom:
            if flavor == "real":
                lam = commutation_factor(a, g, h)
            else:
                lam = complex_commutation_factor(a, g, h, unit)
            if lam is None:
                raise PreconditionError(
                    f"no commutation factor on the pair ({g}, {h})")
            values[(g, h)] = lam
    return BicharTable(dom, values, flavor, unit,
                       _axiom_violations(dom, values))


def _axiom_violations(dom, values) -> tuple[str, ...]:
    violations = []
    one = CycloScalar.one(1)
    for g in dom:
        for h in dom:
            if values[(g, h)] * values[(h, g)] != one:
                violations.append(f"skew symmetry fails at ({g}, {h})")
    domset = set(dom)
    for g in dom:
        for h in dom:
            gh = g * h
            if gh not in domset:
                continue
            for k in dom:
                if values[(gh, k)] != values[(g, k)] * values[(h, k)]:
                    violations.append(
                        f"multiplicativity fails at ({g}, {h}; {k})")
    return tuple(violations)


def bicharacter_via_hall(a: GradedAlgebra, g: GroupElement, h: GroupElement):
    """The lambda with (P z - lambda z P) an identity, P the Hall-style product
    ([x,y][x,w] + [x,w][x,y]) over x,w in A_e, y in A_g; None if the
    evaluations all vanish or no single lambda works.
    """
    e = a.group.identity
    ebasis = a.component_basis(e)
    if len(ebasis) != 4:
        raise PreconditionError("Hall bicharacter needs dim A_e = 4")
    gbasis = a.component_basis(g)
    hbasis = a.component_basis(h)
    lam = None
    for x in ebasis:
        for y in gbasis:
            cxy = x * y - y * x
            if cxy.is_zero():
                continue
            for w in ebasis:
                cxw = x * w - w * x
                if cxw.is_zero():
                    continue
                p = cxy * cxw + cxw * cxy
                if p.is_zero():
                    continue
                for z in hbasis:
                    lhs = p * z
                    rhs = z * p
                    if rhs.is_zero():
                        if lhs.is_zero():
                            continue
                        return None
                    if lam is None:
                        lam = _ratio(lhs, rhs)
                        if lam is None or not lam.is_real():
                            return None
                    elif lhs != rhs.scale(lam):
                        return None
    return lam


# -- support invariants ------------------------------------------------------


def commuting_support(a: GradedAlgebra) -> tuple[GroupElement, ...]:
    """Degrees g for which [x_e, y_g] is an identity."""
    e = a.group.identity
    ebasis = a.component_basis(e)
    out = []
    for g in a.support():
        if all((x * y) == (y * x)
               for x in ebasis for y in a.component_basis(g)):
            out.append(g)
    return tuple(out)


def central_support(a: GradedAlgebra) -> Subgroup | None:
    """commuting_support as a subgroup, or None when it is not one."""
    elems = commuting_support(a)
    try:
        return Subgroup(a.group, elems)
    except PreconditionError:
        return None


def division_part_support(a: GradedAlgebra) -> tuple[GroupElement, ...]:
    """Diagnostic recovery of the division-part support of a matrix grading.

    Uses x_e as a central polynomial, which is only valid when A_e is
    commutative: reports the degrees whose component commutes with A_e and
    multiplies it nontrivially.
    """
    e = a.group.identity
    ebasis = a.component_basis(e)
    for x in ebasis:
        for y in ebasis:
            if x * y != y * x:
                raise PreconditionError(
                    "diagnostic needs a commutative e-component")
    out = []
    for g in a.support():
        gb = a.component_basis(g)
        if all((x * y) == (y * x) for x in ebasis for y in gb) and \
                any(not (x * y).is_zero() or not (y * x).is_zero()
                    for x in ebasis for y in gb):
            out.append(g)
    return tuple(out)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class QuotientData:
    """Comparison data for Type II gradings with a non-elementary support."""

    theta: GroupHom
    supp_r: Subgroup
    bichar: BicharTable


@dataclass
class ClassificationReport:
    type_tag: str
    supp: Subgroup
    central_support: Subgroup | None
    supp_r: Subgroup | None
    bichar: BicharTable | None
    complex_unit: AlgebraElement | None = None
    quotient: QuotientData | None = None
    notes: list[str] = field(default_factory=list)


def _require_division(a: GradedAlgebra):
    if a.provenance and "division" in a.provenance:
        return
    verdict = check_graded_division(a)
    if verdict.verdict == "yes":
        return
    raise PreconditionError(
        f"not (verifiably) a graded division algebra: {verdict.reason}")


def _table_or_violation(a, domain, flavor="real", unit=None) -> BicharTable:
    try:
        table = bicharacter_table(a, domain, flavor, unit)
    except PreconditionError as err:
        raise InvariantViolation(
            f"inconsistent structure: {err}") from err
    if table.violations:
        raise InvariantViolation(
            "inconsistent structure: " + "; ".join(table.violations))
    return table


def classify(a: GradedAlgebra) -> ClassificationReport:
    """Type I-IV report for a graded division algebra."""
    cached = a._mul_cache.get("classification")
    if cached is not None:
        return cached
    report = _classify(a)
    a._mul_cache["classification"] = report
    return report


def _classify(a: GradedAlgebra) -> ClassificationReport:
    _require_division(a)
    try:
        supp = a.support_subgroup()
    except PreconditionError as err:
        raise InvariantViolation(
            f"support of a division grading must be a subgroup: {err}") from err
    e = a.group.identity
    d_e = len(a.component(e))
    notes = []
    if d_e == 1:
        table = _table_or_violation(a, supp)
        return ClassificationReport("I", supp, supp, supp, table,
                                    notes=["regular grading, real e-component"])
    if d_e == 4:
        dom = supp.elements
        values = {}
        for g in dom:
            for h in dom:
                lam = bicharacter_via_hall(a, g, h)
                if lam is None:
                    raise InvariantViolation(
                        f"inconsistent structure: no Hall factor at ({g}, {h})")
                values[(g, h)] = lam
        table = BicharTable(dom, values, "real",
                            violations=_axiom_violations(dom, values))
        if table.violations:
            raise InvariantViolation(
                "inconsistent structure: " + "; ".join(table.violations))
        cs = central_support(a)
        return ClassificationReport("III", supp, cs, supp, table,
                                    notes=["quaternion e-component"])
    if d_e != 2:
        raise InvariantViolation(
            f"e-component of a real division grading has dimension 1, 2 or 4, "
            f"got {d_e}")
    cs = central_support(a)
    commuting = set(commuting_support(a))
    if commuting == set(supp.elements):
        j = find_complex_unit(a)
        if j is None:
            raise PreconditionError(
                "central complex e-component but no constructible complex unit "
                "(irrational center constants are not handled)")
        table = _table_or_violation(a, supp, "complex", j)
        if table.is_real():
            return ClassificationReport("I", supp, cs, supp, table, complex_unit=j,
                                        notes=["regular grading, central complex "
                                               "e-component with real factors"])
        return ClassificationReport("IV", supp, cs, None, table, complex_unit=j,
                                    notes=["non-regular grading with complex "
                                           "bicharacter"])
    if cs is None:
        raise InvariantViolation(
            "commuting support of a Type II division grading must be a subgroup")
    j = find_complex_unit(a)
    if is_elementary_2group(supp):
        table = _table_or_violation(a, cs)
        return ClassificationReport("II", supp, cs, cs, table, complex_unit=j,
                                    notes=["standard case: elementary 2-group "
                                           "support"])
    g2 = squares_subgroup(supp)
    theta = quotient_hom(a.group, g2)
    atheta = quotient_grading(a, theta)
    qcs = central_support(atheta)
    if qcs is None:
        raise InvariantViolation(
            "commuting support of the quotient grading must be a subgroup")
    qtable = _table_or_violation(atheta, qcs)
    notes.append(f"quotient by the squares subgroup of order {g2.order}")
    if j is not None:
        notes.append(f"central complex unit found in degree {j.degree()}")
    return ClassificationReport("II", supp, cs, None, None, complex_unit=j,
                                quotient=QuotientData(theta, qcs, qtable),
                                notes=notes)


# -- equivalence of division gradings ----------------------------------------


@dataclass
class EquivDivisionReport:
    verdict: bool
    reason: str
    left: ClassificationReport
    right: ClassificationReport

    def __bool__(self):
        return self.verdict


def equiv_division(a: GradedAlgebra, b: GradedAlgebra) -> EquivDivisionReport:
    """Decide Id_G(A) = Id_G(B) for graded division algebras structurally."""
    if a.group != b.group:
        raise PreconditionError("algebras graded by different groups")
    ra = classify(a)
    rb = classify(b)

    def no(reason):
        return EquivDivisionReport(False, reason, ra, rb)

    if ra.type_tag != rb.type_tag:
        return no(f"types differ: {ra.type_tag} vs {rb.type_tag}")
    if set(ra.supp.elements) != set(rb.supp.elements):
        return no("supports differ")
    tag = ra.type_tag
    if tag in ("I", "III"):
        if not ra.bichar.values_equal(rb.bichar):
            return no("bicharacter tables differ")
        return EquivDivisionReport(True, f"Type {tag}: equal supports and "
                                   "bicharacters", ra, rb)
    if tag == "IV":
        if ra.bichar.values_equal(rb.bichar):
            return EquivDivisionReport(True, "Type IV: equal bicharacters", ra, rb)
        if ra.bichar.values_equal(rb.bichar.conjugate()):
            return EquivDivisionReport(True, "Type IV: conjugate bicharacters",
                                       ra, rb)
        return no("bicharacters neither equal nor conjugate")
    # Type II
    if (ra.quotient is None) != (rb.quotient is None):
        return no("comparison branches differ")
    if ra.quotient is None:
        if set(ra.supp_r.elements) != set(rb.supp_r.elements):
            return no("supp_R differ")
        if not ra.bichar.values_equal(rb.bichar):
            return no("bicharacter tables on supp_R differ")
        return EquivDivisionReport(True, "Type II standard: equal supp_R and "
                                   "tables", ra, rb)
    qa, qb = ra.quotient, rb.quotient
    if qa.theta != qb.theta:
        return no("quotient homs differ")
    if set(ra.central_support.elements) != set(rb.central_support.elements):
        return no("central supports differ")
    if set(qa.supp_r.elements) != set(qb.supp_r.elements):
        return no("quotient supp_R differ")
    if not qa.bichar.values_equal(qb.bichar):
        return no("quotient bicharacter tables differ")
    return EquivDivisionReport(True, "Type II via quotient: equal data", ra, rb)


# -- normalization of matrix triples -----------------------------------------


def _twisted_model(h: Subgroup, table: BicharTable, g0: GroupElement | None,
                   notes: list[str]) -> GradedAlgebra:
    """Twisted group algebra over h with the measured table, regraded into the
    ambient group; the diagonal sign -1 is placed on g0 when possible."""
    prefer = None
    diag = None
    if g0 is not None and not g0.is_identity:
        max_order = max(x.order() for x in h.elements)
        if g0.order() == max_order:
            prefer = g0
        else:
            notes.append("diagonal sign placement skipped: preferred degree "
                         "is not of maximal order (identities unaffected)")
    k, embed = subgroup_as_group(h, prefer_first=prefer)
    if prefer is not None:
        diag = (-1,) + (1,) * (k.rank - 1)
    beta = lambda x, y: table.value(embed(x), embed(y))
    return regrade(twisted_group_algebra(k, beta, diag), embed)


def normalize_triple(spec: TripleSpec) -> TripleSpec:
    """Rewrite (H, D, g) so that D has Type I or IV, preserving identities.

    Type I/IV triples pass through.  Type II splits off the two-dimensional
    non-commuting part: H' is the central support, the tuple doubles through
    (g_i, g_i*a) with a the least degree outside H', and D' is the twisted
    group algebra carrying the measured table (with u^2 = -1 on the degree of
    the central complex unit in the non-elementary case).  Type III drops the
    quaternion factor: the tuple doubles through (g_i, g_i) and D' carries
    the Hall table.
    """
    d = spec.division
    rep = classify(d)
    if rep.type_tag in ("I", "IV"):
        return spec
    notes: list[str] = []
    if rep.type_tag == "III":
        h = rep.supp_r
        dd = _twisted_model(h, rep.bichar, None, notes)
        tup = tuple(x for g in spec.g_tuple for x in (g, g))
        return TripleSpec(h, dd, tup)
    # Type II
    h = rep.central_support
    supp_elems = set(rep.supp.elements)
    if 2 * len(h.elements) != len(supp_elems):
        raise InvariantViolation(
            "central support must have index 2 in the support for Type II")
    a_elt = min(supp_elems - set(h.elements))
    table = _table_or_violation(d, h)
    g0 = None
    if rep.quotient is not None:
        if rep.complex_unit is not None:
            g0 = rep.complex_unit.degree()
        else:
            g2 = squares_subgroup(rep.supp)
            g0 = min(x for x in g2.elements if not x.is_identity)
    dd = _twisted_model(h, table, g0, notes)
    tup = tuple(x for g in spec.g_tuple for x in (g, g * a_elt))
    return TripleSpec(h, dd, tup)


# -- matrix-over-division equivalence -----------------------------------------


@dataclass
class MatrixEquivReport:
    verdict: bool
    reason: str
    shift: GroupElement | None = None

    def __bool__(self):
        return self.verdict


def equiv_matrix_over_division(sa: TripleSpec, sb: TripleSpec) -> MatrixEquivReport:
    """Decide equivalence of M_n(D) gradings given Type I/IV division parts."""
    g = sa.subgroup.parent
    if sb.subgroup.parent != g:
        raise PreconditionError("triples over different groups")
    for s, name in ((sa, "left"), (sb, "right")):
        if set(s.division.support()) != set(s.subgroup.elements):
            raise PreconditionError(
                f"{name} division part does not fill its subgroup; "
                "apply normalize_triple")
        tag = classify(s.division).type_tag
        if tag not in ("I", "IV"):
            raise PreconditionError(
                f"{name} division part has Type {tag}; apply normalize_triple")
    if sa.size != sb.size:
        return MatrixEquivReport(False, f"sizes differ: {sa.size} vs {sb.size}")
    if set(sa.subgroup.elements) != set(sb.subgroup.elements):
        return MatrixEquivReport(False, "subgroups differ")
    div = equiv_division(sa.division, sb.division)
    if not div.verdict:
        return MatrixEquivReport(False, f"division parts differ: {div.reason}")
    dec = CosetDecomposition(g, sa.subgroup)
    want = sorted(dec.rep_of(x) for x in sa.g_tuple)
    for cand in dec.reps:
        got = sorted(dec.rep_of(cand * x) for x in sb.g_tuple)
        if got == want:
            return MatrixEquivReport(True, "sizes, subgroups, division parts "
                                     "and coset multisets all match", cand)
    return MatrixEquivReport(False, "no group element aligns the coset multisets")
