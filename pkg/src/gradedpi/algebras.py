"""Finite-dimensional real algebras graded by finite abelian groups.

An algebra is stored by structure constants over a fixed basis: each product
of basis elements is a linear combination with real cyclotomic coefficients
(one conductor per algebra).  Every basis element is homogeneous; the grading
is the induced decomposition into components.

Construction never guesses: catalog entries carry their division provenance,
everything else can be checked with `check_graded_division`, whose criterion
is: the e-component is a real division algebra and every homogeneous basis
element is invertible (then each component A_g equals u*A_e for any invertible
u in it, so all nonzero homogeneous elements are invertible).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import PreconditionError
from .groups import FinAbGroup, GroupElement, GroupHom, Subgroup
from .scalars import CycloScalar, RowReducer, sqrt_of_rational_in_field


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class GradedAlgebra:
    """Structure-constant algebra with homogeneous basis.

    table maps (i, j) to a tuple of (k, scalar) pairs; missing keys mean the
    product of basis elements i and j is zero.  All scalars live at the
    algebra's conductor and are real (conjugation-fixed); the constructor
    rejects non-real constants.
    """

    __slots__ = ("group", "conductor", "labels", "degrees", "table", "unit",
                 "provenance", "_components", "_mul_cache")

    def __init__(self, group: FinAbGroup, conductor: int, labels, degrees,
                 table, unit, provenance: str | None = None):
        labels = tuple(labels)
        degrees = tuple(degrees)
        if len(labels) != len(degrees) or not labels:
            raise PreconditionError("labels and degrees must align and be nonempty")
        if len(set(labels)) != len(labels):
            raise PreconditionError("duplicate basis labels")
        for g in degrees:
            if g.group != group:
                raise PreconditionError(f"degree {g} outside the grading group")
        norm_table = {}
        for (i, j), entries in table.items():
            out = []
            for k, s in entries:
                s = CycloScalar.coerce(s, conductor)
                if s.conductor != conductor:
                    s = s.promote(conductor)
                if not s.is_real():
                    raise PreconditionError(
                        f"structure constant for ({labels[i]},{labels[j]}) is not real")
                if not s.is_zero():
                    out.append((k, s))
            if out:
                out.sort(key=lambda p: p[0])
                norm_table[(i, j)] = tuple(out)
        norm_unit = {}
        for k, s in unit.items():
            s = CycloScalar.coerce(s, conductor)
            if s.conductor != conductor:
                s = s.promote(conductor)
            if not s.is_real():
                raise PreconditionError("unit coefficient is not real")
            if not s.is_zero():
                norm_unit[k] = s
        if not norm_unit:
            raise PreconditionError("the algebra must be unital (unit must be nonzero)")
        e = group.identity
        if any(degrees[k] != e for k in norm_unit):
            raise PreconditionError("unit must be homogeneous of trivial degree")
        self.group = group
        self.conductor = conductor
        self.labels = labels
        self.degrees = degrees
        self.table = norm_table
        self.unit = norm_unit
        self.provenance = provenance
        comps: dict[GroupElement, list[int]] = {}
        for idx, g in enumerate(degrees):
            comps.setdefault(g, []).append(idx)
        self._components = {g: tuple(v) for g, v in comps.items()}
        self._mul_cache = {}

    # -- basic queries ---------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def component(self, g: GroupElement) -> tuple[int, ...]:
        return self._components.get(g, ())

    def component_dims(self) -> dict[GroupElement, int]:
        return {g: len(v) for g, v in self._components.items()}

    def support(self) -> tuple[GroupElement, ...]:
        return tuple(sorted(self._components))

    def support_subgroup(self) -> Subgroup:
        return Subgroup(self.group, self._components)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PreconditionError(f"no basis element labeled {label!r}") from None

    # -- element construction ---------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, dict(self.unit))

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: CycloScalar.one(self.conductor)})

    def element(self, coeffs: dict) -> "AlgebraElement":
        out = {}
        for i, c in coeffs.items():
            idx = self.label_index(i) if isinstance(i, str) else int(i)
            s = CycloScalar.coerce(c, self.conductor)
            if not s.is_zero():
                out[idx] = s
        return AlgebraElement(self, out)

    def component_basis(self, g: GroupElement) -> list["AlgebraElement"]:
        return [self.basis_element(i) for i in self.component(g)]

    def mul_basis(self, i: int, j: int):
        return self.table.get((i, j), ())

    def __repr__(self):
        tag = f", {self.provenance}" if self.provenance else ""
        return f"GradedAlgebra(dim {self.dim} over {self.group}{tag})"


class AlgebraElement:
    """Sparse element: nonzero coefficients by basis index."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: GradedAlgebra, coeffs: dict):
        # coefficients are kept at the parent conductor so that coords() slots
        # mean the same power-basis position for every coefficient
        self.parent = parent
        cond = parent.conductor
        out = {}
        for i, c in coeffs.items():
            if c.conductor != cond:
                c = c.promote(cond)
            if not c.is_zero():
                out[i] = c
        self.coeffs = out

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> GroupElement | None:
        """Degree of a nonzero homogeneous element, None if mixed or zero."""
        degs = {self.parent.degrees[i] for i in self.coeffs}
        return next(iter(degs)) if len(degs) == 1 else None

    def homogeneous_components(self) -> dict[GroupElement, "AlgebraElement"]:
        out: dict[GroupElement, dict] = {}
        for i, c in self.coeffs.items():
            out.setdefault(self.parent.degrees[i], {})[i] = c
        return {g: AlgebraElement(self.parent, d) for g, d in out.items()}

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, CycloScalar.zero(self.parent.conductor)) + c
        return AlgebraElement(self.parent, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.parent, {i: -c for i, c in self.coeffs.items()})

    def scale(self, s) -> "AlgebraElement":
        s = CycloScalar.coerce(s, self.parent.conductor)
        return AlgebraElement(self.parent, {i: c * s for i, c in self.coeffs.items()})

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction, CycloScalar)):
            return self.scale(s)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scale(other)
        self._check(other)
        table = self.parent.table
        cond = self.parent.conductor
        out: dict[int, CycloScalar] = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                entries = table.get((i, j))
                if not entries:
                    continue
                f = ci * cj
                for k, s in entries:
                    prev = out.get(k)
                    out[k] = f * s if prev is None else prev + f * s
        return AlgebraElement(self.parent, out)

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.parent is not self.parent:
            raise PreconditionError("elements of different algebras")

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.parent is not self.parent:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((id(self.parent),
                     tuple((i, self.coeffs[i]) for i in sorted(self.coeffs))))

    def coords(self) -> dict[tuple[int, int], Fraction]:
        """Rational coordinates: (basis index, power-basis slot) -> value."""
        out = {}
        for i, c in self.coeffs.items():
            for k, q in enumerate(c.rational_coordinates()):
                if q:
                    out[(i, k)] = q
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in sorted(self.coeffs):
            c = self.coeffs[i]
            parts.append(f"({c!r})*{self.parent.labels[i]}")
        return " + ".join(parts)


# -- validation ----------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str] = field(default_factory=list)


def validate(a: GradedAlgebra) -> ValidationReport:
    """Associativity on all basis triples, unit laws, degree compatibility."""
    failures = []
    for (i, j), entries in a.table.items():
        want = a.degrees[i] * a.degrees[j]
        for k, _ in entries:
            if a.degrees[k] != want:
                failures.append(
                    f"degree violation: {a.labels[i]}*{a.labels[j]} hits {a.labels[k]}")
    one = a.one()
    for i in range(a.dim):
        b = a.basis_element(i)
        if one * b != b or b * one != b:
            failures.append(f"unit law fails at {a.labels[i]}")
    basis = [a.basis_element(i) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            ij = basis[i] * basis[j]
            for k in range(a.dim):
                if (ij * basis[k]) != (basis[i] * (basis[j] * basis[k])):
                    failures.append(
                        f"associativity fails at ({a.labels[i]},{a.labels[j]},{a.labels[k]})")
    return ValidationReport(ok=not failures, failures=failures)


# -- invertibility and the graded-division criterion ----------------------


def left_multiplication_matrix(x: AlgebraElement, indices=None):
    """Rows of L_x restricted to span(basis[i] for i in indices), over the field."""
    a = x.parent
    if indices is None:
        indices = range(a.dim)
    indices = list(indices)
    pos = {t: s for s, t in enumerate(indices)}
    rows = []
    for t in indices:
        prod = x * a.basis_element(t)
        row = [CycloScalar.zero(a.conductor)] * len(indices)
        for k, c in prod.coeffs.items():
            if k not in pos:
                raise PreconditionError("multiplication leaves the requested span")
            row[pos[k]] = c
        rows.append(row)
    # rows are images of basis vectors: transpose to the usual matrix of L_x
    return [[rows[j][i] for j in range(len(indices))] for i in range(len(indices))]


def _field_rank(rows: list[list[CycloScalar]]) -> int:
    if rows and all(all(c.is_rational() for c in row) for row in rows):
        red = RowReducer(len(rows[0]))
        for row in rows:
            red.add([c.as_fraction() for c in row])
        return red.rank
    rows = [list(r) for r in rows]
    rank, width = 0, len(rows[0]) if rows else 0
    pivot_rows: list[tuple[int, list[CycloScalar]]] = []
    for row in rows:
        for lead, prow in pivot_rows:
            if not row[lead].is_zero():
                f = row[lead]
                for j in range(width):
                    row[j] = row[j] - f * prow[j]
        lead = next((j for j in range(width) if not row[j].is_zero()), None)
        if lead is None:
            continue
        inv = row[lead].inverse()
        row = [c * inv for c in row]
        pivot_rows.append((lead, row))
        rank += 1
    return rank


def is_invertible(x: AlgebraElement) -> bool:
    if x.is_zero():
        return False
    m = left_multiplication_matrix(x)
    return _field_rank(m) == x.parent.dim


@dataclass
class DivisionVerdict:
    verdict: str  # "yes" | "no" | "undecided"
    witness: AlgebraElement | None = None
    reason: str = ""

    def __bool__(self):
        return self.verdict == "yes"


def _det2_form(mu, mv):
    # det(s*Mu + t*Mv) coefficients (s^2, st, t^2) for 2x2 matrices.
    a, b = mu, mv
    s2 = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    t2 = b[0][0] * b[1][1] - b[0][1] * b[1][0]
    st = a[0][0] * b[1][1] + b[0][0] * a[1][1] - a[0][1] * b[1][0] - b[0][1] * a[1][0]
    return s2, st, t2


class _Poly:
    """Tiny multivariate polynomial with CycloScalar coefficients."""

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = dict(terms or {})

    @classmethod
    def variable_form(cls, nvars, coeffs):
        # linear form sum coeffs[s] * x_s
        t = {}
        for s, c in enumerate(coeffs):
            if not c.is_zero():
                key = tuple(1 if v == s else 0 for v in range(nvars))
                t[key] = c
        return cls(nvars, t)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return _Poly(self.nvars, out)

    def __neg__(self):
        return _Poly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                prod = c1 * c2
                prev = out.get(key)
                s = prod if prev is None else prev + prod
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return _Poly(self.nvars, out)

    def coeff(self, key):
        return self.terms.get(key)

    def is_zero(self):
        return not self.terms


def _det_poly(mats):
    """det(sum_s x_s * mats[s]) as a _Poly; mats are d x d CycloScalar matrices."""
    d = len(mats[0])
    nvars = len(mats)
    entry = [[_Poly.variable_form(nvars, [m[i][j] for m in mats]) for j in range(d)]
             for i in range(d)]
    total = _Poly(nvars)
    for perm in itertools.permutations(range(d)):
        sign = 1
        seen = list(perm)
        for i in range(d):  # count inversions
            for j in range(i + 1, d):
                if seen[i] > seen[j]:
                    sign = -sign
        term = entry[0][perm[0]]
        for i in range(1, d):
            term = term * entry[i][perm[i]]
        total = total + (term if sign > 0 else -term)
    return total


def _search_noninvertible(a: GradedAlgebra, indices, bound=1):
    vals = range(-bound, bound + 1)
    for combo in itertools.product(vals, repeat=len(indices)):
        if not any(combo):
            continue
        x = AlgebraElement(a, {t: CycloScalar.rational(c, a.conductor)
                               for t, c in zip(indices, combo) if c})
        if not is_invertible(x):
            return x
    return None


def _e_component_division(a: GradedAlgebra) -> DivisionVerdict:
    e_idx = list(a.component(a.group.identity))
    d = len(e_idx)
    if d == 1:
        return DivisionVerdict("yes", reason="e-component is spanned by the unit")
    mats = [left_multiplication_matrix(a.basis_element(t), e_idx) for t in e_idx]
    if d == 2:
        s2, st, t2 = _det2_form(mats[0], mats[1])
        disc = st * st - 4 * (s2 * t2)
        if not disc.is_real():
            raise PreconditionError("norm-form discriminant is not real")
        if disc.sign() < 0 and not s2.is_zero():
            return DivisionVerdict("yes", reason="definite binary norm form")
        w = _search_noninvertible(a, e_idx, bound=2)
        return DivisionVerdict("no", witness=w,
                               reason="indefinite or degenerate binary norm form")
    if d == 4:
        quartic = _det_poly(mats)
        e4 = [tuple(4 if v == s else 0 for v in range(4)) for s in range(4)]
        c1 = quartic.coeff(e4[0])
        if c1 is None:
            return DivisionVerdict("no", witness=a.basis_element(e_idx[0]),
                                   reason="a basis element of the e-component is singular")
        if not c1.is_rational():
            return DivisionVerdict("undecided",
                                   reason="quartic leading coefficient is irrational")
        a11 = sqrt_of_rational_in_field(c1.as_fraction(), a.conductor)
        if c1.as_fraction() < 0 or a11 is None:
            if c1.as_fraction() < 0:
                w = _search_noninvertible(a, e_idx)
                return DivisionVerdict("no", witness=w,
                                       reason="norm quartic is negative at a basis vector")
            return DivisionVerdict("undecided",
                                   reason="square root of quartic coefficient not in field")
        half = Fraction(1, 2)
        q = {(0, 0): a11}
        for j in range(1, 4):
            key = tuple(3 if v == 0 else (1 if v == j else 0) for v in range(4))
            c = quartic.coeff(key) or CycloScalar.zero(a.conductor)
            q[(0, j)] = c / (2 * a11)
        for j in range(1, 4):
            key = tuple(2 if v in (0, j) else 0 for v in range(4))
            c = quartic.coeff(key) or CycloScalar.zero(a.conductor)
            q[(j, j)] = (c - q[(0, j)] * q[(0, j)]) / (2 * a11)
        for j in range(1, 4):
            for k in range(j + 1, 4):
                key = tuple(2 if v == 0 else (1 if v in (j, k) else 0) for v in range(4))
                c = quartic.coeff(key) or CycloScalar.zero(a.conductor)
                q[(j, k)] = (c - 2 * (q[(0, j)] * q[(0, k)])) / (2 * a11)
        qpoly = _Poly(4)
        for (i, j), c in q.items():
            key = tuple((2 if i == j else 1) if v in (i, j) else 0 for v in range(4))
            qpoly = qpoly + _Poly(4, {key: c})
        if not (qpoly * qpoly - quartic).is_zero():
            w = _search_noninvertible(a, e_idx)
            return DivisionVerdict("no", witness=w,
                                   reason="norm quartic is not the square of a quadratic form")
        # definiteness of q via leading principal minors (q or -q positive definite)
        m = [[None] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(4):
                if i == j:
                    m[i][j] = q[(i, i)]
                else:
                    m[i][j] = q[(min(i, j), max(i, j))] * half
        minors = []
        for k in range(1, 5):
            sub = [[m[i][j] for j in range(k)] for i in range(k)]
            minors.append(_field_det(sub))
        signs = [x.sign() for x in minors]
        pos_def = all(s > 0 for s in signs)
        neg_def = all(s > 0 if k % 2 == 0 else s < 0 for k, s in enumerate(signs, start=1))
        if pos_def or neg_def:
            return DivisionVerdict("yes", reason="norm quartic is the square of a definite form")
        w = _search_noninvertible(a, e_idx)
        return DivisionVerdict("no", witness=w, reason="indefinite quaternary norm form")
    return DivisionVerdict("undecided",
                           reason=f"e-component of dimension {d} is outside the decided cases")


def _field_det(mat):
    # Gaussian elimination determinant over the cyclotomic field.
    n = len(mat)
    m = [row[:] for row in mat]
    det = CycloScalar.one(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return CycloScalar.zero(1)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] = m[r][c] - f * m[col][c]
    return det


def check_graded_division(a: GradedAlgebra) -> DivisionVerdict:
    """Decide whether every nonzero homogeneous element is invertible."""
    for i in range(a.dim):
        b = a.basis_element(i)
        if not is_invertible(b):
            return DivisionVerdict("no", witness=b,
                                   reason=f"basis element {a.labels[i]} is not invertible")
    everdict = _e_component_division(a)
    if everdict.verdict != "yes":
        return everdict
    return DivisionVerdict(
        "yes", reason="e-component is a division algebra and all basis elements are invertible")


# -- constructors ----------------------------------------------------------


def _quaternion_table():
    # basis 1, i, j, k
    one = Fraction(1)
    t = {}
    for s in range(4):
        t[(0, s)] = ((s, one),)
        if s:
            t[(s, 0)] = ((s, one),)
    t[(1, 1)] = ((0, -one),)
    t[(2, 2)] = ((0, -one),)
    t[(3, 3)] = ((0, -one),)
    t[(1, 2)] = ((3, one),)
    t[(2, 1)] = ((3, -one),)
    t[(2, 3)] = ((1, one),)
    t[(3, 2)] = ((1, -one),)
    t[(3, 1)] = ((2, one),)
    t[(1, 3)] = ((2, -one),)
    return t


_SYLVESTER = {  # (X, Y) -> (Z, sign) on symbols I, A, B, C
    ("I", "I"): ("I", 1), ("I", "A"): ("A", 1), ("I", "B"): ("B", 1), ("I", "C"): ("C", 1),
    ("A", "I"): ("A", 1), ("B", "I"): ("B", 1), ("C", "I"): ("C", 1),
    ("A", "A"): ("I", 1), ("B", "B"): ("I", 1), ("C", "C"): ("I", -1),
    ("A", "B"): ("C", 1), ("B", "A"): ("C", -1),
    ("A", "C"): ("B", 1), ("C", "A"): ("B", -1),
    ("B", "C"): ("A", -1), ("C", "B"): ("A", 1),
}


def _sylvester_table():
    names = ["I", "A", "B", "C"]
    t = {}
    for i, x in enumerate(names):
        for j, y in enumerate(names):
            z, sign = _SYLVESTER[(x, y)]
            t[(i, j)] = ((names.index(z), Fraction(sign)),)
    return t


def _klein_degrees(group):
    e = group.identity
    a = group.element((1, 0))
    b = group.element((0, 1))
    return (e, a, b, a * b)


def trivially_graded_reals(group: FinAbGroup) -> GradedAlgebra:
    return GradedAlgebra(group, 4, ("1",), (group.identity,),
                         {(0, 0): ((0, Fraction(1)),)},
                         {0: Fraction(1)}, provenance="trivially graded R")


def trivially_graded_complex(group: FinAbGroup) -> GradedAlgebra:
    e = group.identity
    return GradedAlgebra(group, 4, ("1", "i"), (e, e),
                         {(0, 0): ((0, Fraction(1)),), (0, 1): ((1, Fraction(1)),),
                          (1, 0): ((1, Fraction(1)),), (1, 1): ((0, Fraction(-1)),)},
                         {0: Fraction(1)}, provenance="trivially graded C")


def _catalog_h4():
    g = FinAbGroup((2, 2))
    return GradedAlgebra(g, 4, ("1", "i", "j", "k"), _klein_degrees(g),
                         _quaternion_table(), {0: Fraction(1)},
                         provenance="catalog:H4 (division grading)")


def _catalog_m2_4():
    g = FinAbGroup((2, 2))
    return GradedAlgebra(g, 4, ("I", "A", "B", "C"), _klein_degrees(g),
                         _sylvester_table(), {0: Fraction(1)},
                         provenance="catalog:M2_4 (division grading)")


def _catalog_c2():
    g = FinAbGroup((2,))
    return GradedAlgebra(g, 4, ("1", "i"), (g.identity, g.element((1,))),
                         {(0, 0): ((0, Fraction(1)),), (0, 1): ((1, Fraction(1)),),
                          (1, 0): ((1, Fraction(1)),), (1, 1): ((0, Fraction(-1)),)},
                         {0: Fraction(1)}, provenance="catalog:C2 (division grading)")


def _catalog_m2_2():
    m24 = _catalog_m2_4()
    z2 = FinAbGroup((2,))
    theta = GroupHom(m24.group, z2, (z2.element((1,)), z2.element((1,))))
    out = quotient_grading(m24, theta)
    return GradedAlgebra(out.group, out.conductor, out.labels, out.degrees,
                         out.table, out.unit,
                         provenance="catalog:M2_2 (division grading)")


def _catalog_h2():
    h4 = _catalog_h4()
    z2 = FinAbGroup((2,))
    theta = GroupHom(h4.group, z2, (z2.element((0,)), z2.element((1,))))
    out = quotient_grading(h4, theta)
    return GradedAlgebra(out.group, out.conductor, out.labels, out.degrees,
                         out.table, out.unit,
                         provenance="catalog:H2 (division grading)")


def _catalog_m2c_z4():
    # Basis (omega^t * X) with t in 0..3, X Sylvester; omega^2 = i, omega = zeta_8.
    g = FinAbGroup((4,))
    pairs = [(0, "I"), (0, "C"), (1, "A"), (1, "B"),
             (2, "I"), (2, "C"), (3, "A"), (3, "B")]
    labels = ("I", "C", "wA", "wB", "iI", "iC", "iwA", "iwB")
    index = {p: i for i, p in enumerate(pairs)}
    degrees = tuple(g.element((t,)) for t, _ in pairs)
    table = {}
    for i, (t, x) in enumerate(pairs):
        for j, (u, y) in enumerate(pairs):
            z, sign = _SYLVESTER[(x, y)]
            v = t + u
            sign *= (-1) ** (v // 4)
            entry = index[(v % 4, z)]
            table[(i, j)] = ((entry, Fraction(sign)),)
    return GradedAlgebra(g, 4, labels, degrees, table, {0: Fraction(1)},
                         provenance="catalog:M2C_Z4 (division grading)")


def _catalog_pauli(n: int, k: int):
    if n < 1 or gcd(k, n) != 1:
        raise PreconditionError("pauli requires order n >= 1 and exponent coprime to n")
    g = FinAbGroup((n, n))
    cond = _lcm(4, n)
    labels, degrees = [], []
    for a in range(n):
        for b in range(n):
            labels.append(f"X{a}Y{b}")
            labels.append(f"iX{a}Y{b}")
            degrees.extend([g.element((a, b))] * 2)
    idx = lambda a, b, s: (a * n + b) * 2 + s
    table = {}
    for a, b, s in itertools.product(range(n), range(n), range(2)):
        for c, d, t in itertools.product(range(n), range(n), range(2)):
            power = (s + t) * (cond // 4) - k * b * c * (cond // n)
            z = CycloScalar.root_of_unity(cond, power)
            re, im = z.real_part(), z.imag_part()
            entries = []
            if not re.is_zero():
                entries.append((idx((a + c) % n, (b + d) % n, 0), re))
            if not im.is_zero():
                entries.append((idx((a + c) % n, (b + d) % n, 1), im))
            table[(idx(a, b, s), idx(c, d, t))] = tuple(entries)
    return GradedAlgebra(g, cond, labels, degrees, table, {0: Fraction(1)},
                         provenance=f"catalog:pauli({n},{k}) (division grading)")


def _catalog_quat_trivial():
    g = FinAbGroup((2, 2))
    e = g.identity
    return GradedAlgebra(g, 4, ("1", "i", "j", "k"), (e, e, e, e),
                         _quaternion_table(), {0: Fraction(1)},
                         provenance="catalog:quat_trivial (division grading)")


def _catalog_m2_8():
    m24, c2 = _catalog_m2_4(), _catalog_c2()
    g = FinAbGroup((2, 2, 2))
    ea = GroupHom(m24.group, g, (g.element((1, 0, 0)), g.element((0, 1, 0))))
    eb = GroupHom(c2.group, g, (g.element((0, 0, 1)),))
    out = tensor_product(m24, c2, g, ea, eb)
    return GradedAlgebra(out.group, out.conductor, out.labels, out.degrees,
                         out.table, out.unit,
                         provenance="catalog:M2_8 (division grading)")


def _catalog_m4_4():
    h4, qt = _catalog_h4(), _catalog_quat_trivial()
    g = h4.group
    ident = GroupHom(g, g, g.generators())
    out = tensor_product(h4, qt, g, ident, ident)
    return GradedAlgebra(out.group, out.conductor, out.labels, out.degrees,
                         out.table, out.unit,
                         provenance="catalog:M4_4 (division grading)")


_CATALOG_BUILDERS = {
    "H4": _catalog_h4,
    "M2_4": _catalog_m2_4,
    "M2_2": _catalog_m2_2,
    "H2": _catalog_h2,
    "C2": _catalog_c2,
    "M2C_Z4": _catalog_m2c_z4,
    "M2_8": _catalog_m2_8,
    "M4_4": _catalog_m4_4,
    "quat_trivial": _catalog_quat_trivial,
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG_BUILDERS) + ["pauli(n,k)"]


def catalog(name: str, *params) -> GradedAlgebra:
    if name == "pauli":
        if len(params) != 2:
            raise PreconditionError("pauli needs parameters (n, k)")
        return _catalog_pauli(int(params[0]), int(params[1]))
    builder = _CATALOG_BUILDERS.get(name)
    if builder is None:
        raise PreconditionError(
            f"unknown catalog name {name!r}; available: {', '.join(catalog_names())}")
    if params:
        raise PreconditionError(f"catalog entry {name} takes no parameters")
    return builder()


def tensor_product(left: GradedAlgebra, right: GradedAlgebra, group: FinAbGroup,
                   embed_left: GroupHom, embed_right: GroupHom) -> GradedAlgebra:
    """Graded tensor product over R, degrees multiplied through the embeddings."""
    if embed_left.domain != left.group or embed_right.domain != right.group:
        raise PreconditionError("embedding domain does not match factor group")
    if embed_left.codomain != group or embed_right.codomain != group:
        raise PreconditionError("embedding codomain is not the target group")
    if not embed_left.is_injective() or not embed_right.is_injective():
        raise PreconditionError("embeddings must be injective")
    s_left = Subgroup.generated_by(group, [embed_left(g) for g in left.support()])
    s_right = Subgroup.generated_by(group, [embed_right(g) for g in right.support()])
    if s_left.intersection(s_right).order != 1:
        raise PreconditionError("support images must intersect trivially")
    cond = _lcm(left.conductor, right.conductor)
    labels, degrees = [], []
    for i in range(left.dim):
        for j in range(right.dim):
            labels.append(f"{left.labels[i]}(x){right.labels[j]}")
            degrees.append(embed_left(left.degrees[i]) * embed_right(right.degrees[j]))
    pos = lambda i, j: i * right.dim + j
    table = {}
    for (i, i2), le in left.table.items():
        for (j, j2), re_ in right.table.items():
            entries = []
            for k, s1 in le:
                for l, s2 in re_:
                    entries.append((pos(k, l), s1.promote(cond) * s2.promote(cond)))
            entries.sort(key=lambda p: p[0])
            table[(pos(i, j), pos(i2, j2))] = tuple(entries)
    unit = {}
    for i, ci in left.unit.items():
        for j, cj in right.unit.items():
            unit[pos(i, j)] = ci.promote(cond) * cj.promote(cond)
    return GradedAlgebra(group, cond, labels, degrees, table, unit)


def quotient_grading(a: GradedAlgebra, theta: GroupHom) -> GradedAlgebra:
    """Coarsen the grading through theta; same underlying algebra."""
    if theta.domain != a.group:
        raise PreconditionError("quotient hom domain does not match the grading group")
    return GradedAlgebra(theta.codomain, a.conductor, a.labels,
                         tuple(theta(g) for g in a.degrees), a.table, a.unit)


def regrade(a: GradedAlgebra, iso: GroupHom) -> GradedAlgebra:
    """Relabel degrees through an injective hom (bijective onto its image)."""
    if iso.domain != a.group:
        raise PreconditionError("regrade hom domain does not match the grading group")
    if not iso.is_injective():
        raise PreconditionError("regrade requires an injective hom")
    return GradedAlgebra(iso.codomain, a.conductor, a.labels,
                         tuple(iso(g) for g in a.degrees), a.table, a.unit,
                         provenance=a.provenance)


@dataclass(frozen=True)
class TripleSpec:
    """Matrix-over-division data (H, D, g): M_n(D) with entry degrees g_i^-1 h g_j."""

    subgroup: Subgroup
    division: GradedAlgebra
    g_tuple: tuple[GroupElement, ...]

    def __post_init__(self):
        h, d, tup = self.subgroup, self.division, self.g_tuple
        if d.group != h.parent:
            raise PreconditionError("division algebra graded by a different group")
        if not tup:
            raise PreconditionError("g tuple must be nonempty")
        for g in tup:
            if g.group != h.parent:
                raise PreconditionError("g tuple entry outside the group")
        for g in d.support():
            if g not in h:
                raise PreconditionError("support of D must lie inside H")

    @property
    def size(self) -> int:
        return len(self.g_tuple)


def matrix_over_division(spec: TripleSpec) -> GradedAlgebra:
    d, tup = spec.division, spec.g_tuple
    n = len(tup)
    labels, degrees = [], []
    for i in range(n):
        for j in range(n):
            for t in range(d.dim):
                labels.append(f"{d.labels[t]}E{i + 1}{j + 1}")
                degrees.append(tup[i].inverse() * d.degrees[t] * tup[j])
    pos = lambda i, j, t: (i * n + j) * d.dim + t
    table = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                for (t, u), entries in d.table.items():
                    table[(pos(i, j, t), pos(j, l, u))] = tuple(
                        (pos(i, l, v), s) for v, s in entries)
    unit = {}
    for i in range(n):
        for t, c in d.unit.items():
            unit[pos(i, i, t)] = c
    return GradedAlgebra(d.group, d.conductor, labels, degrees, table, unit)


def twisted_group_algebra(group: FinAbGroup, beta, diagonal_signs=None) -> GradedAlgebra:
    """Group algebra of `group` twisted so that u_g u_h = beta(g,h) u_h u_g.

    beta is a callable on pairs of group elements returning +-1 scalars with
    trivial diagonal on the generators; diagonal_signs[i] fixes u_{gen_i}^n_i.
    The result is a graded division algebra with 1-dimensional components.
    """
    gens = group.generators()
    rank = group.rank
    if diagonal_signs is None:
        diagonal_signs = (1,) * rank
    bvals = {}
    for i in range(rank):
        for j in range(rank):
            v = beta(gens[i], gens[j])
            f = v.as_fraction() if isinstance(v, CycloScalar) else Fraction(v)
            if f not in (1, -1):
                raise PreconditionError("twisted group algebra needs +-1 commutation values")
            bvals[(i, j)] = int(f)
    for i in range(rank):
        if bvals[(i, i)] != 1:
            raise PreconditionError("commutation value on a repeated generator must be 1")
        for j in range(rank):
            if bvals[(i, j)] != bvals[(j, i)]:
                raise PreconditionError("commutation values must be symmetric for +-1 twists")
    elements = group.elements()
    index = {g: i for i, g in enumerate(elements)}
    labels = tuple("u" + "_".join(str(e) for e in g.exps) if g.exps else "u0"
                   for g in elements)
    table = {}
    for ga in elements:
        for gb in elements:
            sign = 1
            for i in range(rank):
                for j in range(rank):
                    if i > j and ga.exps[i] and gb.exps[j]:
                        if bvals[(i, j)] == -1 and (ga.exps[i] * gb.exps[j]) % 2:
                            sign = -sign
            for i, n in enumerate(group.orders):
                if ga.exps[i] + gb.exps[i] >= n and diagonal_signs[i] == -1:
                    sign = -sign
            table[(index[ga], index[gb])] = ((index[ga * gb], Fraction(sign)),)
    unit = {index[group.identity]: Fraction(1)}
    return GradedAlgebra(group, 4, labels, tuple(elements), table, unit,
                         provenance="twisted group algebra (division grading)")
