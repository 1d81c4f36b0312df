"""Graded polynomials, their evaluation, and multilinear identity spaces.

Identity spaces are computed over the rationals although the algebras are
real: for a fixed degree tuple the vanishing conditions form a linear system
with rational coefficients (structure constants are expanded over the power
basis of the cyclotomic field), so the real solution space is spanned by the
rational kernel.  Comparing canonical rational kernels therefore decides
equality of the real identity spaces.

For non-multilinear polynomials, `is_identity` substitutes generic elements
(indeterminate real coefficients on each component basis) and checks that the
expansion vanishes coefficientwise; over an infinite field this is equivalent
to vanishing under all substitutions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebras import AlgebraElement, GradedAlgebra
from .errors import (InadmissibleSubstitution, PolynomialSyntaxError,
                     PreconditionError)
from .groups import FinAbGroup, GroupElement, GroupHom
from .scalars import CycloScalar, RationalMatrix, RowReducer


@dataclass(frozen=True)
class VarRef:
    """Graded variable: identity is the (degree, index) pair."""

    degree: GroupElement
    index: int

    def sort_key(self):
        return (self.index, self.degree.exps)

    def __repr__(self):
        g = "e" if self.degree.is_identity else repr(self.degree)
        return f"x[{g},{self.index}]"


class GradedPolynomial:
    """Linear combination of words in graded variables, scalar coefficients.

    Terms map a nonempty tuple of VarRef to a nonzero scalar.  Coefficients
    are cyclotomic to allow commutation relations with root-of-unity factors;
    the text grammar only produces rational ones.
    """

    __slots__ = ("group", "terms")

    def __init__(self, group: FinAbGroup, terms: dict):
        norm = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if not mono:
                raise PreconditionError("graded polynomials have no constant term")
            for v in mono:
                if not isinstance(v, VarRef) or v.degree.group != group:
                    raise PreconditionError(f"variable {v} outside the grading group")
            c = CycloScalar.coerce(c, 1) if not isinstance(c, CycloScalar) else c
            if not c.is_zero():
                prev = norm.get(mono)
                norm[mono] = c if prev is None else prev + c
        self.group = group
        self.terms = {m: c for m, c in norm.items() if not c.is_zero()}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, group: FinAbGroup) -> "GradedPolynomial":
        return cls(group, {})

    @classmethod
    def monomial(cls, group: FinAbGroup, varrefs, coeff=1) -> "GradedPolynomial":
        return cls(group, {tuple(varrefs): coeff})

    @classmethod
    def variable(cls, group: FinAbGroup, degree: GroupElement, index: int):
        return cls.monomial(group, (VarRef(degree, index),))

    # -- algebra ----------------------------------------------------------

    def _check(self, other):
        if other.group != self.group:
            raise PreconditionError("polynomials over different grading groups")

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        return GradedPolynomial(self.group, out)

    def __neg__(self):
        return GradedPolynomial(self.group, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scale(other)
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 + m2
                prod = c1 * c2
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
        return GradedPolynomial(self.group, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycloScalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, s) -> "GradedPolynomial":
        s = CycloScalar.coerce(s, 1)
        return GradedPolynomial(self.group, {m: c * s for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "GradedPolynomial":
        if k < 1:
            raise PreconditionError("polynomial powers must be positive")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def commutator(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    # -- queries ----------------------------------------------------------

    def variables(self) -> tuple[VarRef, ...]:
        seen = set()
        for m in self.terms:
            seen.update(m)
        return tuple(sorted(seen, key=VarRef.sort_key))

    def is_multilinear(self) -> bool:
        """Every monomial is a permutation of one common set of variables."""
        if not self.terms:
            return True
        ref = None
        for m in self.terms:
            s = frozenset(m)
            if len(s) != len(m):
                return False
            if ref is None:
                ref = s
            elif s != ref:
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), [v.sort_key() for v in m])):
            c = self.terms[m]
            word = "*".join(repr(v) for v in m)
            parts.append(f"({c!r})*{word}")
        return " + ".join(parts)


def theta_image(f: GradedPolynomial, theta: GroupHom) -> GradedPolynomial:
    """Push variable degrees through theta, keeping indices.

    Raises if two distinct variables would collide, which cannot happen for
    multilinear polynomials with distinct indices.
    """
    if theta.domain != f.group:
        raise PreconditionError("hom domain does not match the polynomial group")
    mapping = {v: VarRef(theta(v.degree), v.index) for v in f.variables()}
    images: dict[VarRef, list[VarRef]] = {}
    for v, w in mapping.items():
        images.setdefault(w, []).append(v)
    for w, vs in images.items():
        if len(vs) > 1:
            raise PreconditionError(f"variables {vs} collide under the hom")
    return GradedPolynomial(
        theta.codomain,
        {tuple(mapping[v] for v in m): c for m, c in f.terms.items()})


def evaluate(f: GradedPolynomial, assignment: dict, algebra: GradedAlgebra) -> AlgebraElement:
    """Evaluate f with AlgebraElement values; substitutions must respect degrees."""
    if f.group != algebra.group:
        raise PreconditionError("polynomial and algebra use different grading groups")
    values = {}
    for v in f.variables():
        if v not in assignment:
            raise InadmissibleSubstitution(f"no value for {v}")
        x = assignment[v]
        if not isinstance(x, AlgebraElement) or x.parent is not algebra:
            raise InadmissibleSubstitution(f"value for {v} is not in the algebra")
        if not x.is_zero() and x.degree() != v.degree:
            raise InadmissibleSubstitution(
                f"value for {v} is not homogeneous of degree {v.degree}")
        values[v] = x
    total = algebra.zero()
    for mono, c in f.terms.items():
        elt = values[mono[0]]
        for v in mono[1:]:
            if elt.is_zero():
                break
            elt = elt * values[v]
        total = total + elt.scale(c)
    return total


def _generic_coefficients(f: GradedPolynomial, a: GradedAlgebra):
    """Expand f at generic elements; coefficients by (basis index, lambda monomial).

    A lambda monomial is a sorted tuple of (variable, basis index) factors;
    the indeterminates commute, so sorting is canonical.
    """
    def lkey(pair):
        v, t = pair
        return (v.sort_key(), t)

    one = CycloScalar.one(a.conductor)
    total: dict = {}
    for mono, coeff in f.terms.items():
        state = None
        for v in mono:
            comp = a.component(v.degree)
            if state is None:
                state = {(t, ((v, t),)): one for t in comp}
            else:
                nxt: dict = {}
                for (k, lmon), c in state.items():
                    for t in comp:
                        entries = a.table.get((k, t))
                        if not entries:
                            continue
                        lm2 = tuple(sorted(lmon + ((v, t),), key=lkey))
                        for k2, s in entries:
                            key = (k2, lm2)
                            prev = nxt.get(key)
                            val = c * s
                            nxt[key] = val if prev is None else prev + val
                state = {k: c for k, c in nxt.items() if not c.is_zero()}
            if not state:
                break
        if not state:
            continue
        for key, c in state.items():
            prev = total.get(key)
            val = coeff * c
            total[key] = val if prev is None else prev + val
    return {k: c for k, c in total.items() if not c.is_zero()}


def is_identity(f: GradedPolynomial, a: GradedAlgebra) -> bool:
    """Does f vanish under every admissible substitution in a?"""
    if f.group != a.group:
        raise PreconditionError("polynomial and algebra use different grading groups")
    if not f.terms:
        return True
    if f.is_multilinear():
        variables = f.variables()
        comps = [a.component_basis(v.degree) for v in variables]
        for choice in itertools.product(*comps):
            val = evaluate(f, dict(zip(variables, choice)), a)
            if not val.is_zero():
                return False
        return True
    return not _generic_coefficients(f, a)


# -- multilinear identity spaces ------------------------------------------


def monomial_order(n: int) -> tuple[tuple[int, ...], ...]:
    """Column order for multilinear spaces: permutations of 0..n-1, lex."""
    return tuple(sorted(itertools.permutations(range(n))))


class IdentitySpace:
    """Kernel of the multilinear evaluation map at a fixed degree tuple.

    kernel rows are coefficient vectors over the lex-ordered permutation
    monomials; the matrix is in canonical reduced row echelon form, so two
    spaces at tuples of the same length agree exactly when the matrices do.
    """

    __slots__ = ("degrees", "kernel")

    def __init__(self, degrees: tuple[GroupElement, ...], kernel: RationalMatrix):
        self.degrees = tuple(degrees)
        self.kernel = kernel

    @property
    def nvars(self) -> int:
        return len(self.degrees)

    @property
    def dimension(self) -> int:
        return self.kernel.nrows

    def monomials(self) -> tuple[tuple[int, ...], ...]:
        return monomial_order(self.nvars)

    def contains_vector(self, vec) -> bool:
        return self.kernel.row_space_contains(vec)

    def coefficient_vector(self, f: GradedPolynomial) -> list[Fraction]:
        """Coefficients of f over the permutation monomials of this space."""
        expected = {VarRef(g, i + 1) for i, g in enumerate(self.degrees)}
        if set(f.variables()) - expected:
            raise PreconditionError("polynomial variables do not match the degree tuple")
        order = {m: i for i, m in enumerate(self.monomials())}
        vec = [Fraction(0)] * len(order)
        for mono, c in f.terms.items():
            if len(mono) != self.nvars or len(set(mono)) != len(mono):
                raise PreconditionError("polynomial is not multilinear in the tuple variables")
            perm = tuple(v.index - 1 for v in mono)
            if perm not in order:
                raise PreconditionError("monomial does not match the degree tuple")
            if not c.is_rational():
                raise PreconditionError("identity-space vectors use rational coefficients")
            vec[order[perm]] += c.as_fraction()
        return vec

    def contains(self, f: GradedPolynomial) -> bool:
        return self.contains_vector(self.coefficient_vector(f))

    def polynomials(self) -> list[GradedPolynomial]:
        """Basis of the space as polynomials in variables x[g_i, i+1]."""
        out = []
        group = self.degrees[0].group if self.degrees else None
        for row in self.kernel.rows:
            terms = {}
            for perm, c in zip(self.monomials(), row):
                if c:
                    terms[tuple(VarRef(self.degrees[p], p + 1) for p in perm)] = c
            out.append(GradedPolynomial(group, terms))
        return out

    def __eq__(self, other):
        if not isinstance(other, IdentitySpace):
            return NotImplemented
        return self.nvars == other.nvars and self.kernel == other.kernel

    def __hash__(self):
        return hash((self.nvars, self.kernel))

    def __repr__(self):
        return f"IdentitySpace({self.degrees}, dim {self.dimension})"


def identity_space(a: GradedAlgebra, degrees, use_cache: bool = True) -> IdentitySpace:
    """All multilinear identities of a at the given degree tuple."""
    degrees = tuple(degrees)
    if not degrees:
        raise PreconditionError("degree tuple must be nonempty")
    for g in degrees:
        if g.group != a.group:
            raise PreconditionError(f"degree {g} outside the grading group")
    if use_cache:
        hit = a._mul_cache.get(degrees)
        if hit is not None:
            return hit
    n = len(degrees)
    perms = monomial_order(n)
    ncols = len(perms)
    comps = [a.component(g) for g in degrees]
    if any(not c for c in comps):
        ident = RationalMatrix(
            [[Fraction(1 if i == j else 0) for j in range(ncols)] for i in range(ncols)])
        space = IdentitySpace(degrees, ident)
    else:
        reducer = RowReducer(ncols)
        basis = [a.basis_element(i) for i in range(a.dim)]
        for sub in itertools.product(*comps):
            rows: dict = {}
            for ci, perm in enumerate(perms):
                elt = basis[sub[perm[0]]]
                for pos in range(1, n):
                    elt = elt * basis[sub[perm[pos]]]
                    if elt.is_zero():
                        break
                for k, c in elt.coeffs.items():
                    for slot, q in enumerate(c.rational_coordinates()):
                        if q:
                            row = rows.get((k, slot))
                            if row is None:
                                row = rows[(k, slot)] = [Fraction(0)] * ncols
                            row[ci] = q
            for row in rows.values():
                reducer.add(row)
            if reducer.rank == ncols:
                break
        space = IdentitySpace(degrees, RationalMatrix(reducer.nullspace_rows(), ncols))
    if use_cache:
        a._mul_cache[degrees] = space
    return space


# -- equivalence by brute force -------------------------------------------


@dataclass
class EquivalenceReport:
    equal: bool
    max_degree: int
    detail: str = ""
    witness: GradedPolynomial | None = None
    holds_in: str | None = None
    fails_in: str | None = None
    witness_substitution: dict | None = None


def _find_witness(space_small: IdentitySpace, space_big: IdentitySpace):
    """A kernel row of space_small outside space_big, or None."""
    for row in space_small.kernel.rows:
        if not space_big.contains_vector(row):
            terms = {}
            for perm, c in zip(space_small.monomials(), row):
                if c:
                    mono = tuple(VarRef(space_small.degrees[p], p + 1) for p in perm)
                    terms[mono] = c
            return GradedPolynomial(space_small.degrees[0].group, terms)
    return None


def _witness_substitution(f: GradedPolynomial, a: GradedAlgebra):
    variables = f.variables()
    comps = [a.component_basis(v.degree) for v in variables]
    for choice in itertools.product(*comps):
        assignment = dict(zip(variables, choice))
        if not evaluate(f, assignment, a).is_zero():
            return {v: a.labels[next(iter(x.coeffs))] for v, x in assignment.items()}
    return None


def same_identities_up_to(a: GradedAlgebra, b: GradedAlgebra, max_degree: int = 4,
                          names: tuple[str, str] = ("A", "B")) -> EquivalenceReport:
    """Compare multilinear identity spaces at all degree tuples up to max_degree.

    Degree tuples run over multisets drawn from the union of the supports;
    variables of trivial degree-component vanish identically, so tuples that
    meet neither support are skipped.
    """
    if a.group != b.group:
        raise PreconditionError("algebras graded by different groups")
    if max_degree < 1:
        raise PreconditionError("max_degree must be at least 1")
    supp_a, supp_b = set(a.support()), set(b.support())
    for g in sorted(supp_a - supp_b):
        f = GradedPolynomial.variable(a.group, g, 1)
        return EquivalenceReport(
            False, max_degree,
            detail=f"degree {g} supports {names[0]} only",
            witness=f, holds_in=names[1], fails_in=names[0],
            witness_substitution=_witness_substitution(f, a))
    for g in sorted(supp_b - supp_a):
        f = GradedPolynomial.variable(a.group, g, 1)
        return EquivalenceReport(
            False, max_degree,
            detail=f"degree {g} supports {names[1]} only",
            witness=f, holds_in=names[0], fails_in=names[1],
            witness_substitution=_witness_substitution(f, b))
    degrees_pool = sorted(supp_a)
    checked = 0
    for size in range(1, max_degree + 1):
        for multiset in itertools.combinations_with_replacement(degrees_pool, size):
            sa = identity_space(a, multiset)
            sb = identity_space(b, multiset)
            checked += 1
            if sa == sb:
                continue
            f = _find_witness(sa, sb)
            if f is not None:
                return EquivalenceReport(
                    False, max_degree,
                    detail=f"identity spaces differ at degree tuple {multiset}",
                    witness=f, holds_in=names[0], fails_in=names[1],
                    witness_substitution=_witness_substitution(f, b))
            f = _find_witness(sb, sa)
            return EquivalenceReport(
                False, max_degree,
                detail=f"identity spaces differ at degree tuple {multiset}",
                witness=f, holds_in=names[1], fails_in=names[0],
                witness_substitution=_witness_substitution(f, a) if f else None)
    return EquivalenceReport(
        True, max_degree,
        detail=f"identity spaces agree at all {checked} degree tuples "
               f"of size 1..{max_degree}")


# -- text grammar -----------------------------------------------------------


class _PolyParser:
    """Recursive descent for the polynomial grammar.

    poly   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := RATIONAL | VAR '[' element ',' INT ']' | '[' poly ',' poly ']'
            | '(' poly ')'
    element:= 'e' | INT | '(' INT (',' INT)* ')'
    """

    def __init__(self, text: str, group: FinAbGroup):
        self.text = text
        self.group = group
        self.pos = 0

    def error(self, message: str):
        raise PolynomialSyntaxError(message, pos=self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> GradedPolynomial:
        p = self.parse_poly()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input after polynomial")
        return p

    def parse_poly(self) -> GradedPolynomial:
        total = self.parse_term()
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                total = total + self.parse_term()
            elif c == "-":
                self.pos += 1
                total = total - self.parse_term()
            else:
                return total

    def parse_term(self) -> GradedPolynomial:
        negate = False
        while self.peek() == "-":
            self.pos += 1
            negate = not negate
        factors = [self.parse_factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.parse_factor())
        scalar = Fraction(1)
        poly = None
        for f in factors:
            if isinstance(f, Fraction):
                scalar *= f
            elif poly is None:
                poly = f
            else:
                poly = poly * f
        if poly is None:
            if scalar == 0:
                return GradedPolynomial.zero(self.group)
            self.error("a term needs at least one variable (no constant terms)")
        if negate:
            scalar = -scalar
        return poly.scale(scalar)

    def parse_factor(self):
        atom = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            k = self.parse_int()
            if k < 1:
                self.error("exponent must be a positive integer")
            return atom ** k
        return atom

    def parse_atom(self):
        c = self.peek()
        if c == "(":
            self.pos += 1
            p = self.parse_poly()
            self.expect(")")
            return p
        if c == "[":
            self.pos += 1
            left = self.parse_poly()
            self.expect(",")
            right = self.parse_poly()
            self.expect("]")
            return left.commutator(right)
        if c.isdigit():
            return self.parse_rational()
        if c.isalpha():
            return self.parse_varref()
        self.error("expected a scalar, a variable, a commutator, or parentheses")

    def parse_int(self) -> int:
        self.skip_ws()
        sign = 1
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            sign = -1
            self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return sign * int(self.text[start:self.pos])

    def parse_rational(self) -> Fraction:
        num = self.parse_int()
        if self.peek() == "/":
            self.pos += 1
            den = self.parse_int()
            if den == 0:
                self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_varref(self) -> GradedPolynomial:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        name = self.text[start:self.pos]
        if name == "e":
            self.error("'e' denotes the trivial degree, not a variable")
        self.expect("[")
        g = self.parse_element()
        self.expect(",")
        idx = self.parse_int()
        if idx < 1:
            self.error("variable index must be a positive integer")
        self.expect("]")
        return GradedPolynomial.variable(self.group, g, idx)

    def parse_element(self) -> GroupElement:
        c = self.peek()
        if c == "e" and not (self.pos + 1 < len(self.text)
                             and self.text[self.pos + 1].isalnum()):
            self.pos += 1
            return self.group.identity
        if c == "(":
            self.pos += 1
            exps = [self.parse_int()]
            while self.peek() == ",":
                self.pos += 1
                exps.append(self.parse_int())
            self.expect(")")
            if len(exps) != self.group.rank:
                self.error(f"element needs {self.group.rank} coordinates")
            return self.group.element(tuple(exps))
        if c.isdigit() or c == "-":
            if self.group.rank != 1:
                self.error("bare integers denote elements only for rank-1 groups")
            return self.group.element((self.parse_int(),))
        self.error("expected a group element ('e', an integer, or a tuple)")


def parse_polynomial(text: str, group: FinAbGroup) -> GradedPolynomial:
    return _PolyParser(text, group).parse()
