"""Exact scalars in cyclotomic fields and exact rational linear algebra.

A CycloScalar is an element of Q(zeta_M) stored as a vector of rationals over
the power basis zeta^0 .. zeta^(phi(M)-1), reduced modulo the M-th cyclotomic
polynomial.  M is called the conductor.  Values at different conductors are
compared (and combined) after promotion to the lcm, using the compatible
embedding zeta_M = zeta_{kM}^k.

Real numbers are the conjugation-fixed elements; `sign` decides the sign of a
nonzero real value exactly, using an algebraic lower bound |x| >= |N(x)| / S^(d-1)
(N = field norm, S = sum of |coefficients|, d = degree) together with an
mpmath evaluation at sufficient precision.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import PreconditionError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    if m < 1:
        raise PreconditionError("conductor must be a positive integer")
    result, n, p = 1, m, 2
    while p * p <= n:
        if n % p == 0:
            pk = 1
            while n % p == 0:
                n //= p
                pk *= p
            result *= pk - pk // p
        p += 1
    if n > 1:
        result *= n - 1
    return result


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, low-to-high coefficient lists.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, low-to-high, monic with integer entries."""
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _int_poly_divexact(num, list(cyclotomic_polynomial(d)))
    assert len(num) == totient(m) + 1 and num[-1] == 1
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    # zeta_m^k expressed over the power basis, for k = 0 .. max(m, 2*phi(m)) - 1.
    phi = totient(m)
    top = max(m, 2 * phi)
    phi_m = cyclotomic_polynomial(m)
    rows: list[tuple[Fraction, ...]] = []
    cur = [_ZERO] * phi
    cur[0] = _ONE
    for _ in range(top):
        rows.append(tuple(cur))
        nxt = [_ZERO] + cur[:-1]
        lead = cur[-1]
        if lead:
            # x^phi = -(lower coefficients of Phi_m)
            for j in range(phi):
                nxt[j] -= lead * phi_m[j]
        cur = nxt
    return tuple(rows)


def _reduce_power(m: int, k: int) -> tuple[Fraction, ...]:
    return _power_table(m)[k % m]


class CycloScalar:
    """Immutable element of Q(zeta_conductor)."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs):
        phi = totient(conductor)
        vec = [_ZERO] * phi
        for k, c in enumerate(coeffs):
            if c:
                vec[k] = Fraction(c)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(vec))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("CycloScalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycloScalar":
        return cls(conductor, [Fraction(value)] + [_ZERO] * (totient(conductor) - 1))

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1, conductor: int | None = None) -> "CycloScalar":
        """zeta_order^power, at the given conductor (default: order itself)."""
        if order < 1:
            raise PreconditionError("root order must be positive")
        m = conductor if conductor is not None else order
        if m % order != 0:
            m = _lcm(m, order)
        k = (power % order) * (m // order)
        return cls(m, _reduce_power(m, k))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycloScalar":
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycloScalar":
        return cls.rational(1, conductor)

    # -- conductor handling -------------------------------------------

    def promote(self, conductor: int) -> "CycloScalar":
        if conductor == self.conductor:
            return self
        if conductor % self.conductor != 0:
            raise PreconditionError(
                f"cannot promote conductor {self.conductor} to non-multiple {conductor}")
        r = conductor // self.conductor
        phi = totient(conductor)
        out = [_ZERO] * phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = _reduce_power(conductor, k * r)
                for j, rv in enumerate(row):
                    if rv:
                        out[j] += c * rv
        return CycloScalar(conductor, out)

    @staticmethod
    def _pair(a: "CycloScalar", b: "CycloScalar"):
        if a.conductor == b.conductor:
            return a, b
        m = _lcm(a.conductor, b.conductor)
        return a.promote(m), b.promote(m)

    @staticmethod
    def coerce(value, conductor: int = 1) -> "CycloScalar":
        if isinstance(value, CycloScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return CycloScalar.rational(value, conductor)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycloScalar")

    def reduced(self) -> "CycloScalar":
        """Rewrite over the smallest cyclotomic subfield Q(zeta_d), d | conductor."""
        m = self.conductor
        if self.is_rational():
            return CycloScalar.rational(self.coeffs[0], 1)
        for d in sorted(k for k in range(1, m) if m % k == 0):
            if self._is_invariant_over(d):
                down = self._express_at(d)
                if down is not None:
                    return down
        return self

    def _is_invariant_over(self, d: int) -> bool:
        m = self.conductor
        for j in range(1, m):
            if j % d == 1 and gcd(j, m) == 1 and self.galois(j) != self:
                return False
        return True

    def _express_at(self, d: int) -> "CycloScalar | None":
        # Solve for coordinates over the promoted basis of Q(zeta_d).
        m, phi_d = self.conductor, totient(d)
        basis = [CycloScalar.root_of_unity(d, k).promote(m).coeffs for k in range(phi_d)]
        cols = list(range(totient(m)))
        mat = [[basis[i][j] for i in range(phi_d)] + [self.coeffs[j]] for j in cols]
        sol = _solve_exact(mat, phi_d)
        return CycloScalar(d, sol) if sol is not None else None

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        try:
            other = CycloScalar.coerce(other, self.conductor)
        except TypeError:
            return NotImplemented
        a, b = CycloScalar._pair(self, other)
        return CycloScalar(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        try:
            other = CycloScalar.coerce(other, self.conductor)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = CycloScalar.coerce(other, self.conductor)
        except TypeError:
            return NotImplemented
        a, b = CycloScalar._pair(self, other)
        m = a.conductor
        phi = totient(m)
        prod = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:phi])
        table = _power_table(m)
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                row = table[k]
                for j, rv in enumerate(row):
                    if rv:
                        out[j] += c * rv
        return CycloScalar(m, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycloScalar":
        if self.is_zero():
            raise ZeroDivisionError("CycloScalar inverse of zero")
        m = self.conductor
        if self.is_rational():
            return CycloScalar.rational(1 / self.coeffs[0], m)
        # extended Euclid in Q[x] against Phi_m
        phi_m = [Fraction(c) for c in cyclotomic_polynomial(m)]
        r0, r1 = phi_m, list(self.coeffs)
        s0, s1 = [_ZERO], [_ONE]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            if len(r1) == 1:
                inv = 1 / r1[0]
                return CycloScalar(m, [c * inv for c in s1])
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))

    def __truediv__(self, other):
        try:
            other = CycloScalar.coerce(other, self.conductor)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloScalar.coerce(other, self.conductor) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycloScalar.one(self.conductor)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------

    def galois(self, j: int) -> "CycloScalar":
        """Image under zeta -> zeta^j; requires gcd(j, conductor) = 1."""
        m = self.conductor
        if gcd(j, m) != 1:
            raise PreconditionError(f"galois exponent {j} not coprime to conductor {m}")
        out = [_ZERO] * totient(m)
        for k, c in enumerate(self.coeffs):
            if c:
                row = _reduce_power(m, j * k)
                for t, rv in enumerate(row):
                    if rv:
                        out[t] += c * rv
        return CycloScalar(m, out)

    def conjugate(self) -> "CycloScalar":
        return self.galois(self.conductor - 1) if self.conductor > 1 else self

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(not c for c in self.coeffs[1:])

    def is_real(self) -> bool:
        return self.conjugate() == self

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError("value is not rational")
        return self.coeffs[0]

    def rational_coordinates(self) -> tuple[Fraction, ...]:
        return self.coeffs

    def norm(self) -> Fraction:
        """Field norm: product over all Galois conjugates (a rational)."""
        m = self.conductor
        prod = CycloScalar.one(m)
        for j in range(1, m + 1):
            if gcd(j, m) == 1:
                prod = prod * self.galois(j % m if m > 1 else 1)
        return prod.as_fraction()

    def sign(self) -> int:
        """Exact sign of a real value: -1, 0, or 1."""
        if not self.is_real():
            raise PreconditionError("sign of a non-real value")
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.coeffs[0]
            return 1 if q > 0 else -1
        import mpmath

        m = self.conductor
        size = sum(abs(c) for c in self.coeffs)
        bound = abs(self.norm()) / size ** (totient(m) - 1)  # |x| >= bound > 0
        digits = 30
        while True:
            with mpmath.workdps(digits):
                val = mpmath.mpf(0)
                for k, c in enumerate(self.coeffs):
                    if c:
                        val += mpmath.mpf(c.numerator) / c.denominator * \
                            mpmath.cos(2 * mpmath.pi * k / m)
                err = mpmath.mpf(10) ** (8 - digits) * (1 + float(size))
                if abs(val) > err and abs(val) > mpmath.mpf(bound.numerator) / bound.denominator / 2:
                    return 1 if val > 0 else -1
            digits *= 2
            if digits > 10000:  # pragma: no cover - bound guarantees termination
                raise ArithmeticError("sign evaluation did not converge")

    # -- real/imaginary parts (conductor divisible by 4) ----------------

    def real_part(self) -> "CycloScalar":
        return (self + self.conjugate()) * Fraction(1, 2)

    def imag_part(self) -> "CycloScalar":
        m = _lcm(self.conductor, 4)
        i = CycloScalar.root_of_unity(4, 1, m)
        z = self.promote(m)
        return (z - z.conjugate()) / (2 * i)

    # -- protocol -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloScalar):
            return NotImplemented
        a, b = CycloScalar._pair(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            r = self.reduced()
            h = hash((r.conductor, r.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        r = self.reduced()
        if r.is_rational():
            return str(r.coeffs[0])
        parts = []
        for k, c in enumerate(r.coeffs):
            if c:
                parts.append(f"{c}*z{r.conductor}^{k}" if k else str(c))
        return " + ".join(parts)


def sqrt_of_rational_in_field(value, conductor: int) -> CycloScalar | None:
    """Nonnegative square root of rational `value` inside Q(zeta_conductor), or None.

    Uses Gauss sums for sqrt(p) of prime p; the result is verified by squaring,
    so the construction does not depend on sign bookkeeping.
    """
    q = Fraction(value)
    if q == 0:
        return CycloScalar.zero(conductor)
    negative = q < 0
    if negative:
        if conductor % 4 != 0:
            return None
        q = -q
    n = q.numerator * q.denominator  # sqrt(q) = sqrt(n) / denominator
    square, free = 1, 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            square *= d
            n //= d * d
        if n % d == 0:
            free *= d
            n //= d
        d += 1
    free *= n
    root = CycloScalar.rational(Fraction(square, q.denominator), conductor)
    for p in _prime_factors(free):
        g = _sqrt_prime(p, conductor)
        if g is None:
            return None
        root = root * g
    if (root * root) != CycloScalar.rational(q, 1):
        return None
    if root.sign() < 0:
        root = -root
    if negative:
        root = root * CycloScalar.root_of_unity(4, 1, conductor)
    return root


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _sqrt_prime(p: int, conductor: int) -> CycloScalar | None:
    if p == 2:
        if conductor % 8 != 0:
            return None
        z = CycloScalar.root_of_unity(8, 1, conductor)
        return z + z.conjugate()
    f = p if p % 4 == 1 else 4 * p
    if conductor % f != 0:
        return None
    total = CycloScalar.zero(conductor)
    for a in range(1, p):
        leg = pow(a, (p - 1) // 2, p)
        term = CycloScalar.root_of_unity(p, a, conductor)
        total = total + term if leg == 1 else total - term
    if p % 4 == 3:
        # Gauss sum equals i*sqrt(p); divide out i.
        total = total / CycloScalar.root_of_unity(4, 1, conductor)
    return total


# -- small polynomial helpers over Fraction lists -----------------------

def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    while den and not den[-1]:
        den = den[:-1]
    q = [_ZERO] * max(1, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c:
            f = c / den[-1]
            q[i] = f
            for j, dv in enumerate(den):
                num[i + j] -= f * dv
    rem = num[:len(den) - 1]
    return q, rem


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    for j, y in enumerate(b):
        a[j] -= y
    return a


def _solve_exact(aug_rows: list[list[Fraction]], nvars: int):
    """Solve an overdetermined exact linear system; unique solution or None."""
    rows = [list(r) for r in aug_rows]
    pivots: dict[int, list[Fraction]] = {}
    for row in rows:
        for c, prow in sorted(pivots.items()):
            if row[c]:
                f = row[c]
                for j in range(len(row)):
                    row[j] -= f * prow[j]
        lead = next((j for j in range(nvars) if row[j]), None)
        if lead is None:
            if row[nvars]:
                return None  # inconsistent
            continue
        f = row[lead]
        row = [v / f for v in row]
        for c, prow in pivots.items():
            if prow[lead]:
                g = prow[lead]
                for j in range(len(prow)):
                    prow[j] -= g * row[j]
        pivots[lead] = row
    if len(pivots) < nvars:
        return None  # underdetermined
    return [pivots[j][nvars] for j in range(nvars)]


# -- exact rational matrices --------------------------------------------


class RationalMatrix:
    """Immutable matrix over Q; canonical comparisons happen in RREF."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols=None):
        tup = tuple(tuple(Fraction(v) for v in r) for r in rows)
        if ncols is None:
            if not tup:
                raise PreconditionError("ncols required for an empty matrix")
            ncols = len(tup[0])
        if any(len(r) != ncols for r in tup):
            raise PreconditionError("ragged matrix rows")
        object.__setattr__(self, "rows", tup)
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RationalMatrix is immutable")

    @property
    def nrows(self):
        return len(self.rows)

    def rref(self) -> "RationalMatrix":
        red = RowReducer(self.ncols)
        for r in self.rows:
            red.add(list(r))
        return RationalMatrix(red.sorted_rows(), self.ncols)

    def rank(self) -> int:
        return len(self.rref().rows)

    def nullspace(self) -> "RationalMatrix":
        """RREF basis of {v : M v = 0}, rows are basis vectors."""
        red = RowReducer(self.ncols)
        for r in self.rows:
            red.add(list(r))
        return RationalMatrix(red.nullspace_rows(), self.ncols)

    def row_space_contains(self, vector) -> bool:
        red = RowReducer(self.ncols)
        for r in self.rows:
            red.add(list(r))
        residue = red.reduce([Fraction(v) for v in vector])
        return all(not v for v in residue)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"RationalMatrix({self.nrows}x{self.ncols})"


class RowReducer:
    """Incremental reduced row echelon form over Q.

    Rows are added one at a time; the pivot rows are kept fully reduced, so
    membership tests and nullspace extraction are cheap afterwards.
    """

    def __init__(self, width: int):
        self.width = width
        self.pivots: dict[int, list[Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: list[Fraction]) -> list[Fraction]:
        for c in sorted(self.pivots):
            if row[c]:
                f = row[c]
                prow = self.pivots[c]
                for j in range(self.width):
                    if prow[j]:
                        row[j] -= f * prow[j]
        return row

    def add(self, row) -> bool:
        """Returns True when the row increased the rank."""
        row = self.reduce([Fraction(v) for v in row])
        lead = next((j for j in range(self.width) if row[j]), None)
        if lead is None:
            return False
        f = row[lead]
        if f != 1:
            row = [v / f for v in row]
        for prow in self.pivots.values():
            if prow[lead]:
                g = prow[lead]
                for j in range(self.width):
                    if row[j]:
                        prow[j] -= g * row[j]
        self.pivots[lead] = row
        return True

    def sorted_rows(self) -> list[tuple[Fraction, ...]]:
        return [tuple(self.pivots[c]) for c in sorted(self.pivots)]

    def nullspace_rows(self) -> list[tuple[Fraction, ...]]:
        free = [j for j in range(self.width) if j not in self.pivots]
        rows = []
        for f in free:
            v = [_ZERO] * self.width
            v[f] = _ONE
            for c, prow in self.pivots.items():
                if prow[f]:
                    v[c] = -prow[f]
            rows.append(v)
        final = RowReducer(self.width)
        for r in rows:
            final.add(r)
        return final.sorted_rows()
