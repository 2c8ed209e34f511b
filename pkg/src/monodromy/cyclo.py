"""Exact arithmetic in cyclotomic fields, monic polynomials, dense matrices.

Scalars are elements of Q(zeta_N) stored as rational coefficient vectors of
length phi(N), reduced modulo the N-th cyclotomic polynomial and then pushed
down to the smallest cyclotomic field containing them.  Canonical orders are
never congruent to 2 mod 4, so equality and hashing are plain componentwise
comparisons.  Everything is immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import CapacityError, DomainError

MAX_ORDER = 120

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    out = n
    for p in _prime_factors(n):
        out = out // p * (p - 1)
    return out


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod_exact(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    q = [_ZERO] * max(0, len(num) - len(den) + 1)
    inv_lead = 1 / den[-1]
    for i in range(len(num) - len(den), -1, -1):
        coeff = num[i + len(den) - 1] * inv_lead
        if coeff != 0:
            q[i] = coeff
            for j, d in enumerate(den):
                num[i + j] -= coeff * d
    return q, _poly_trim(num)


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    num = [Fraction(-1)] + [_ZERO] * (n - 1) + [_ONE]
    for d in _divisors(n):
        if d == n:
            continue
        num, rem = _poly_divmod_exact(num, list(_cyclotomic(d)))
        assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta_n^k reduced mod the cyclotomic polynomial, for k in 0..n-1."""
    deg = _phi(n)
    phi_n = _cyclotomic(n)
    rows = []
    cur = [_ONE] + [_ZERO] * (deg - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        cur = [_ZERO] + cur  # multiply by zeta
        if len(cur) > deg:
            lead = cur.pop()
            if lead != 0:
                for j in range(deg):
                    cur[j] -= lead * phi_n[j]
    return tuple(rows)


def _reduce_exponents(n: int, terms) -> tuple[Fraction, ...]:
    """Sum of coeff * zeta_n^exp, reduced to the phi(n)-vector."""
    deg = _phi(n)
    table = _power_table(n)
    acc = [_ZERO] * deg
    for exp, coeff in terms:
        if coeff == 0:
            continue
        row = table[exp % n]
        for j in range(deg):
            if row[j]:
                acc[j] += coeff * row[j]
    return tuple(acc)


@lru_cache(maxsize=None)
def _subfield_solver(n: int, m: int):
    """Echelon data deciding membership of Q(zeta_n)-vectors in Q(zeta_m).

    Returns (transform, pivots) where transform is a phi(n) x phi(n) row
    operation matrix bringing the embedding matrix of the subfield basis to
    echelon form, and pivots maps each subfield basis column to its pivot row.
    """
    dn, dm = _phi(n), _phi(m)
    step = n // m
    cols = [_power_table(n)[(j * step) % n] for j in range(dm)]
    # matrix rows: A[i][j] = cols[j][i]
    a = [[cols[j][i] for j in range(dm)] for i in range(dn)]
    t = [[_ONE if i == k else _ZERO for k in range(dn)] for i in range(dn)]
    pivots = []
    row = 0
    for col in range(dm):
        sel = None
        for r in range(row, dn):
            if a[r][col] != 0:
                sel = r
                break
        assert sel is not None  # embedding matrix has full column rank
        a[row], a[sel] = a[sel], a[row]
        t[row], t[sel] = t[sel], t[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        t[row] = [x * inv for x in t[row]]
        for r in range(dn):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
                t[r] = [x - f * y for x, y in zip(t[r], t[row])]
        pivots.append(row)
        row += 1
    return tuple(tuple(r) for r in t), tuple(pivots)


def _descend_target(m: int) -> int:
    return m // 2 if m % 4 == 2 else m


def _try_subfield(n: int, m: int, vec):
    """Coefficients of vec in Q(zeta_m) if it lies there, else None."""
    t, pivots = _subfield_solver(n, m)
    dn, dm = _phi(n), _phi(m)
    w = []
    for i in range(dn):
        s = _ZERO
        row = t[i]
        for j in range(dn):
            if row[j] and vec[j]:
                s += row[j] * vec[j]
        w.append(s)
    pivot_set = set(pivots)
    for i in range(dn):
        if i not in pivot_set and w[i] != 0:
            return None
    return tuple(w[pivots[j]] for j in range(dm))


def _minimalize(n: int, vec):
    """Push a reduced vector down to its minimal cyclotomic order."""
    while n > 1:
        if all(c == 0 for c in vec[1:]):
            return 1, (vec[0],)
        targets = sorted({_descend_target(n // p) for p in _prime_factors(n)}, reverse=True)
        for m in targets:
            down = _try_subfield(n, m, vec)
            if down is not None:
                n, vec = m, down
                break
        else:
            break
    return n, tuple(vec)


class CycNumber:
    """An element of Q(zeta_N) in canonical minimal-order form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: tuple[Fraction, ...]):
        # internal: callers must pass canonical data (use the constructors)
        self.order = order
        self.coeffs = coeffs
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(q) -> "CycNumber":
        return CycNumber(1, (Fraction(q),))

    @staticmethod
    def from_terms(order: int, terms) -> "CycNumber":
        """Sum of coeff * zeta_order^exp over (exp, coeff) pairs."""
        if order < 1:
            raise DomainError(f"order must be positive, got {order}")
        if order > MAX_ORDER:
            raise CapacityError(f"cyclotomic order {order} exceeds bound {MAX_ORDER}")
        vec = _reduce_exponents(order, ((e, Fraction(c)) for e, c in terms))
        n, vec = _minimalize(order, vec)
        return CycNumber(n, vec)

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNumber.rational(x)
        return NotImplemented

    def lift_terms(self, order: int):
        """(exp, coeff) pairs expressing self at the given order."""
        if order % self.order:
            raise DomainError("lift target must be a multiple of the order")
        step = order // self.order
        return [(i * step, c) for i, c in enumerate(self.coeffs) if c != 0]

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.order == 1 and self.coeffs[0] == 0

    def is_rational(self) -> bool:
        return self.order == 1

    def is_one(self) -> bool:
        return self.order == 1 and self.coeffs[0] == 1

    def as_rational(self) -> Fraction:
        if self.order != 1:
            raise DomainError(f"{self!r} is not rational")
        return self.coeffs[0]

    def root_of_unity_order(self):
        """Multiplicative order if self is a root of unity, else None."""
        if self.is_zero():
            return None
        bound = self.order if self.order % 2 == 0 else 2 * self.order
        if not (self ** bound).is_one():
            return None
        for d in _divisors(bound):
            if (self ** d).is_one():
                return d
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.order == 1 and other.coeffs[0] == 0:
            return self
        if self.order == 1 and self.coeffs[0] == 0:
            return other
        n = math.lcm(self.order, other.order)
        if n > MAX_ORDER:
            raise CapacityError(f"cyclotomic order {n} exceeds bound {MAX_ORDER}")
        if self.order == other.order:
            vec = tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        else:
            vec = _reduce_exponents(n, self.lift_terms(n) + other.lift_terms(n))
        m, vec = _minimalize(n, vec)
        return CycNumber(m, vec)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            q = other.coeffs[0]
            if q == 0:
                return ZERO
            if q == 1:
                return self
            return CycNumber(self.order, tuple(c * q for c in self.coeffs))
        if self.is_rational():
            return other * self
        n = math.lcm(self.order, other.order)
        if n > MAX_ORDER:
            raise CapacityError(f"cyclotomic order {n} exceeds bound {MAX_ORDER}")
        a = self.lift_terms(n)
        b = other.lift_terms(n)
        prods = {}
        for ea, ca in a:
            for eb, cb in b:
                e = (ea + eb) % n
                prods[e] = prods.get(e, _ZERO) + ca * cb
        vec = _reduce_exponents(n, prods.items())
        m, vec = _minimalize(n, vec)
        return CycNumber(m, vec)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return CycNumber.rational(1 / self.coeffs[0])
        # extended Euclid against the cyclotomic polynomial
        n = self.order
        f = list(self.coeffs)
        g = list(_cyclotomic(n))
        s0, s1 = [_ONE], [_ZERO]
        r0, r1 = _poly_trim(f), _poly_trim(g)
        while len(r1) > 1 or (len(r1) == 1 and r1[0] != 0):
            if len(r0) < len(r1):
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            q, rem = _poly_divmod_exact(r0, r1)
            # s_new = s0 - q * s1
            s_new = list(s0) + [_ZERO] * max(0, len(q) + len(s1) - 1 - len(s0))
            for i, qc in enumerate(q):
                if qc == 0:
                    continue
                for j, sc in enumerate(s1):
                    s_new[i + j] -= qc * sc
            r0, r1, s0, s1 = r1, rem if rem else [_ZERO], s1, _poly_trim(s_new) or [_ZERO]
        # r0 is a nonzero constant: inverse = s0 / r0
        c = r0[0]
        vec = _reduce_exponents(n, ((i, sc / c) for i, sc in enumerate(s0)))
        return CycNumber(n, vec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate(self) -> "CycNumber":
        """Complex conjugation (zeta -> zeta^{-1})."""
        n = self.order
        vec = _reduce_exponents(n, ((-i % n, c) for i, c in enumerate(self.coeffs)))
        return CycNumber(n, vec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNumber.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base2 = base * base if k > 1 else base
            base = base2
            k >>= 1
        return result

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, self.coeffs))
        return self._hash

    def __repr__(self):
        if self.order == 1:
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = f"z{self.order}" if i == 1 else f"z{self.order}^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        terms = [[c.numerator, c.denominator, i] for i, c in enumerate(self.coeffs) if c != 0]
        return {"order": self.order, "terms": terms}

    @staticmethod
    def from_json(obj) -> "CycNumber":
        if not isinstance(obj, dict) or "order" not in obj or "terms" not in obj:
            raise DomainError(f"bad cyclotomic number encoding: {obj!r}")
        return CycNumber.from_terms(
            int(obj["order"]),
            [(int(e), Fraction(int(num), int(den))) for num, den, e in obj["terms"]],
        )


def zeta(n: int, k: int = 1) -> CycNumber:
    """The root of unity exp(2*pi*i*k/n)."""
    return CycNumber.from_terms(n, [(k, _ONE)])


ZERO = CycNumber.rational(0)
ONE = CycNumber.rational(1)


# ---------------------------------------------------------------------------
# monic polynomials


class CycPoly:
    """A monic polynomial with CycNumber coefficients (ascending order)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(CycNumber._coerce(c) for c in coeffs)
        if not coeffs:
            raise DomainError("a monic polynomial needs at least one coefficient")
        if not coeffs[-1].is_one():
            raise DomainError("polynomial is not monic")
        self.coeffs = coeffs

    @staticmethod
    def monic(coeffs) -> "CycPoly":
        """Normalize a nonzero coefficient list by its leading coefficient."""
        coeffs = [CycNumber._coerce(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise DomainError("cannot normalize the zero polynomial")
        lead = coeffs[-1]
        if not lead.is_one():
            inv = lead.inverse()
            coeffs = [c * inv for c in coeffs]
        return CycPoly(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant_term(self) -> CycNumber:
        return self.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, CycPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, CycPoly):
            return NotImplemented
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return CycPoly(out)

    def evaluate(self, x):
        """Horner evaluation at a CycNumber or a square CycMatrix."""
        if isinstance(x, CycMatrix):
            acc = CycMatrix.scalar(x.rows, self.coeffs[-1])
            for c in reversed(self.coeffs[:-1]):
                acc = acc * x
                if not c.is_zero():
                    acc = acc + CycMatrix.scalar(x.rows, c)
            return acc
        x = CycNumber._coerce(x)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __repr__(self):
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == self.degree:
                parts.append(mono or repr(c))
            elif c.is_one() and mono:
                parts.append(mono)
            else:
                body = repr(c)
                if " + " in body or body.startswith("-"):
                    body = f"({body})"
                parts.append(f"{body}*{mono}" if mono else body)
        return " + ".join(parts)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @staticmethod
    def from_json(obj) -> "CycPoly":
        return CycPoly([CycNumber.from_json(c) for c in obj])


def theta(r: CycPoly) -> CycPoly:
    """The involution sending the minimal polynomial of an invertible
    operator to the minimal polynomial of its inverse."""
    c0 = r.constant_term
    if c0.is_zero():
        raise DomainError("involution requires a nonzero constant term")
    inv = c0.inverse()
    return CycPoly(tuple(c * inv for c in reversed(r.coeffs)))


def detect_power_factor(r: CycPoly, e: int):
    """The unique monic rbar with r(z) = rbar(z^e), or None.

    Present exactly when r is supported on exponents divisible by e.
    """
    if e <= 0:
        raise DomainError(f"power factor exponent must be positive, got {e}")
    if e == 1:
        return r
    if r.degree % e:
        return None
    for i, c in enumerate(r.coeffs):
        if i % e and not c.is_zero():
            return None
    return CycPoly(r.coeffs[::e])


def poly_gcd(a: CycPoly, b: CycPoly) -> CycPoly:
    """Monic gcd via the Euclidean algorithm."""
    ra, rb = list(a.coeffs), list(b.coeffs)

    def trim(c):
        while c and c[-1].is_zero():
            c.pop()
        return c

    ra, rb = trim(ra), trim(rb)
    while rb:
        if len(ra) < len(rb):
            ra, rb = rb, ra
            continue
        lead_inv = rb[-1].inverse()
        rem = list(ra)
        for i in range(len(ra) - len(rb), -1, -1):
            f = rem[i + len(rb) - 1] * lead_inv
            if not f.is_zero():
                for j, d in enumerate(rb):
                    rem[i + j] = rem[i + j] - f * d
        ra, rb = rb, trim(rem)
    return CycPoly.monic(ra)


def poly_lcm(a: CycPoly, b: CycPoly) -> CycPoly:
    g = poly_gcd(a, b)
    prod = a * b
    # exact division by g
    out, rem = _cycpoly_divmod(prod, g)
    assert rem is None
    return out


def _cycpoly_divmod(a: CycPoly, b: CycPoly):
    """Quotient of monic a by monic b; remainder None when exact."""
    rem = list(a.coeffs)
    q = [ZERO] * (len(a.coeffs) - len(b.coeffs) + 1)
    for i in range(len(q) - 1, -1, -1):
        f = rem[i + b.degree]
        if f.is_zero():
            continue
        q[i] = f
        for j, d in enumerate(b.coeffs):
            rem[i + j] = rem[i + j] - f * d
    exact = all(c.is_zero() for c in rem)
    return CycPoly.monic(q), (None if exact else rem)


def poly_divides(a: CycPoly, b: CycPoly) -> bool:
    """Whether monic a divides monic b."""
    if a.degree > b.degree:
        return False
    _, rem = _cycpoly_divmod(b, a)
    return rem is None


# ---------------------------------------------------------------------------
# matrices


class CycMatrix:
    """A dense rectangular matrix over the cyclotomic scalars."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries):
        entries = tuple(tuple(CycNumber._coerce(x) for x in row) for row in entries)
        if not entries or not entries[0]:
            raise DomainError("matrices must be nonempty")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise DomainError("ragged matrix rows")
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries
        self._hash = None

    @staticmethod
    def identity(n: int) -> "CycMatrix":
        return CycMatrix.scalar(n, ONE)

    @staticmethod
    def scalar(n: int, c) -> "CycMatrix":
        c = CycNumber._coerce(c)
        return CycMatrix(
            tuple(tuple(c if i == j else ZERO for j in range(n)) for i in range(n))
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return (
            isinstance(other, CycMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DomainError("matrix shape mismatch in addition")
        return CycMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CycMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            c = CycNumber._coerce(other)
            return CycMatrix(tuple(tuple(x * c for x in row) for row in self.entries))
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DomainError("matrix shape mismatch in product")
        bt = other.entries
        out = []
        for ra in self.entries:
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    a = ra[k]
                    if a.is_zero():
                        continue
                    b = bt[k][j]
                    if b.is_zero():
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                row.append(ZERO if acc is None else acc)
            out.append(tuple(row))
        return CycMatrix(tuple(out))

    __rmul__ = __mul__

    def apply(self, vec):
        """Matrix times column vector (tuple of CycNumber)."""
        out = []
        for row in self.entries:
            acc = None
            for a, v in zip(row, vec):
                if a.is_zero() or v.is_zero():
                    continue
                term = a * v
                acc = term if acc is None else acc + term
            out.append(ZERO if acc is None else acc)
        return tuple(out)

    def transpose(self) -> "CycMatrix":
        return CycMatrix(tuple(zip(*self.entries)))

    def __pow__(self, k: int):
        if not self.is_square():
            raise DomainError("powers need a square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        acc = CycMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            if k > 1:
                base = base * base
            k >>= 1
        return acc

    def rank(self) -> int:
        rows = [list(r) for r in self.entries]
        rank = 0
        for col in range(self.cols):
            sel = None
            for r in range(rank, self.rows):
                if not rows[r][col].is_zero():
                    sel = r
                    break
            if sel is None:
                continue
            rows[rank], rows[sel] = rows[sel], rows[rank]
            inv = rows[rank][col].inverse()
            rows[rank] = [x * inv for x in rows[rank]]
            for r in range(self.rows):
                if r != rank and not rows[r][col].is_zero():
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
            rank += 1
            if rank == self.rows:
                break
        return rank

    def inverse(self) -> "CycMatrix":
        if not self.is_square():
            raise DomainError("only square matrices are invertible")
        n = self.rows
        a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.entries)]
        for col in range(n):
            sel = None
            for r in range(col, n):
                if not a[r][col].is_zero():
                    sel = r
                    break
            if sel is None:
                raise DomainError("matrix is singular")
            a[col], a[sel] = a[sel], a[col]
            inv = a[col][col].inverse()
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and not a[r][col].is_zero():
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return CycMatrix(tuple(tuple(row[n:]) for row in a))

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def __repr__(self):
        body = "; ".join(", ".join(repr(x) for x in row) for row in self.entries)
        return f"CycMatrix[{body}]"

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.entries]

    @staticmethod
    def from_json(obj) -> "CycMatrix":
        return CycMatrix([[CycNumber.from_json(x) for x in row] for row in obj])


class _Echelon:
    """Incremental exact row reduction for linear-dependence searches."""

    def __init__(self, width: int):
        self.width = width
        self.pivot_cols: list[int] = []
        self.rows: list[tuple] = []
        self.history: list[tuple] = []  # row ops applied, for coefficient recovery

    def reduce(self, vec, track=None):
        """Reduce vec against the stored rows; returns (vec, track)."""
        vec = list(vec)
        for (col, row, trk) in zip(self.pivot_cols, self.rows, self.history):
            f = vec[col]
            if f.is_zero():
                continue
            for j in range(self.width):
                if not row[j].is_zero():
                    vec[j] = vec[j] - f * row[j]
            if track is not None:
                track = [a - f * b for a, b in zip(track, trk)]
        return vec, track

    def insert(self, vec, track):
        """Insert a (already reduced) nonzero vector; returns False if zero."""
        col = next((j for j in range(self.width) if not vec[j].is_zero()), None)
        if col is None:
            return False
        inv = vec[col].inverse()
        if not inv.is_one():
            vec = [x if x.is_zero() else x * inv for x in vec]
            track = [x if x.is_zero() else x * inv for x in track]
        self.pivot_cols.append(col)
        self.rows.append(tuple(vec))
        self.history.append(tuple(track))
        return True


def _local_minpoly(m: CycMatrix, start) -> CycPoly:
    """Minimal monic p with p(m) @ start == 0."""
    n = m.rows
    ech = _Echelon(n)
    vec = start
    for k in range(n + 1):
        # track: coefficients of the reduced vector in terms of m^i @ start
        track = [ONE if i == k else ZERO for i in range(n + 1)]
        red, trk = ech.reduce(list(vec), track)
        if all(x.is_zero() for x in red):
            return CycPoly.monic(trk[: k + 1])
        ech.insert(red, trk)
        vec = m.apply(vec)
    raise AssertionError("Krylov search exceeded dimension bound")


def _apply_poly_vector(m: CycMatrix, p: CycPoly, vec):
    """p(m) @ vec by Horner on vectors."""
    acc = [c * p.coeffs[-1] for c in vec]
    for coeff in reversed(p.coeffs[:-1]):
        acc = list(m.apply(acc))
        if not coeff.is_zero():
            for j, c in enumerate(vec):
                if not c.is_zero():
                    acc[j] = acc[j] + c * coeff
    return acc


def minpoly_matrix(m: CycMatrix) -> CycPoly:
    """Exact minimal polynomial of a square matrix.

    Computed as the lcm of the local minimal polynomials of the standard
    basis vectors; vectors already annihilated by the accumulated
    polynomial are skipped.
    """
    if not m.is_square():
        raise DomainError("minimal polynomials need a square matrix")
    n = m.rows
    acc: CycPoly | None = None
    for i in range(n):
        start = tuple(ONE if j == i else ZERO for j in range(n))
        if acc is not None:
            if acc.degree >= n:
                break
            if all(x.is_zero() for x in _apply_poly_vector(m, acc, start)):
                continue
        local = _local_minpoly(m, start)
        acc = local if acc is None else poly_lcm(acc, local)
    assert acc is not None
    return acc
