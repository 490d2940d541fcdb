"""Exact scalar arithmetic over GF(p^m) and Z mod q, plus small exact matrices.

Elements are plain Python ints in canonical form.  For a prime field or a
residue ring the canonical form is the residue in [0, q).  For an extension
field GF(p^m) an element is the packed integer sum(c_i * p**i) where
(c_0, ..., c_{m-1}) are the coefficients of the polynomial representative in
the basis {1, x, ..., x^{m-1}}; the packed values again range over [0, q).

All operations are exact integer computations; no floats appear anywhere in
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    DomainError,
    DomainMismatch,
    NonSquare,
    NotAUnit,
    RingNotSupported,
)

_MAX_ORDER = 1024

# Lexicographically smallest monic irreducible polynomial of degree m over
# GF(p), constant term first, for every prime power p^m <= 1024 with m >= 2.
# Regenerable by brute force: a degree-m candidate is irreducible iff no monic
# polynomial of degree 1..m//2 divides it.
_IRREDUCIBLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 5): (1, 0, 0, 1, 0, 1),
    (2, 6): (1, 0, 0, 0, 0, 1, 1),
    (2, 7): (1, 0, 0, 0, 0, 0, 1, 1),
    (2, 8): (1, 0, 0, 0, 1, 1, 0, 1, 1),
    (2, 9): (1, 0, 0, 0, 0, 0, 0, 0, 1, 1),
    (2, 10): (1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 0, 1, 1, 1),
    (3, 5): (1, 0, 0, 0, 2, 1),
    (3, 6): (1, 0, 0, 0, 1, 1, 1),
    (5, 2): (1, 1, 1),
    (5, 3): (1, 0, 1, 1),
    (5, 4): (1, 0, 1, 1, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (1, 0, 1, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (1, 3, 1),
    (17, 2): (1, 1, 1),
    (19, 2): (1, 0, 1),
    (23, 2): (1, 0, 1),
    (29, 2): (1, 1, 1),
    (31, 2): (1, 0, 1),
}


def _prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return (p, m) with q == p**m and p prime, or None."""
    if q < 2:
        return None
    p = None
    for cand in range(2, q + 1):
        if cand * cand > q:
            break
        if q % cand == 0:
            p = cand
            break
    if p is None:
        return (q, 1)
    m = 0
    rest = q
    while rest % p == 0:
        rest //= p
        m += 1
    return (p, m) if rest == 1 else None


def _prime_factors(n: int) -> list[int]:
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
    return out


class ScalarDomain:
    """Arithmetic context: either a finite field GF(p^m) or the ring Z mod q.

    Construct through the ``field`` / ``ring`` factories.  The object carries
    every scalar operation the rest of the package needs; elements themselves
    stay plain ints.

    Attributes
    ----------
    kind : str
        "field" or "ring".
    q : int
        Number of elements (p**m for fields, the modulus for rings).
    p, m : int
        Characteristic and extension degree; for rings p == q and m == 1.
    modulus : tuple[int, ...] | None
        Coefficients (constant first) of the irreducible modulus polynomial
        for extension fields, None otherwise.
    """

    __slots__ = ("kind", "q", "p", "m", "modulus", "_exp", "_log")

    def __init__(self, kind: str, q: int, p: int, m: int,
                 modulus: Optional[tuple[int, ...]]):
        self.kind = kind
        self.q = q
        self.p = p
        self.m = m
        self.modulus = modulus
        self._exp: Optional[list[int]] = None
        self._log: Optional[list[int]] = None
        if kind == "field" and m > 1:
            self._build_tables()

    # ---------------------------------------------------------- construction

    @staticmethod
    def field(q: int, modulus: Optional[Sequence[int]] = None) -> "ScalarDomain":
        """Finite field with q elements, 2 <= q <= 1024.

        ``modulus`` optionally overrides the built-in irreducible polynomial
        (constant term first, must be monic of degree m and irreducible).
        """
        if not 2 <= q <= _MAX_ORDER:
            raise DomainError(f"field order {q} outside supported range 2..{_MAX_ORDER}")
        pm = _prime_power(q)
        if pm is None:
            raise DomainError(f"field order {q} is not a prime power")
        p, m = pm
        if m == 1:
            if modulus is not None:
                raise DomainError("prime fields take no modulus polynomial")
            return ScalarDomain("field", q, p, 1, None)
        if modulus is None:
            mod = _IRREDUCIBLE[(p, m)]
        else:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != m + 1:
                raise DomainError(f"modulus must have degree {m}, got degree {len(mod) - 1}")
            if mod[-1] != 1:
                raise DomainError("modulus polynomial must be monic")
            if not _poly_irreducible(mod, p):
                raise DomainError(f"modulus {list(mod)} is reducible over GF({p})")
        return ScalarDomain("field", q, p, m, mod)

    @staticmethod
    def ring(q: int) -> "ScalarDomain":
        """Residue ring Z mod q, 2 <= q <= 1024."""
        if not 2 <= q <= _MAX_ORDER:
            raise DomainError(f"ring modulus {q} outside supported range 2..{_MAX_ORDER}")
        return ScalarDomain("ring", q, q, 1, None)

    @property
    def is_field(self) -> bool:
        return self.kind == "field"

    # ------------------------------------------------------------ comparison

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ScalarDomain)
                and self.kind == other.kind
                and self.q == other.q
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.kind, self.q, self.modulus))

    def __repr__(self) -> str:
        if self.kind == "ring":
            return f"Z mod {self.q}"
        if self.m == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.m})"

    # ------------------------------------------------------------ table prep

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        gen = None
        factors = _prime_factors(q - 1)
        for cand in range(1, q):
            if all(self._pow_raw(cand, (q - 1) // r) != 1 for r in factors):
                gen = cand
                break
        if gen is None:  # pragma: no cover - impossible for a true field
            raise DomainError(f"no primitive element found for GF({q})")
        exp = [1] * (q - 1)
        log = [0] * q
        acc = 1
        for i in range(1, q - 1):
            acc = self._mul_raw(acc, gen)
            exp[i] = acc
            log[acc] = i
        log[1] = 0
        self._exp, self._log = exp, log

    def _mul_raw(self, a: int, b: int) -> int:
        """Polynomial product mod (modulus, p) on packed ints; no tables."""
        p, m = self.p, self.m
        da = _unpack(a, p, m)
        db = _unpack(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        mod = self.modulus
        assert mod is not None
        for i in range(len(prod) - 1, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m + 1):
                    prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return _pack(prod[:m], p)

    def _pow_raw(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = self._mul_raw(out, base)
            base = self._mul_raw(base, base)
            e >>= 1
        return out

    # ------------------------------------------------------------ scalar ops

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.q
        p, m = self.p, self.m
        return _pack([(x + y) % p for x, y in zip(_unpack(a, p, m), _unpack(b, p, m))], p)

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.q
        p, m = self.p, self.m
        return _pack([(x - y) % p for x, y in zip(_unpack(a, p, m), _unpack(b, p, m))], p)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.q
        p, m = self.p, self.m
        return _pack([(-x) % p for x in _unpack(a, p, m)], p)

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.q
        if a == 0 or b == 0:
            return 0
        assert self._exp is not None and self._log is not None
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        """Multiplicative inverse; raises NotAUnit when none exists."""
        a %= self.q
        if a == 0:
            raise NotAUnit(f"0 is not invertible in {self!r}")
        if self.kind == "ring":
            try:
                return pow(a, -1, self.q)
            except ValueError:
                raise NotAUnit(f"{a} is not a unit in {self!r}") from None
        if self.m == 1:
            return pow(a, self.q - 2, self.q)
        assert self._exp is not None and self._log is not None
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def is_unit(self, a: int) -> bool:
        a %= self.q
        if self.kind == "field":
            return a != 0
        return math.gcd(a, self.q) == 1

    def is_zero(self, a: int) -> bool:
        return a % self.q == 0

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    def validate(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise DomainError(f"{a!r} is not a canonical element of {self!r}")
        return a


def _unpack(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(a % p)
        a //= p
    return out


def _pack(coeffs: Iterable[int], p: int) -> int:
    out = 0
    mult = 1
    for c in coeffs:
        out += c * mult
        mult *= p
    return out


def _poly_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive divisor check: no monic factor of degree 1..deg//2."""
    import itertools

    deg = len(coeffs) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            den = list(tail) + [1]
            rem = list(coeffs)
            for i in range(len(rem) - 1 - d, -1, -1):
                c = rem[i + d] % p
                if c:
                    for j in range(d + 1):
                        rem[i + j] = (rem[i + j] - c * den[j]) % p
            if all(x % p == 0 for x in rem[:d]):
                return False
    return True


def natural_domain(q: int) -> ScalarDomain:
    """Field when q is a prime power, integers mod q otherwise."""
    if _prime_power(q):
        return ScalarDomain.field(q)
    return ScalarDomain.ring(q)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with canonical int entries over a ScalarDomain."""

    domain: ScalarDomain
    rows: int
    cols: int
    entries: tuple[int, ...]  # row-major

    @staticmethod
    def from_rows(domain: ScalarDomain, rows: Sequence[Sequence[int]]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            for x in row:
                flat.append(domain.validate(int(x)))
        return Matrix(domain, r, c, tuple(flat))

    @staticmethod
    def identity(domain: ScalarDomain, n: int) -> "Matrix":
        return Matrix(domain, n, n,
                      tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.domain, self.cols, self.rows,
                      tuple(self.get(i, j)
                            for j in range(self.cols) for i in range(self.rows)))

    def take_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.domain, self.rows, len(idx),
                      tuple(self.get(i, j) for i in range(self.rows) for j in idx))

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.domain, len(idx), self.cols,
                      tuple(self.get(i, j) for i in idx for j in range(self.cols)))

    def mul(self, other: "Matrix") -> "Matrix":
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain!r} vs {other.domain!r}")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        dom = self.domain
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = 0
                for t, a in enumerate(ri):
                    if a:
                        acc = dom.add(acc, dom.mul(a, other.get(t, j)))
                out.append(acc)
        return Matrix(dom, self.rows, other.cols, tuple(out))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def mat_rank(m: Matrix) -> int:
    """Rank by Gaussian elimination with first-nonzero pivoting; fields only."""
    if not m.domain.is_field:
        raise RingNotSupported("rank is defined here over fields only; "
                               "use mat_det_is_unit for square ring matrices")
    dom = m.domain
    work = m.to_rows()
    rank = 0
    for col in range(m.cols):
        pivot = None
        for r in range(rank, m.rows):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = dom.inv(work[rank][col])
        for r in range(rank + 1, m.rows):
            c = work[r][col]
            if c:
                f = dom.mul(c, inv)
                for j in range(col, m.cols):
                    work[r][j] = dom.sub(work[r][j], dom.mul(f, work[rank][j]))
        rank += 1
        if rank == m.rows:
            break
    return rank


def _det_cofactor(m: Matrix) -> int:
    dom = m.domain
    n = m.rows
    if n == 0:
        return 1
    if n == 1:
        return m.get(0, 0)
    if n == 2:
        return dom.sub(dom.mul(m.get(0, 0), m.get(1, 1)),
                       dom.mul(m.get(0, 1), m.get(1, 0)))
    total = 0
    cols = list(range(1, n))
    sub = m.take_rows(range(1, n))
    for j in range(n):
        a = m.get(0, j)
        if a == 0:
            continue
        minor = sub.take_cols([c for c in range(n) if c != j])
        term = dom.mul(a, _det_cofactor(minor))
        total = dom.add(total, term) if j % 2 == 0 else dom.sub(total, term)
    return total


def _det_field_elim(m: Matrix) -> int:
    dom = m.domain
    n = m.rows
    work = m.to_rows()
    det = 1
    sign = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            sign = -sign
        det = dom.mul(det, work[col][col])
        inv = dom.inv(work[col][col])
        for r in range(col + 1, n):
            c = work[r][col]
            if c:
                f = dom.mul(c, inv)
                for j in range(col, n):
                    work[r][j] = dom.sub(work[r][j], dom.mul(f, work[col][j]))
    return dom.neg(det) if sign < 0 else det


def _det_bareiss_int(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (exact divisions)."""
    n = len(rows)
    work = [list(r) for r in rows]
    sign = 1
    prev = 1
    for col in range(n - 1):
        if work[col][col] == 0:
            swap = None
            for r in range(col + 1, n):
                if work[r][col] != 0:
                    swap = r
                    break
            if swap is None:
                return 0
            work[col], work[swap] = work[swap], work[col]
            sign = -sign
        for r in range(col + 1, n):
            for j in range(col + 1, n):
                work[r][j] = (work[r][j] * work[col][col]
                              - work[r][col] * work[col][j]) // prev
            work[r][col] = 0
        prev = work[col][col]
    return sign * work[n - 1][n - 1]


def mat_det_is_unit(m: Matrix) -> tuple[int, bool]:
    """Determinant of a square matrix and whether it is a unit.

    Cofactor expansion up to 4x4; above that, fields use exact Gaussian
    elimination and rings use integer Bareiss elimination with a final
    reduction mod q (both division-exact).
    """
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix has no determinant")
    dom = m.domain
    if m.rows <= 4:
        det = _det_cofactor(m)
    elif dom.is_field:
        det = _det_field_elim(m)
    else:
        det = _det_bareiss_int(m.to_rows()) % dom.q
    return det, dom.is_unit(det)


def mat_solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """One solution x of a x = b over a field, or None when inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    if not a.domain.is_field:
        raise RingNotSupported("linear solving is supported over fields only")
    if a.domain != b.domain:
        raise DomainMismatch(f"{a.domain!r} vs {b.domain!r}")
    if a.rows != b.rows:
        raise DimensionMismatch(f"lhs has {a.rows} rows, rhs has {b.rows}")
    dom = a.domain
    rows, cols, wide = a.rows, a.cols, a.cols + b.cols
    work = [list(a.row(i)) + list(b.row(i)) for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        pivot = None
        for rr in range(r, rows):
            if work[rr][col]:
                pivot = rr
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = dom.inv(work[r][col])
        work[r] = [dom.mul(inv, x) for x in work[r]]
        for rr in range(rows):
            if rr != r and work[rr][col]:
                f = work[rr][col]
                work[rr] = [dom.sub(x, dom.mul(f, y)) for x, y in zip(work[rr], work[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    # an inconsistent row has zero lhs and nonzero rhs
    for rr in range(rows):
        if not any(work[rr][:cols]) and any(work[rr][cols:]):
            return None
    out = [[0] * b.cols for _ in range(cols)]
    for i, col in enumerate(pivots):
        for j in range(b.cols):
            out[col][j] = work[i][cols + j]
    return Matrix.from_rows(dom, out)
