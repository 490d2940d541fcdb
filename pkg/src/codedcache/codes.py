"""Generator matrices with the consecutive column property (CCP).

A (k, alpha)-CCP generator matrix G over GF(q) or Z mod q is a k x n matrix
whose cyclically-consecutive column windows
``S_a = {a*alpha, ..., a*alpha + alpha - 1} mod n`` (for a = 0 .. z*n/alpha - 1,
z the least positive integer with alpha | n*z) all contain alpha "independent"
columns: for alpha = k+1 every k x k submatrix of a window must be invertible,
for alpha <= k the window must have alpha independent columns.  Such matrices
induce resolvable designs and, from those, coded caching schemes (see design
and caching modules).

Everything here is exact integer arithmetic on top of the gf module.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import (
    BaseNotCcp,
    ComponentInvalid,
    DomainError,
    FieldTooSmall,
    InvalidAlpha,
    ModuliNotCoprimePrimes,
    NotADivisor,
    NotCyclic,
    NotMonic,
    RingConditionViolated,
    RingNotSupported,
    ShapeMismatch,
    ZeroColumn,
    ZeroConstantTerm,
)
from .gf import Matrix, ScalarDomain, mat_det_is_unit, mat_rank

# ---------------------------------------------------------------------------
# provenance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    """How a generator matrix was built; enough to rebuild it."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if "kind" in self.params:
            raise DomainError("provenance params may not shadow the kind key")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        for key, value in self.params.items():
            if isinstance(value, Provenance):
                out[key] = value.to_dict()
            else:
                out[key] = value
        return out

    @staticmethod
    def from_dict(data: dict) -> "Provenance":
        params = {}
        for key, value in data.items():
            if key == "kind":
                continue
            if isinstance(value, dict) and "kind" in value:
                params[key] = Provenance.from_dict(value)
            else:
                params[key] = value
        return Provenance(data["kind"], params)


# ---------------------------------------------------------------------------
# generator matrices
# ---------------------------------------------------------------------------


class GeneratorMatrix:
    """A validated k x n generator matrix over a field or residue ring.

    Field matrices may not contain an all-zero column.  Ring matrices must
    satisfy the unit-content condition gcd(q, g_0b, ..., g_(k-1)b) = 1 for
    every column b, which is exactly what makes the induced block sizes equal.
    """

    __slots__ = ("mat", "k", "n", "domain", "provenance")

    def __init__(self, mat: Matrix, provenance: Optional[Provenance] = None):
        k, n = mat.rows, mat.cols
        if not 1 <= k < n:
            raise ShapeMismatch(f"need 1 <= k < n, got k={k}, n={n}")
        dom = mat.domain
        for b in range(n):
            col = mat.column(b)
            if dom.is_field:
                if not any(col):
                    raise ZeroColumn(f"column {b} is all zero")
            else:
                if math.gcd(dom.q, *col) != 1:
                    raise RingConditionViolated(
                        f"column {b} has content gcd {math.gcd(dom.q, *col)} with {dom!r}")
        self.mat = mat
        self.k = k
        self.n = n
        self.domain = dom
        self.provenance = provenance or Provenance("user")

    def __repr__(self) -> str:
        return f"GeneratorMatrix(k={self.k}, n={self.n}, {self.domain!r}, {self.provenance.kind})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GeneratorMatrix)
                and self.mat == other.mat)


# ---------------------------------------------------------------------------
# CCP certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindowCheck:
    """Verdict for one column window."""

    index: int
    columns: tuple[int, ...]
    checks: tuple[tuple[str, bool], ...]
    ok: bool


@dataclass(frozen=True)
class CcpCertificate:
    alpha: int
    z: int
    satisfied: bool
    method: str  # "exhaustive" or "cyclic-shortcut"
    windows: tuple[WindowCheck, ...]


def least_z(n: int, alpha: int) -> int:
    """Least positive z with alpha | n*z."""
    return alpha // math.gcd(n, alpha)


def ccp_windows(n: int, alpha: int) -> list[tuple[int, ...]]:
    """Column windows S_a in traversal order, a = 0 .. z*n/alpha - 1."""
    z = least_z(n, alpha)
    return [tuple((a * alpha + j) % n for j in range(alpha))
            for a in range(z * n // alpha)]


def _check_window_full(g: GeneratorMatrix, alpha: int,
                       cols: tuple[int, ...]) -> tuple[tuple[tuple[str, bool], ...], bool]:
    dom = g.domain
    win = g.mat.take_cols(cols)
    checks: list[tuple[str, bool]] = []
    if alpha == g.k + 1:
        for d in range(alpha):
            sub = win.take_cols([c for c in range(alpha) if c != d])
            if dom.is_field:
                ok = mat_rank(sub) == g.k
            else:
                ok = mat_det_is_unit(sub)[1]
            checks.append((f"drop column {cols[d]}", ok))
        return tuple(checks), all(ok for _, ok in checks)
    if dom.is_field:
        ok = mat_rank(win) == alpha
        checks.append((f"column rank == {alpha}", ok))
        return tuple(checks), ok
    # ring, alpha <= k: look for an alpha x alpha row minor with unit det
    for rows in itertools.combinations(range(g.k), alpha):
        if mat_det_is_unit(win.take_rows(rows))[1]:
            checks.append((f"rows {rows} give a unit minor", True))
            return tuple(checks), True
    checks.append((f"no unit {alpha}x{alpha} row minor", False))
    return tuple(checks), False


def check_ccp(g: GeneratorMatrix, alpha: int,
              workers: Optional[int] = None) -> CcpCertificate:
    """Certify the (k, alpha)-CCP of g by checking every column window.

    alpha = k+1 tests all k x k submatrices of each window; alpha <= k tests
    for alpha independent columns (fields: rank; rings: exhaustive search for
    a unit alpha x alpha row minor).
    """
    if not 1 <= alpha <= g.k + 1:
        raise InvalidAlpha(f"alpha must be in 1..{g.k + 1}, got {alpha}")
    windows = ccp_windows(g.n, alpha)
    z = least_z(g.n, alpha)

    def run(item: tuple[int, tuple[int, ...]]) -> WindowCheck:
        a, cols = item
        checks, ok = _check_window_full(g, alpha, cols)
        return WindowCheck(a, cols, checks, ok)

    items = list(enumerate(windows))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = tuple(pool.map(run, items))
    else:
        results = tuple(run(it) for it in items)
    return CcpCertificate(alpha, z, all(w.ok for w in results), "exhaustive", results)


def check_ccp_cyclic_shortcut(g: GeneratorMatrix) -> CcpCertificate:
    """(k, k+1)-CCP verdict for a cyclic code from one window's condition
    matrices built out of the generator polynomial coefficients.

    For the window starting at position n - floor(k/2) - 1, dropping the j-th
    window column leaves a full-rank submatrix iff a small square condition
    matrix C_j built from shifted generator coefficients is invertible; j = 0
    and j = k are always invertible.  Because cyclic shifts map codewords to
    codewords, this single window decides every window, so the verdict equals
    the exhaustive check.
    """
    if g.provenance.kind != "cyclic":
        raise NotCyclic("shortcut applies to cyclic-code generator matrices only")
    gen: Sequence[int] = g.provenance.params["gen_poly"]
    n, k = g.n, g.k
    dom = g.domain

    def coeff(i: int) -> int:
        return gen[i] if 0 <= i < len(gen) else 0

    start = n - k // 2 - 1
    cols = tuple((start + j) % n for j in range(k + 1))
    checks: list[tuple[str, bool]] = [("boundary j=0 (triangular unit block)", True)]
    half = k // 2
    for j in range(1, k):
        if j <= half:
            dim = j
            rows = [[coeff(n - k - 1 - r + c) for c in range(dim)] for r in range(dim)]
        else:
            dim = k - j
            rows = [[coeff(1 - r + c) for c in range(dim)] for r in range(dim)]
        cj = Matrix.from_rows(dom, rows)
        _, ok = mat_det_is_unit(cj)
        checks.append((f"condition matrix for j={j} ({dim}x{dim})", ok))
    checks.append(("boundary j=k (triangular unit block)", True))
    satisfied = all(ok for _, ok in checks)
    window = WindowCheck(0, cols, tuple(checks), satisfied)
    return CcpCertificate(k + 1, least_z(n, k + 1), satisfied, "cyclic-shortcut", (window,))


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists, constant term first)
# ---------------------------------------------------------------------------


def _poly_divmod(num: Sequence[int], den: Sequence[int],
                 dom: ScalarDomain) -> tuple[list[int], list[int]]:
    """Divide by a monic polynomial; exact over rings because den is monic."""
    num = [x % dom.q for x in num]
    d = len(den) - 1
    if len(num) < len(den):
        return [], num
    quot = [0] * (len(num) - d)
    for i in range(len(num) - 1 - d, -1, -1):
        c = num[i + d]
        quot[i] = c
        if c:
            for j in range(d + 1):
                num[i + j] = dom.sub(num[i + j], dom.mul(c, den[j]))
    return quot, num[:d]


def _divides_xn_minus_1(gen: Sequence[int], n: int, dom: ScalarDomain) -> bool:
    xn1 = [dom.neg(1)] + [0] * (n - 1) + [1]
    _, rem = _poly_divmod(xn1, gen, dom)
    return not any(rem)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def build_mds(n: int, k: int, domain: ScalarDomain) -> GeneratorMatrix:
    """Vandermonde generator of an (n, k) MDS code on points 0, 1, ..., n-1.

    Any k columns are independent, so every CCP window passes for any alpha.
    Requires q >= n so the n evaluation points are distinct.
    """
    if not domain.is_field:
        raise RingNotSupported("MDS construction requires a field")
    if domain.q < n:
        raise FieldTooSmall(f"need q >= n, got q={domain.q} < n={n}")
    rows = [[domain.pow(x, i) for x in range(n)] for i in range(k)]
    mat = Matrix.from_rows(domain, rows)
    return GeneratorMatrix(mat, Provenance("mds", {"n": n, "k": k, "q": domain.q}))


def build_cyclic(n: int, gen_poly: Sequence[int], domain: ScalarDomain) -> GeneratorMatrix:
    """Banded generator matrix of the (n, n-deg) cyclic code generated by a
    monic divisor of X^n - 1 with nonzero constant term (constant term first).
    """
    gen = [int(c) % domain.q for c in gen_poly]
    while len(gen) > 1 and gen[-1] == 0:
        gen.pop()
    deg = len(gen) - 1
    if deg < 1 or gen[-1] != 1:
        raise NotMonic(f"generator polynomial must be monic of degree >= 1, got {gen}")
    if gen[0] == 0:
        raise ZeroConstantTerm("generator polynomial must have a nonzero constant term")
    if deg >= n:
        raise ShapeMismatch(f"degree {deg} must be below n={n}")
    if not _divides_xn_minus_1(gen, n, domain):
        raise NotADivisor(f"{gen} does not divide X^{n} - 1 over {domain!r}")
    k = n - deg
    rows = [[0] * i + gen + [0] * (n - deg - 1 - i) for i in range(k)]
    mat = Matrix.from_rows(domain, rows)
    return GeneratorMatrix(mat, Provenance("cyclic", {"n": n, "q": domain.q,
                                                      "gen_poly": gen}))


def build_spc(k: int, domain: ScalarDomain) -> GeneratorMatrix:
    """Single parity check code [I_k | 1]; works over fields and rings."""
    rows = [[1 if i == j else 0 for j in range(k)] + [1] for i in range(k)]
    mat = Matrix.from_rows(domain, rows)
    return GeneratorMatrix(mat, Provenance("spc", {"k": k, "q": domain.q}))


def kron_identity(base: GeneratorMatrix, t: int) -> GeneratorMatrix:
    """Kronecker product base (x) I_t.

    The identity factor lives in base's own domain.  A z x alphaCols base
    satisfying the (z, z)-CCP yields a (t*z, t*z)-CCP matrix of size
    t*z x t*alphaCols, because every window determinant of the product is a
    window determinant of the base raised to the t-th power.
    """
    if t < 1:
        raise ShapeMismatch(f"t must be >= 1, got {t}")
    if not check_ccp(base, base.k).satisfied:
        raise BaseNotCcp(f"base fails the ({base.k}, {base.k})-CCP")
    z, acols = base.k, base.n
    rows = []
    for i in range(z):
        for r in range(t):
            row = [0] * (acols * t)
            for j in range(acols):
                row[j * t + r] = base.mat.get(i, j)
            rows.append(row)
    mat = Matrix.from_rows(base.domain, rows)
    return GeneratorMatrix(mat, Provenance("kron_identity",
                                           {"t": t, "base": base.provenance}))


def _assemble_block_code(t: int, z: int, domain: ScalarDomain,
                         bs: Sequence[int], c1: int, c2: int,
                         vandermonde: Optional[list[list[int]]]) -> Matrix:
    """Shared row assembly for the two block constructions below.

    With ``vandermonde`` given (a z x alphaCols coefficient table), rows are
    the scaled-identity stack [b_ij I_t] topped off by circulant blocks
    C(b, b); without it, rows are the identity/ones/scaled-identity layout
    with a final identity + ones + C(c1, c2) strip.
    """
    rows: list[list[int]] = []
    if vandermonde is not None:
        acols = len(vandermonde[0])
        n = t * acols
        for i in range(z - 1):
            for r in range(t):
                row = [0] * n
                for j in range(acols):
                    row[j * t + r] = vandermonde[i][j]
                rows.append(row)
        for r in range(t - 1):
            row = [0] * n
            for j in range(acols):
                b = vandermonde[z - 1][j]
                row[j * t + r] = b
                row[j * t + r + 1] = b
            rows.append(row)
        return Matrix.from_rows(domain, rows)
    n = (z + 1) * t
    ones_col = (z - 1) * t + (t - 1)
    for i in range(z - 1):
        for r in range(t):
            row = [0] * n
            row[i * t + r] = 1
            row[ones_col] = 1
            row[ones_col + 1 + r] = bs[i]
            rows.append(row)
    for r in range(t - 1):
        row = [0] * n
        row[(z - 1) * t + r] = 1
        row[ones_col] = 1
        row[ones_col + 1 + r] = c1
        row[ones_col + 1 + r + 1] = c2
        rows.append(row)
    return Matrix.from_rows(domain, rows)


def build_claim5(t: int, z: int, alpha_cols: int,
                 domain: ScalarDomain) -> GeneratorMatrix:
    """(t*alphaCols, t*z - 1) code from a z x alphaCols Vandermonde table on
    the first alphaCols nonzero field elements; satisfies the (k, k+1)-CCP
    for k+1 = t*z.  Requires q > alphaCols and gcd(z, alphaCols) = 1.
    """
    if not domain.is_field:
        raise RingNotSupported("this construction requires a field")
    if t < 1 or z < 2 or alpha_cols < 2:
        raise ShapeMismatch(f"need t >= 1, z >= 2, alphaCols >= 2; got {t}, {z}, {alpha_cols}")
    if math.gcd(z, alpha_cols) != 1:
        raise ShapeMismatch(f"z={z} and alphaCols={alpha_cols} must be coprime")
    if domain.q <= alpha_cols:
        raise FieldTooSmall(f"need q > alphaCols, got q={domain.q}")
    table = [[domain.pow(x, i) for x in range(1, alpha_cols + 1)] for i in range(z)]
    mat = _assemble_block_code(t, z, domain, [], 0, 0, table)
    return GeneratorMatrix(mat, Provenance("claim5", {"t": t, "z": z,
                                                      "alpha_cols": alpha_cols,
                                                      "q": domain.q}))


def build_claim6(t: int, z: int, domain: ScalarDomain) -> GeneratorMatrix:
    """((z+1)*t, z*t - 1) code satisfying the (k, k+1)-CCP for k+1 = z*t,
    covering the n*z = (z+1)*(k+1) parameter family.  Uses b_i = the first
    z-1 distinct nonzero elements and the circulant pair (1, -1); needs q >= z.
    """
    if not domain.is_field:
        raise RingNotSupported("use the residue-ring variant for rings")
    if t < 1 or z < 2:
        raise ShapeMismatch(f"need t >= 1 and z >= 2; got t={t}, z={z}")
    if domain.q < z:
        raise FieldTooSmall(f"need q >= z, got q={domain.q} < z={z}")
    bs = list(range(1, z))
    mat = _assemble_block_code(t, z, domain, bs, 1, domain.neg(1), None)
    return GeneratorMatrix(mat, Provenance("claim6", {"t": t, "z": z, "q": domain.q}))


def build_claim9(t: int, ring_modulus: int) -> GeneratorMatrix:
    """(3t, 2t - 1) matrix over Z mod q satisfying the (k, k+1)-CCP for
    k+1 = 2t; the z = 2 layout with b = 1 and circulant pair (1, -1) keeps
    every window determinant equal to +-1, hence a unit for every modulus.
    """
    if t < 2:
        raise ShapeMismatch(f"t must be >= 2, got {t}")
    domain = ScalarDomain.ring(ring_modulus)
    mat = _assemble_block_code(t, 2, domain, [1], 1, domain.neg(1), None)
    return GeneratorMatrix(mat, Provenance("claim9", {"t": t, "q": ring_modulus}))


def extend_ccp(g: GeneratorMatrix, s: int, alpha: Optional[int] = None) -> GeneratorMatrix:
    """Prepend s copies of the first alpha columns (alpha defaults to k+1).

    A (k, alpha)-CCP matrix stays (k, alpha)-CCP under this extension and the
    induced z is unchanged, because the new windows repeat old ones.
    """
    if s < 0:
        raise ShapeMismatch(f"s must be >= 0, got {s}")
    alpha = g.k + 1 if alpha is None else alpha
    if not check_ccp(g, alpha).satisfied:
        raise BaseNotCcp(f"base fails the ({g.k}, {alpha})-CCP")
    if s == 0:
        return g
    head = [list(g.mat.row(i)[:alpha]) for i in range(g.k)]
    rows = [head[i] * s + list(g.mat.row(i)) for i in range(g.k)]
    mat = Matrix.from_rows(g.domain, rows)
    return GeneratorMatrix(mat, Provenance("extended", {"s": s, "alpha": alpha,
                                                        "base": g.provenance}))


# ---------------------------------------------------------------------------
# cyclic generator search
# ---------------------------------------------------------------------------


def cyclic_search_space(n: int, k: int, domain: ScalarDomain) -> int:
    """Number of monic degree-(n-k) candidates with nonzero constant term."""
    deg = n - k
    return (domain.q - 1) * domain.q ** (deg - 1)


def search_cyclic_generators(n: int, k: int, domain: ScalarDomain,
                             limit: int = 10 ** 6) -> list[list[int]]:
    """All generator polynomials of (n, k) cyclic codes over the domain,
    in lexicographic coefficient order (constant term first).

    Enumerates monic degree-(n-k) polynomials with nonzero constant term and
    keeps the divisors of X^n - 1.  At most ``limit`` candidates are examined,
    so a result from a truncated enumeration may be incomplete; compare
    cyclic_search_space to detect that.
    """
    deg = n - k
    if deg < 1:
        return []
    q = domain.q
    found: list[list[int]] = []
    examined = 0
    for g0_mid in itertools.product(range(1, q), *([range(q)] * (deg - 1))):
        examined += 1
        if examined > limit:
            break
        cand = list(g0_mid) + [1]
        if _divides_xn_minus_1(cand, n, domain):
            found.append(cand)
    return found


# ---------------------------------------------------------------------------
# residue (CRT) codeword sources
# ---------------------------------------------------------------------------


class CrtCodewordSource:
    """Length-n codewords over Z mod (q_1 * ... * q_d) assembled coordinate-
    wise from component cyclic codes over the prime fields GF(q_i).

    There are q_1^k_1 * ... * q_d^k_d codewords.  The delivery gain parameter
    is k_min = min k_i: the combined code supports the (k, k_min)-CCP
    machinery because each component does.
    """

    __slots__ = ("n", "q", "components", "k_min", "num_codewords", "provenance",
                 "_basis")

    def __init__(self, components: Sequence[GeneratorMatrix], n: int):
        qs = [c.domain.q for c in components]
        self.n = n
        self.q = math.prod(qs)
        self.components = tuple(components)
        self.k_min = min(c.k for c in components)
        self.num_codewords = math.prod(c.domain.q ** c.k for c in components)
        self.provenance = Provenance(
            "crt_cyclic",
            {"n": n, "q": self.q,
             "components": [{"q": c.domain.q,
                             "gen_poly": list(c.provenance.params["gen_poly"])}
                            for c in components]})
        basis = []
        for qi in qs:
            mi = self.q // qi
            basis.append((mi * pow(mi, -1, qi)) % self.q)
        self._basis = tuple(basis)

    def codewords(self) -> Iterator[tuple[int, ...]]:
        """Codewords in componentwise message order, first component most
        significant; index 0 is the all-zero word."""
        comp_words = []
        for g in self.components:
            dom = g.domain
            words = []
            for idx in range(dom.q ** g.k):
                msg = _digits_big_endian(idx, dom.q, g.k)
                word = [0] * self.n
                for a, u in enumerate(msg):
                    if u:
                        row = g.mat.row(a)
                        for j in range(self.n):
                            word[j] = dom.add(word[j], dom.mul(u, row[j]))
                words.append(tuple(word))
            comp_words.append(words)
        for combo in itertools.product(*comp_words):
            yield tuple(sum(e * w[j] for e, w in zip(self._basis, combo)) % self.q
                        for j in range(self.n))


def _digits_big_endian(value: int, base: int, width: int) -> list[int]:
    digits = []
    for _ in range(width):
        digits.append(value % base)
        value //= base
    digits.reverse()
    return digits


def build_crt_cyclic(components: Sequence[tuple[Sequence[int], ScalarDomain]],
                     n: int) -> CrtCodewordSource:
    """Combine (n, k_i) cyclic codes over distinct prime fields GF(q_i) into a
    codeword source over Z mod prod(q_i)."""
    if not components:
        raise ComponentInvalid("at least one component is required")
    qs = []
    for _, dom in components:
        if not (dom.is_field and dom.m == 1):
            raise ModuliNotCoprimePrimes(f"{dom!r} is not a prime field")
        qs.append(dom.q)
    if len(set(qs)) != len(qs):
        raise ModuliNotCoprimePrimes(f"moduli must be distinct, got {qs}")
    built = []
    for gen_poly, dom in components:
        try:
            built.append(build_cyclic(n, gen_poly, dom))
        except Exception as exc:
            raise ComponentInvalid(f"component over {dom!r}: {exc}") from exc
    return CrtCodewordSource(built, n)
