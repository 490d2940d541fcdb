"""Coded caching schemes on top of resolvable designs.

Users are the blocks of the design, indexed class-major: user u = i*q + l is
block B_{i,l}.  Every file splits into F_s = numPoints * z subfiles indexed
by a point t and a superscript s in [0, z); subfile (t, s) maps to flat column
t*z + s.  User B caches every subfile whose point lies in B, so M/N = 1/q.

Delivery works per recovery set: the cyclically-consecutive groups of alpha
parallel classes.  For each choice of one block per class in the group, the
leave-one-out intersections decide which missing subfiles the equation serves,
and the edge labels of the recovery-set graph pick the superscript.  One
enumeration covers both delivery regimes: when alpha = k+1 the leave-one-out
intersections are single points and tuples with a common point contribute
nothing; when alpha <= k each tuple serves several subfiles per user, paired
off rank by rank in ascending point order.

Equations, users and subfiles are ordered deterministically throughout:
recovery sets ascending, block tuples in lexicographic order, ranks ascending.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .codes import CrtCodewordSource, GeneratorMatrix, least_z
from .design import ResolvableDesign
from .errors import (
    DecodeFailure,
    IncompleteDemands,
    InvalidAlpha,
    Lemma4Violated,
    ShapeMismatch,
)

# ---------------------------------------------------------------------------
# placement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CachingScheme:
    """Placement derived from a resolvable design at gain parameter alpha."""

    design: ResolvableDesign
    alpha: int
    z: int
    n: int
    q: int
    num_points: int
    k: Optional[int]  # generator-source dimension; None for residue sources

    @property
    def num_users(self) -> int:
        return self.n * self.q

    @property
    def f_s(self) -> int:
        return self.num_points * self.z

    @property
    def m_over_n(self) -> Fraction:
        return Fraction(1, self.q)

    def user_block(self, u: int) -> tuple[int, ...]:
        return self.design.classes[u // self.q][u % self.q]

    def user_label(self, u: int) -> tuple[int, int]:
        return (u // self.q, u % self.q)

    def subfile_col(self, point: int, superscript: int) -> int:
        return point * self.z + superscript

    def cache_cols(self, u: int) -> frozenset[int]:
        return frozenset(t * self.z + s
                         for t in self.user_block(u) for s in range(self.z))


def placement(d: ResolvableDesign, alpha: int) -> CachingScheme:
    """Cache block points at every superscript; subpacketization numPoints*z
    with z the least positive integer such that alpha divides n*z."""
    src = d.source
    if isinstance(src, CrtCodewordSource):
        k = None
        if not 1 <= alpha <= src.k_min:
            raise InvalidAlpha(
                f"residue sources support alpha in 1..{src.k_min}, got {alpha}")
    else:
        k = src.k
        if not 1 <= alpha <= k + 1:
            raise InvalidAlpha(f"alpha must be in 1..{k + 1}, got {alpha}")
    return CachingScheme(d, alpha, least_z(d.n, alpha), d.n, d.q, d.num_points, k)


# ---------------------------------------------------------------------------
# recovery sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecoverySetGraph:
    """Bipartite structure between parallel classes and recovery sets.

    sets[a] lists the classes of S_a in ascending order.  Each class touches
    exactly z recovery sets; its edges get superscript labels 0..z-1 in
    ascending order of the recovery-set index a.
    """

    n: int
    alpha: int
    z: int
    sets: tuple[tuple[int, ...], ...]
    labels: dict  # (class, set index) -> superscript

    def sets_of_class(self, i: int) -> list[int]:
        return [a for a in range(len(self.sets)) if i in self.sets[a]]


def recovery_set_graph(n: int, alpha: int) -> RecoverySetGraph:
    """Recovery sets S_a = {a*alpha, ..., a*alpha + alpha - 1} mod n for
    a = 0 .. z*n/alpha - 1, with deterministic edge labels."""
    if not 1 <= alpha <= n:
        raise ShapeMismatch(f"alpha must be in 1..{n}, got {alpha}")
    z = least_z(n, alpha)
    sets = []
    for a in range(z * n // alpha):
        window = [(a * alpha + j) % n for j in range(alpha)]
        if len(set(window)) != alpha:
            raise ShapeMismatch(f"window {a} repeats classes")  # unreachable for alpha <= n
        sets.append(tuple(sorted(window)))
    labels: dict = {}
    counts = [0] * n
    for a, s in enumerate(sets):
        for i in s:
            labels[(i, a)] = counts[i]
            counts[i] += 1
    if any(c != z for c in counts):
        raise ShapeMismatch("recovery sets do not touch every class z times")
    return RecoverySetGraph(n, alpha, z, tuple(sets), labels)


# ---------------------------------------------------------------------------
# delivery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    recovery_set: int
    # one term per participating user: (user, point, superscript)
    terms: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class DeliveryPlan:
    demands: tuple[int, ...]
    equations: tuple[Equation, ...]

    @property
    def delta(self) -> int:
        return len(self.equations)


def expected_delta(scheme: CachingScheme) -> int:
    """Closed-form equation count numPoints * (q-1) * z * n / alpha."""
    return (scheme.num_points * (scheme.q - 1) * scheme.z * scheme.n
            // scheme.alpha)


def _check_demands(demands: Sequence[int], num_users: int) -> tuple[int, ...]:
    if len(demands) != num_users:
        raise IncompleteDemands(f"need {num_users} demands, got {len(demands)}")
    out = []
    for u, dv in enumerate(demands):
        if not isinstance(dv, int) or dv < 0:
            raise IncompleteDemands(f"user {u} has invalid demand {dv!r}")
        out.append(dv)
    return tuple(out)


def generate_delivery(scheme: CachingScheme, graph: RecoverySetGraph,
                      demands: Sequence[int]) -> DeliveryPlan:
    """Enumerate all equations of the one-shot delivery scheme.

    Within a recovery set, every choice of one block per class is visited in
    lexicographic order; the leave-one-out intersections minus the common
    intersection give each participant's served points, paired rank by rank.
    """
    demands = _check_demands(demands, scheme.num_users)
    if (graph.n, graph.alpha) != (scheme.n, scheme.alpha):
        raise ShapeMismatch("graph does not match scheme parameters")
    d = scheme.design
    q = scheme.q
    masks = [[_mask(d.classes[i][l]) for l in range(q)] for i in range(d.n)]
    equations: list[Equation] = []
    for a, classes in enumerate(graph.sets):
        supers = [graph.labels[(i, a)] for i in classes]
        for lvec in itertools.product(range(q), repeat=len(classes)):
            chosen = [masks[i][l] for i, l in zip(classes, lvec)]
            # leave-one-out intersections via prefix/suffix products
            m = len(chosen)
            prefix = [0] * (m + 1)
            suffix = [0] * (m + 1)
            prefix[0] = suffix[m] = ~0
            for idx in range(m):
                prefix[idx + 1] = prefix[idx] & chosen[idx]
            for idx in range(m - 1, -1, -1):
                suffix[idx] = suffix[idx + 1] & chosen[idx]
            total = prefix[m]
            served = [_bits((prefix[idx] & suffix[idx + 1]) & ~total)
                      for idx in range(m)]
            count = len(served[0])
            if any(len(sv) != count for sv in served):  # pragma: no cover
                raise DecodeFailure("unequal served-point counts within a tuple")
            for rank in range(count):
                terms = tuple((cls * q + l, served[idx][rank], supers[idx])
                              for idx, (cls, l) in enumerate(zip(classes, lvec)))
                equations.append(Equation(a, terms))
    return DeliveryPlan(demands, tuple(equations))


def _mask(points: Sequence[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def render_equation(scheme: CachingScheme, eq: Equation) -> str:
    """Human-readable form: terms W^s_{dB,t} joined by XOR symbols, where B
    names the user's block (digits concatenated for designs with at most 10
    points, comma-separated otherwise)."""
    parts = []
    for user, point, sup in eq.terms:
        block = scheme.user_block(user)
        if scheme.num_points <= 10:
            label = "".join(str(x) for x in block)
        else:
            label = ",".join(str(x) for x in block)
        parts.append(f"W^{sup}_{{d{label},{point}}}")
    return " ⊕ ".join(parts)


# ---------------------------------------------------------------------------
# byte-exact simulation
# ---------------------------------------------------------------------------

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


def byte_stream(seed: int, count: int) -> bytes:
    """Deterministic test payload: a 64-bit linear congruential generator
    (state <- state * 6364136223846793005 + 1442695040888963407 mod 2^64)
    emitting 8 little-endian bytes per step."""
    state = seed & _LCG_MASK
    out = bytearray()
    while len(out) < count:
        state = (state * _LCG_MULT + _LCG_INC) & _LCG_MASK
        out += state.to_bytes(8, "little")
    return bytes(out[:count])


@dataclass(frozen=True)
class UserOutcome:
    user: int
    demanded: int
    recovered_count: int
    complete: bool  # recovered exactly the missing subfiles
    exact: bool     # every recovered byte string matched the source file


@dataclass(frozen=True)
class SimulationReport:
    num_users: int
    num_files: int
    subfile_bytes: int
    f_s: int
    delta: int
    rate: Fraction
    load_bytes: int
    seed: int
    users: tuple[UserOutcome, ...]

    @property
    def all_ok(self) -> bool:
        return all(u.complete and u.exact for u in self.users)


def _simulate_core(caches: Sequence[frozenset[int]],
                   equations: Sequence[Sequence[tuple[int, int]]],
                   demands: Sequence[int], num_files: int, f_s: int,
                   subfile_bytes: int, seed: int) -> SimulationReport:
    """Shared engine: users hold cached column sets, each equation lists
    (user, column) pairs, the payload is the XOR of the demanded subfiles."""
    num_users = len(caches)
    demands = _check_demands(demands, num_users)
    if any(dv >= num_files for dv in demands):
        raise IncompleteDemands(f"demands exceed file count {num_files}")
    stream = byte_stream(seed, num_files * f_s * subfile_bytes)
    sub = subfile_bytes

    def chunk(file_idx: int, col: int) -> int:
        off = (file_idx * f_s + col) * sub
        return int.from_bytes(stream[off:off + sub], "little")

    recovered: list[set[int]] = [set() for _ in range(num_users)]
    exact = [True] * num_users
    for terms in equations:
        payload = 0
        for user, col in terms:
            payload ^= chunk(demands[user], col)
        for user, col in terms:
            value = payload
            for other, other_col in terms:
                if other == user:
                    continue
                if other_col not in caches[user]:
                    raise DecodeFailure(
                        f"user {user} cannot cancel column {other_col}")
                value ^= chunk(demands[other], other_col)
            if value != chunk(demands[user], col):
                exact[user] = False
            recovered[user].add(col)
    all_cols = frozenset(range(f_s))
    outcomes = []
    for u in range(num_users):
        missing = all_cols - caches[u]
        outcomes.append(UserOutcome(u, demands[u], len(recovered[u]),
                                    recovered[u] == missing, exact[u]))
    return SimulationReport(num_users, num_files, sub, f_s, len(equations),
                            Fraction(len(equations), f_s),
                            len(equations) * sub, seed, tuple(outcomes))


def simulate(scheme: CachingScheme, plan: DeliveryPlan, num_files: int,
             subfile_bytes: int = 16, seed: int = 0) -> SimulationReport:
    """Run the broadcast byte-exactly and check every user decodes every
    missing subfile of its demanded file."""
    caches = [scheme.cache_cols(u) for u in range(scheme.num_users)]
    equations = [[(user, scheme.subfile_col(t, s)) for user, t, s in eq.terms]
                 for eq in plan.equations]
    return _simulate_core(caches, equations, plan.demands, num_files,
                          scheme.f_s, subfile_bytes, seed)


# ---------------------------------------------------------------------------
# equation-subfile matrices and transposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EqSubfileMatrix:
    """Delta x F_s array; entry (i, j) is the 1-based user index recovering
    subfile j in equation i, or 0."""

    num_users: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def transpose(self) -> "EqSubfileMatrix":
        flipped = tuple(tuple(self.entries[i][j] for i in range(self.rows))
                        for j in range(self.cols))
        return EqSubfileMatrix(self.num_users, self.cols, self.rows, flipped)


def equation_subfile_matrix(scheme: CachingScheme,
                            plan: DeliveryPlan) -> EqSubfileMatrix:
    rows = []
    for eq in plan.equations:
        row = [0] * scheme.f_s
        for user, point, sup in eq.terms:
            col = scheme.subfile_col(point, sup)
            if row[col]:
                raise Lemma4Violated(
                    f"two users recover subfile column {col} in one equation")
            row[col] = user + 1
        rows.append(tuple(row))
    return EqSubfileMatrix(scheme.num_users, len(rows), scheme.f_s, tuple(rows))


@dataclass(frozen=True)
class Lemma4Report:
    ok: bool
    violations: tuple[str, ...]


def verify_lemma4(m: EqSubfileMatrix) -> Lemma4Report:
    """The three validity conditions: no repeated user within a column,
    none within a row, and any two occurrences of one user sit on a zero
    'rectangle' (the swapped positions are empty)."""
    violations = []
    for j in range(m.cols):
        seen: dict[int, int] = {}
        for i in range(m.rows):
            v = m.entries[i][j]
            if v:
                if v in seen:
                    violations.append(
                        f"user {v} appears twice in column {j} (rows {seen[v]}, {i})")
                seen[v] = i
    for i, row in enumerate(m.entries):
        nz = [v for v in row if v]
        if len(nz) != len(set(nz)):
            violations.append(f"row {i} repeats a user")
    occ: dict[int, list[tuple[int, int]]] = {}
    for i, row in enumerate(m.entries):
        for j, v in enumerate(row):
            if v:
                occ.setdefault(v, []).append((i, j))
    for v, spots in occ.items():
        for (i1, j1), (i2, j2) in itertools.combinations(spots, 2):
            if j1 == j2 or i1 == i2:
                continue  # already reported above
            if m.entries[i1][j2] or m.entries[i2][j1]:
                violations.append(
                    f"user {v} at ({i1},{j1}) and ({i2},{j2}) lacks zero corners")
    return Lemma4Report(not violations, tuple(violations))


@dataclass(frozen=True)
class MatrixScheme:
    """Caching scheme read off an equation-subfile matrix: subfiles are the
    columns, user t caches column j iff t never appears in it, and each row
    is one delivery equation."""

    num_users: int
    f_s: int
    caches: tuple[frozenset[int], ...]
    equations: tuple[tuple[tuple[int, int], ...], ...]  # (user, column) pairs

    @property
    def delta(self) -> int:
        return len(self.equations)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.delta, self.f_s)

    def cache_fraction(self, u: int) -> Fraction:
        return Fraction(len(self.caches[u]), self.f_s)


def scheme_from_eq_subfile(m: EqSubfileMatrix) -> MatrixScheme:
    report = verify_lemma4(m)
    if not report.ok:
        raise Lemma4Violated("; ".join(report.violations[:3]))
    caches = []
    present = [set() for _ in range(m.num_users)]
    for row in m.entries:
        for j, v in enumerate(row):
            if v:
                present[v - 1].add(j)
    for u in range(m.num_users):
        caches.append(frozenset(j for j in range(m.cols) if j not in present[u]))
    equations = []
    for row in m.entries:
        equations.append(tuple((v - 1, j) for j, v in enumerate(row) if v))
    return MatrixScheme(m.num_users, m.cols, tuple(caches), tuple(equations))


def simulate_matrix(ms: MatrixScheme, demands: Sequence[int], num_files: int,
                    subfile_bytes: int = 16, seed: int = 0) -> SimulationReport:
    return _simulate_core(ms.caches, ms.equations, demands, num_files,
                          ms.f_s, subfile_bytes, seed)


# ---------------------------------------------------------------------------
# operating-point metrics
# ---------------------------------------------------------------------------


def code_point_metrics(n: int, q: int, alpha: int, num_points: int,
                       transposed: bool = False) -> dict:
    """Exact corner-point metrics without materializing anything.

    Base point: K = n*q users, M/N = 1/q, F_s = numPoints*z, R = n(q-1)/alpha,
    gain alpha.  Transposed point: M/N = 1 - alpha/(nq), F_s = delta of the
    base scheme, R = alpha/((q-1) n), gain (q-1) n.
    """
    z = least_z(n, alpha)
    big_k = n * q
    if transposed:
        m_over_n = 1 - Fraction(alpha, big_k)
        f_s = num_points * (q - 1) * z * n // alpha
        rate = Fraction(alpha, (q - 1) * n)
    else:
        m_over_n = Fraction(1, q)
        f_s = num_points * z
        rate = Fraction(n * (q - 1), alpha)
    gain = big_k * (1 - m_over_n) / rate
    return {"K": big_k, "M_over_N": m_over_n, "F_s": f_s, "R": rate,
            "gain": gain, "z": z}


def scheme_metrics(scheme: Union[CachingScheme, MatrixScheme],
                   transposed: bool = False) -> dict:
    """Corner metrics of a placed scheme, or the stored metrics of a
    matrix-derived scheme (whose cache fractions may vary per user)."""
    if isinstance(scheme, CachingScheme):
        return code_point_metrics(scheme.n, scheme.q, scheme.alpha,
                                  scheme.num_points, transposed)
    if transposed:
        raise ShapeMismatch("matrix schemes carry no further transposed point")
    fractions = {scheme.cache_fraction(u) for u in range(scheme.num_users)}
    m_over_n = fractions.pop() if len(fractions) == 1 else None
    gain = None
    if m_over_n is not None and scheme.rate:
        gain = scheme.num_users * (1 - m_over_n) / scheme.rate
    return {"K": scheme.num_users, "M_over_N": m_over_n, "F_s": scheme.f_s,
            "R": scheme.rate, "gain": gain, "z": None}
