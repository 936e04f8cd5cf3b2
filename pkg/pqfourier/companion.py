"""
Companion matrices, matrix connections and their formal reduction.

A MatrixConnection d/dx - C(x) with x = z^r is pulled back to z, sheared by
diag(z^i) and gauged order by order to d/dz - diag(gamma). The gamma are stored
in w = 1/z.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .connection import (
    ConnectionAtInfinity,
    ExponentialFactor,
    LTComponent,
    LTObject,
    canonicalize,
    monomial_connection,
    objects_iso,
    orbit_collect,
    to_factor,
)
from .cyclotomic import ZERO, Cyclotomic, cyclotomic_field, lcm
from .errors import (
    EigenvaluesNotDistinctError,
    EvenPError,
    NonCoprimeDegreesError,
    ResonantResidueError,
    RootNotInFieldError,
)
from .fourier import fourier_object
from .models import Convention, DualityReport
from .series import PuiseuxSeries, format_series, monomial, series_to_dict, twist, zero

logger = logging.getLogger(__name__)

Entries = List[List[Cyclotomic]]


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """A square matrix of series in one variable."""

    entries: Tuple[Tuple[PuiseuxSeries, ...], ...]
    var: str = "x"

    def __post_init__(self):
        """Validate shape and variables."""
        rows = tuple(tuple(e.relabel(self.var) for e in row) for row in self.entries)
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("Matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> PuiseuxSeries:
        i, j = index
        return self.entries[i][j]

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(-e for e in row) for row in self.entries), self.var)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.var == other.var and self.size == other.size and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def __hash__(self) -> int:
        return hash((self.var, self.size))

    def rows(self) -> List[List[str]]:
        return [[format_series(e) for e in row] for row in self.entries]

    def to_dict(self) -> Dict[str, Any]:
        return {"variable": self.var, "size": self.size, "rows": self.rows()}

    def __str__(self) -> str:
        width = max((len(t) for row in self.rows() for t in row), default=1)
        return "\n".join("[ " + "  ".join(t.rjust(width) for t in row) + " ]"
                         for row in self.rows())


def _check_coprime(p: int, q: int):
    if p < 1 or q < 1:
        raise ValueError("Degrees must be positive")
    if gcd(p, q) != 1:
        raise NonCoprimeDegreesError(f"Degrees {p} and {q} are not coprime")


def companion_matrix(p: int, q: int) -> PolyMatrix:
    """
    M(p, q): multiplication by z^q on the basis 1, z, ..., z^(p-1) over x = z^p.

    Row i carries x^a in column b where q + i = p*a + b.
    """
    _check_coprime(p, q)
    rows = []
    for i in range(p):
        a, b = divmod(q + i, p)
        rows.append(tuple(monomial(a, 1, "x") if j == b else zero("x") for j in range(p)))
    return PolyMatrix(tuple(rows), "x")


def gauge_B(p: int, q: int) -> PolyMatrix:
    """B_ij = M_ij(z^p) z^(j-i) - i delta_ij / (p z^p)."""
    M = companion_matrix(p, q)
    rows = []
    for i in range(p):
        row = []
        for j in range(p):
            entry = zero("z")
            for k, c in M[i, j].terms.items():
                entry = entry + monomial(p * k + j - i, c, "z")
            if i == j and i:
                entry = entry + monomial(-p, Fraction(-i, p), "z")
            row.append(entry)
        rows.append(tuple(row))
    return PolyMatrix(tuple(rows), "z")


@dataclass(frozen=True)
class MatrixConnection:
    """d/dx - C(x) with x = z^ramification."""

    C: PolyMatrix
    ramification: int = 1

    def __post_init__(self):
        """Validate the connection matrix."""
        if self.ramification < 1:
            raise ValueError("Ramification must be at least 1")
        for row in self.C.entries:
            for e in row:
                if not e.is_exact or any(k % e.ramification for k in e.terms):
                    raise ValueError("Connection entries must be exact Laurent polynomials")

    @property
    def size(self) -> int:
        return self.C.size

    @property
    def var(self) -> str:
        return self.C.var

    def to_dict(self) -> Dict[str, Any]:
        return {"ramification": self.ramification, "C": self.C.to_dict()}

    def __str__(self) -> str:
        return f"d/d{self.var} - C({self.var}), {self.var} = z^{self.ramification}\n{self.C}"


def nabla(p: int, q: int) -> MatrixConnection:
    """d/dx - M(p, q)(x) with x = z^p."""
    return MatrixConnection(companion_matrix(p, q), p)


def nabla_hat(p: int, q: int) -> MatrixConnection:
    """d/dx + M(q, p)(x) with x = z^q."""
    return MatrixConnection(-companion_matrix(q, p), q)


# Linear algebra over cyclotomic fields

def _zeros(n: int) -> Entries:
    return [[ZERO] * n for _ in range(n)]


def _is_zero(m: Entries) -> bool:
    return not any(x for row in m for x in row)


def _is_diagonal(m: Entries) -> bool:
    return not any(x for i, row in enumerate(m) for j, x in enumerate(row) if i != j)


def _domain(order: int):
    """QQ, or the sympy field Q(mu_order)."""
    return QQ if order == 1 else cyclotomic_field(order)


def _to_domain(c: Cyclotomic, order: int):
    if order == 1:
        f = c.as_fraction()
        return QQ(f.numerator, f.denominator)
    return c.in_field(order)


def _from_domain(x, order: int) -> Cyclotomic:
    if order == 1:
        return Cyclotomic.rational(Fraction(int(x.numerator), int(x.denominator)))
    return Cyclotomic.from_element(order, x)


def _matrix(rows: Entries, order: int) -> DomainMatrix:
    n = len(rows)
    return DomainMatrix([[_to_domain(c, order) for c in row] for row in rows],
                        (n, n), _domain(order))


def _common_order(numbers) -> int:
    order = 1
    for c in numbers:
        order = lcm(order, c.order)
    return order


def _eigenvector(m: DomainMatrix) -> list:
    """One basis vector of the kernel of m."""
    kernel = m.nullspace()
    n = m.shape[0]
    if kernel.shape[0] == 0:
        raise ValueError("Matrix has trivial kernel")
    return [kernel[0, j].element for j in range(n)]


def leading_eigenvalues(a0: Entries) -> List[Cyclotomic]:
    """
    Exact eigenvalues of a leading matrix with characteristic polynomial
    lam^n - c, c a nonzero rational.
    """
    n = len(a0)
    if any(not x.is_rational for row in a0 for x in row):
        raise RootNotInFieldError("Leading matrix must have rational entries")
    coeffs = [Fraction(int(c.numerator), int(c.denominator))
              for c in _matrix(a0, 1).charpoly()]
    if any(coeffs[1:-1]):
        raise RootNotInFieldError(
            f"Characteristic polynomial with coefficients {[str(c) for c in coeffs]} "
            f"is not lam^{n} - c")
    c = -coeffs[-1] if n else Fraction(0)
    if c == 0:
        raise EigenvaluesNotDistinctError("Leading matrix is nilpotent")
    root = Cyclotomic.rational(c).nth_root(n)
    values = [root * Cyclotomic.root_of_unity(n, j) for j in range(n)]
    logger.debug("leading eigenvalues: %s", ", ".join(str(v) for v in values))
    return values


@dataclass
class FormalReduction:
    """
    Outcome of the order-by-order diagonalization.

    coefficients[k] is the sheared matrix at z^(leading - k); gauge[m] is the
    matrix at z^(-m) of the accumulated gauge; diagonal[k] is diag(gamma) at
    z^(leading - k). All matrices share one domain.
    """

    size: int
    leading: int
    depth: int
    coefficients: List[DomainMatrix]
    gauge: List[DomainMatrix]
    diagonal: List[DomainMatrix]
    exact: bool = False
    exponents: List[PuiseuxSeries] = field(default_factory=list)

    def residual_orders(self) -> List[int]:
        """Orders k where A G - G' - G diag(gamma) has a nonzero coefficient."""
        if self.exact:
            return []
        n = self.size
        K = self.gauge[0].domain
        bad = []
        for k in range(self.leading + self.depth + 1):
            total = DomainMatrix.zeros((n, n), K)
            for j in range(min(k, len(self.coefficients) - 1) + 1):
                if k - j < len(self.gauge):
                    total = total + self.coefficients[j] * self.gauge[k - j]
            m = k - self.leading - 1
            if 1 <= m < len(self.gauge):
                total = total + self.gauge[m].scalarmul(K.convert(m))
            for j in range(min(k, len(self.gauge) - 1) + 1):
                total = total - self.gauge[j] * self.diagonal[k - j]
            if not total.is_zero_matrix:
                bad.append(k)
        return bad


def _pulled_back(mc: MatrixConnection) -> Dict[int, Entries]:
    """z-exponent -> matrix of r z^(r-1) C(z^r), sheared by diag(z^i) when r > 1."""
    n, r = mc.size, mc.ramification
    out: Dict[int, Entries] = {}

    def put(e: int, i: int, j: int, c: Cyclotomic):
        m = out.setdefault(e, _zeros(n))
        m[i][j] = m[i][j] + c

    for i in range(n):
        for j in range(n):
            entry = mc.C[i, j]
            for k, c in entry.terms.items():
                e = (r * k) // entry.ramification + r - 1
                put(e + (j - i if r > 1 else 0), i, j, c * r)
    if r > 1:
        for i in range(1, n):
            put(-1, i, i, Cyclotomic.rational(-i))
    return {e: m for e, m in out.items() if not _is_zero(m)}


def _exact_reduction(n: int, order: int, leading: int,
                     exponents: List[PuiseuxSeries]) -> FormalReduction:
    identity = DomainMatrix.eye(n, _domain(order))
    return FormalReduction(n, leading, 0, [], [identity], [], True, exponents)


def formal_reduction(mc: MatrixConnection, depth: Optional[int] = None) -> FormalReduction:
    """
    Diagonalize the pulled-back connection up to z^(-depth) below its leading order.

    A leading order of -1 is a regular singular point: the residue eigenvalues
    are the exponents and the gauge clears every lower term unless two of them
    differ by an integer where an obstruction appears. A leading order below
    -1 is holomorphic and has only zero exponents.

    Args:
        mc: Matrix connection whose sheared leading matrix has distinct eigenvalues
        depth: Orders below the leading one to determine

    Returns:
        FormalReduction whose exponents are the gamma series in w = 1/z
    """
    n = mc.size
    pulled = _pulled_back(mc)
    if not pulled:
        return _exact_reduction(n, 1, 0, [zero("w") for _ in range(n)])

    if all(_is_diagonal(m) for m in pulled.values()):
        exps = [PuiseuxSeries({-e: m[a][a] for e, m in pulled.items()}, 1, None, "w")
                for a in range(n)]
        return _exact_reduction(n, 1, max(pulled), exps)

    leading = max(pulled)
    if leading < -1:
        logger.debug("connection is holomorphic at infinity with leading order %d", leading)
        return _exact_reduction(n, 1, leading, [zero("w") for _ in range(n)])

    depth = depth if depth is not None else leading + 5
    K = leading + depth
    raw = [pulled.get(leading - k, _zeros(n)) for k in range(K + 1)]

    a0 = raw[0]
    values = [a0[i][i] for i in range(n)] if _is_diagonal(a0) else leading_eigenvalues(a0)
    for a in range(n):
        for b in range(a + 1, n):
            if values[a] == values[b]:
                raise EigenvaluesNotDistinctError(
                    f"Leading eigenvalue {values[a]} is repeated")

    order = _common_order([c for m in raw for row in m for c in row] + values)
    dom = _domain(order)
    coeffs = [_matrix(m, order) for m in raw]
    lam = [_to_domain(v, order) for v in values]
    if _is_diagonal(a0):
        S = S_inv = DomainMatrix.eye(n, dom)
    else:
        identity = DomainMatrix.eye(n, dom)
        columns = [_eigenvector(coeffs[0] - identity.scalarmul(v)) for v in lam]
        S = DomainMatrix([[columns[j][i] for j in range(n)] for i in range(n)], (n, n), dom)
        S_inv = S.inv()

    work = [c if c.is_zero_matrix else S_inv * c * S for c in coeffs]
    T: List[DomainMatrix] = [DomainMatrix.eye(n, dom)]
    D: List[DomainMatrix] = [DomainMatrix.diag(lam, dom)]
    for k in range(1, K + 1):
        rhs = work[k]
        for j in range(1, k):
            rhs = rhs + work[j] * T[k - j] - T[j] * D[k - j]
        m = k - leading - 1
        # leading -1 puts the derivative term on T[k] itself
        shift = dom.convert(k) if m == k else dom.zero
        if 1 <= m < k:
            rhs = rhs + T[m].scalarmul(dom.convert(m))
        t_k = [[dom.zero] * n for _ in range(n)]
        gamma = [dom.zero] * n
        for a in range(n):
            for b in range(n):
                entry = rhs[a, b].element
                if a == b:
                    if m == k:
                        t_k[a][a] = -entry / shift
                    else:
                        gamma[a] = entry
                    continue
                gap = lam[b] - lam[a] - shift
                if not gap:
                    if entry:
                        raise ResonantResidueError(
                            f"Residue eigenvalues {values[a]} and {values[b]} differ by {k}")
                    continue
                t_k[a][b] = entry / gap
        D.append(DomainMatrix.diag(gamma, dom))
        T.append(DomainMatrix(t_k, (n, n), dom))

    gauge = [S * t for t in T]
    exps = [PuiseuxSeries({k - leading: _from_domain(D[k][a, a].element, order)
                           for k in range(K + 1)}, 1, K - leading + 1, "w")
            for a in range(n)]
    logger.debug("formal reduction of size %d to depth %d", n, depth)
    return FormalReduction(n, leading, depth, coeffs, gauge, D, False, exps)


def diagonalize(mc: MatrixConnection, depth: Optional[int] = None) -> List[PuiseuxSeries]:
    """The diagonal exponents gamma_1..gamma_n in w = 1/z."""
    return formal_reduction(mc, depth).exponents


def _scalar_connection(gamma: PuiseuxSeries, r: int, convention: Convention) -> ConnectionAtInfinity:
    # d/dz - gamma = r z^(r-1) (d/dx - gamma w^(r-1)/r), and xi = 1/x = w^r.
    eta = gamma * monomial(r - 1, Fraction(1, r), "w")
    f_over_x = PuiseuxSeries(eta.terms, r, eta.truncation, "ξ")
    return ConnectionAtInfinity(f_over_x * convention.sign)


def object_of(mc: MatrixConnection, convention: Convention = Convention.DUAL,
              depth: Optional[int] = None) -> LTObject:
    """
    Levelt-Turrittin object of a matrix connection.

    Entries forming one twist orbit are collected into a single component;
    anything else stays a separate component.
    """
    return _object_of_reduction(formal_reduction(mc, depth), mc.ramification, convention)


def _object_of_reduction(reduction: FormalReduction, r: int,
                         convention: Convention) -> LTObject:
    convention = Convention(convention)
    factors = [to_factor(_scalar_connection(g, r, convention)) for g in reduction.exponents]
    components: List[LTComponent] = []
    remaining = list(factors)
    while remaining:
        base = remaining.pop(0)
        orbit = [base.f]
        for k in range(1, base.ramification):
            image = canonicalize(ExponentialFactor(twist(base.f, k))).f
            match = next((i for i, e in enumerate(remaining) if e.f == image), None)
            if match is None:
                break
            orbit.append(remaining.pop(match).f)
        if len(orbit) == base.ramification:
            components.append(LTComponent(orbit_collect(orbit)))
        else:
            logger.warning("exponents of %s do not form a full twist orbit", base)
            remaining = [ExponentialFactor(f) for f in orbit[1:]] + remaining
            components.append(LTComponent(base))
    return LTObject(tuple(components))


def check_liu_schwarz(p: int, q: int, convention: Convention = Convention.DUAL,
                      depth: Optional[int] = None) -> bool:
    """Compare object_of(nabla(p, q)) with the monomial Kac-Schwarz connection."""
    _check_coprime(p, q)
    lhs = object_of(nabla(p, q), convention, depth)
    rhs = LTObject.of(to_factor(monomial_connection(p, q)))
    holds, _ = objects_iso(lhs, rhs)
    return holds


def check_pq_duality(p: int, q: int, force: bool = False,
                     convention: Convention = Convention.DUAL,
                     depth: Optional[int] = None) -> DualityReport:
    """
    Compare the Fourier transform of nabla_hat(q, p) with nabla(q, p).

    Requires p odd unless force is set. The report carries the deepest
    reduction depth used on either side.
    """
    _check_coprime(p, q)
    notes = []
    if p % 2 == 0:
        if not force:
            raise EvenPError(f"p = {p} is even; the duality is stated for odd p")
        notes.append(f"p = {p} is even; computed without the odd-p hypothesis")
    hat_reduction = formal_reduction(nabla_hat(q, p), depth)
    reduction = formal_reduction(nabla(q, p), depth)
    lhs = fourier_object(_object_of_reduction(hat_reduction, p, convention))
    rhs = _object_of_reduction(reduction, q, convention)
    holds, twists = objects_iso(lhs, rhs)
    logger.info("p-q duality for (%d, %d): %s", p, q, holds)
    return DualityReport(holds=holds, lhs=lhs, rhs=rhs, twists=twists,
                         precision=max(hat_reduction.depth, reduction.depth), notes=notes)


def exponents_to_dict(exponents: Sequence[PuiseuxSeries]) -> List[Dict[str, Any]]:
    """JSON form of gamma series, read back in z."""
    return [series_to_dict(g, reciprocal=True) for g in exponents]
