"""Integer sequences with the square-divisibility property x_n^2 | x_{n+1}.

A sequence of this kind is determined by its factor sequence (z_n) via

    x_1 = 1,   x_{k+1} = z_{k+1} * x_k^2,

so x_n is the product of z_j^(2^(n-j)) for j = 2..n. The module builds such
sequences from explicit factors, from second- and third-order nonlinear
recurrences whose all-ones initial data force integrality, and from
power-sum exponent lists; it also inverts a sequence back to its factors
and computes exact partial sums of the reciprocals.

Terms grow doubly exponentially, so every generator charges an explicit
bit budget instead of letting memory blow up silently.
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .exceptions import (
    BitBudgetExceeded,
    DivisibilityViolation,
    IdentityViolation,
    InexactDivision,
    InsufficientFactors,
    InvalidSpec,
    NegativeGap,
)

DEFAULT_SINGLE_BITS = 1 << 25
DEFAULT_TOTAL_BITS = 1 << 26


@dataclass(frozen=True)
class BitBudget:
    """Caps on the bit size of any single term and on the cumulative size."""

    single: int = DEFAULT_SINGLE_BITS
    total: int = DEFAULT_TOTAL_BITS

    @classmethod
    def from_total(cls, total: int) -> "BitBudget":
        return cls(single=max(1, total >> 1), total=total)


class BudgetMeter:
    """Mutable accumulator charging generated terms against a BitBudget."""

    def __init__(self, budget: BitBudget | None = None):
        self.budget = budget or BitBudget()
        self.total_bits = 0

    def charge(self, value: int, what: str = "term"):
        bits = value.bit_length()
        if bits > self.budget.single:
            raise BitBudgetExceeded(bits, self.budget.single, what)
        self.total_bits += bits
        if self.total_bits > self.budget.total:
            raise BitBudgetExceeded(self.total_bits, self.budget.total, "cumulative size")


class SeriesClass(enum.Enum):
    GENERIC = "generic"
    Z2_EQUALS_2 = "z2_equals_2"
    ONES_TAIL = "ones_tail"
    MIXED = "mixed"


@dataclass(frozen=True)
class FactorSequence:
    """The factors z_2, z_3, ... defining a square-divisibility sequence.

    ``tail_ones`` marks a source that continues with z_j = 1 forever past the
    explicit entries, which is how the power-sum series u^(-1) + u^(-2) +
    u^(-4) + ... arise (all factors 1 from z_3 on).
    """

    z: tuple[int, ...]
    tail_ones: bool = False

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if not self.z:
            raise ValueError("need at least the first factor z_2")
        if self.z[0] < 2:
            raise ValueError(f"z_2 must be >= 2, got {self.z[0]}")
        for j, v in enumerate(self.z[1:], start=3):
            if v < 1:
                raise ValueError(f"z_{j} must be positive, got {v}")

    @property
    def series_class(self) -> SeriesClass:
        rest = self.z[1:]
        if self.tail_ones:
            if all(v == 1 for v in rest):
                return SeriesClass.ONES_TAIL
            return SeriesClass.MIXED
        if all(v >= 2 for v in rest):
            return SeriesClass.GENERIC if self.z[0] >= 3 else SeriesClass.Z2_EQUALS_2
        if rest and all(v == 1 for v in rest):
            return SeriesClass.ONES_TAIL
        return SeriesClass.MIXED

    @property
    def u(self) -> int:
        """Base of a ones-tail source (its z_2)."""
        return self.z[0]

    def factor(self, j: int) -> int | None:
        """z_j for j >= 2, or None when the finite list is exhausted."""
        if j < 2:
            raise IndexError("factors start at j = 2")
        idx = j - 2
        if idx < len(self.z):
            return self.z[idx]
        return 1 if self.tail_ones else None

    def known_count(self) -> int | None:
        """Number of available factors; None means unbounded."""
        return None if self.tail_ones else len(self.z)


def ones_tail(u: int) -> FactorSequence:
    """The unbounded source z = (u, 1, 1, ...), i.e. x_n = u^(2^(n-2))."""
    if u < 2:
        raise ValueError("u must be >= 2")
    return FactorSequence((u,), tail_ones=True)


@dataclass(frozen=True)
class EngelSequence:
    """Terms x_1 = 1 < x_2 <= x_3 ... with x_n^2 | x_{n+1}, plus the derived
    quotients y_1 = x_1, y_{n+1} = x_{n+1} / x_n."""

    x: tuple[int, ...]
    y: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        xs = tuple(int(v) for v in self.x)
        object.__setattr__(self, "x", xs)
        if not xs or xs[0] != 1:
            raise ValueError("sequence must start with x_1 = 1")
        ys = [1]
        for i in range(1, len(xs)):
            if xs[i] <= 0:
                raise ValueError(f"non-positive term at position {i + 1}")
            if xs[i] % (xs[i - 1] ** 2):
                raise DivisibilityViolation(i + 1)
            ys.append(xs[i] // xs[i - 1])
        object.__setattr__(self, "y", tuple(ys))

    def __len__(self):
        return len(self.x)


def from_factors(zs: FactorSequence, n: int, budget: BitBudget | None = None) -> EngelSequence:
    """Build x_1..x_n from factors: x_1 = 1, x_{k+1} = z_{k+1} * x_k^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    meter = BudgetMeter(budget)
    xs = [1]
    for k in range(2, n + 1):
        z = zs.factor(k)
        if z is None:
            raise InsufficientFactors(f"need z_{k} but only {zs.known_count()} factors given")
        nxt = z * xs[-1] ** 2
        meter.charge(nxt, f"x_{k}")
        xs.append(nxt)
    return EngelSequence(tuple(xs))


def strip_leading_ones(raw: Sequence[int]) -> tuple[int, ...]:
    """Normalize raw recurrence output to the x_1 = 1 indexing.

    Recurrence initial data contribute several leading 1s; all but one are
    dropped so the two numbering schemes meet deterministically.
    """
    terms = [int(v) for v in raw]
    if not terms or terms[0] != 1:
        raise ValueError("sequence must start with 1")
    i = 0
    while i < len(terms) and terms[i] == 1:
        i += 1
    return (1,) + tuple(terms[i:])


def factors_from_sequence(raw: Sequence[int]) -> FactorSequence:
    """Invert a sequence to its factors z_n = x_n / x_{n-1}^2 exactly.

    Leading 1s beyond a single one are stripped first. Raises
    DivisibilityViolation at the first index where the square fails to
    divide.
    """
    xs = strip_leading_ones(raw)
    if len(xs) < 2:
        raise ValueError("need at least one term beyond the leading 1")
    z = []
    for i in range(1, len(xs)):
        q, r = divmod(xs[i], xs[i - 1] ** 2)
        if r:
            raise DivisibilityViolation(i + 1)
        z.append(q)
    return FactorSequence(tuple(z))


# ---------------------------------------------------------------------------
# Recurrence specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondOrderSpec:
    """x_{n+2} x_n = x_{n+1}^d1 * G(x_{n+1}) with x_0 = x_1 = 1.

    G is a dense coefficient list, constant term first, so the integrality
    requirements (G(0) != 0, non-negative coefficients) are syntactic checks.
    G(1) >= 3 gives the generic family; G(1) = 2 forces G = x^d2 + 1, the
    degenerate family whose series has z_2 = 2.
    """

    d1: int
    g: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))

    def validate(self):
        if self.d1 < 3:
            raise InvalidSpec(f"d1 must be >= 3, got {self.d1}")
        if not self.g:
            raise InvalidSpec("G has no coefficients")
        if any(c < 0 for c in self.g):
            raise InvalidSpec("G must have non-negative coefficients")
        if self.g[0] == 0:
            raise InvalidSpec("G(0) must be nonzero")
        if len(self.g) > 1 and self.g[-1] == 0:
            raise InvalidSpec("leading coefficient of G is zero; drop trailing zeros")
        if self.g1 < 2:
            raise InvalidSpec(f"G(1) must be >= 2, got {self.g1}")
        return self

    @property
    def d2(self) -> int:
        return len(self.g) - 1

    @property
    def c(self) -> int:
        """Leading coefficient of G."""
        return self.g[-1]

    @property
    def g1(self) -> int:
        return sum(self.g)

    @property
    def degenerate(self) -> bool:
        """True for the z_2 = 2 family G = x^d2 + 1 (equivalently G(1) = 2)."""
        return self.g1 == 2

    def G(self, x: int) -> int:
        acc = 0
        for coeff in reversed(self.g):
            acc = acc * x + coeff
        return acc


@dataclass(frozen=True)
class ThirdOrderSpec:
    """X_{n+3} X_n = X_{n+1}^e1 * X_{n+2}^e2 * H(X_{n+1}, X_{n+2}),
    X_0 = X_1 = X_2 = 1.

    H is a sparse term list (i, j, coeff). It must not be divisible by
    either argument, i.e. some term has i = 0 and some term has j = 0.
    """

    e1: int
    e2: int
    h: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        terms = tuple(sorted((int(i), int(j), int(c)) for (i, j, c) in self.h))
        object.__setattr__(self, "h", terms)

    def validate(self):
        if self.e1 < 1:
            raise InvalidSpec(f"e1 must be >= 1, got {self.e1}")
        if self.e2 < 2:
            raise InvalidSpec(f"e2 must be >= 2, got {self.e2}")
        if not self.h:
            raise InvalidSpec("H has no terms")
        seen = set()
        for (i, j, coeff) in self.h:
            if i < 0 or j < 0:
                raise InvalidSpec("H exponents must be non-negative")
            if coeff <= 0:
                raise InvalidSpec("H terms must have positive coefficients")
            if (i, j) in seen:
                raise InvalidSpec(f"duplicate H term for exponents ({i},{j})")
            seen.add((i, j))
        if min(i for (i, _, _) in self.h) != 0 or min(j for (_, j, _) in self.h) != 0:
            raise InvalidSpec("H must not be divisible by either argument")
        if self.h11 < 2:
            raise InvalidSpec(f"H(1,1) must be >= 2, got {self.h11}")
        return self

    @property
    def h11(self) -> int:
        return sum(c for (_, _, c) in self.h)

    def H(self, x: int, y: int) -> int:
        return sum(c * x**i * y**j for (i, j, c) in self.h)

    def lift_parent(self) -> SecondOrderSpec | None:
        """Recover (d1, G) when this spec has the lifted shape
        e1 = e2 = d1 - 1, H(X, Y) = G(X*Y); None otherwise."""
        if self.e1 != self.e2:
            return None
        if any(i != j for (i, j, _) in self.h):
            return None
        degree = max(i for (i, _, _) in self.h)
        dense = [0] * (degree + 1)
        for (i, _, c) in self.h:
            dense[i] = c
        return SecondOrderSpec(self.e1 + 1, tuple(dense))


RecurrenceSpec = Union[SecondOrderSpec, ThirdOrderSpec]


def lift_spec(spec2: SecondOrderSpec) -> ThirdOrderSpec:
    """Lift x_{n+2} x_n = x_{n+1}^d1 G(x_{n+1}) to third order by the
    factorization x_n = X_n X_{n+1}:

        X_{n+3} X_n = (X_{n+1} X_{n+2})^(d1-1) * G(X_{n+1} X_{n+2}).

    The lifted sequence satisfies X_n * X_{n+1} = x_n for all n.
    """
    spec2.validate()
    terms = tuple((k, k, c) for k, c in enumerate(spec2.g) if c)
    return ThirdOrderSpec(spec2.d1 - 1, spec2.d1 - 1, terms).validate()


def generate_recurrence(
    spec: RecurrenceSpec,
    n: int,
    budget: BitBudget | None = None,
    validate: bool = True,
) -> list[int]:
    """First n terms of the recurrence, starting from the all-ones initial
    data (x_0 = x_1 = 1, or X_0 = X_1 = X_2 = 1).

    Every division is checked exact: the all-ones data make each term an
    integer for a valid spec, so an inexact division is a spec bug and
    raises InexactDivision rather than truncating.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if validate:
        spec.validate()
    meter = BudgetMeter(budget)
    if isinstance(spec, SecondOrderSpec):
        xs = [1, 1]
        while len(xs) < n:
            num = xs[-1] ** spec.d1 * spec.G(xs[-1])
            q, r = divmod(num, xs[-2])
            if r:
                raise InexactDivision(len(xs))
            meter.charge(q, f"x_{len(xs)}")
            xs.append(q)
        return xs[:n]
    xs = [1, 1, 1]
    while len(xs) < n:
        num = xs[-2] ** spec.e1 * xs[-1] ** spec.e2 * spec.H(xs[-2], xs[-1])
        q, r = divmod(num, xs[-3])
        if r:
            raise InexactDivision(len(xs))
        meter.charge(q, f"X_{len(xs)}")
        xs.append(q)
    return xs[:n]


def engel_from_spec(spec: RecurrenceSpec, n: int, budget: BitBudget | None = None) -> EngelSequence:
    """x_1..x_n in the Engel indexing (leading 1s collapsed to one).

    n counts Engel terms; the raw recurrence is generated just far enough.
    """
    lead = 2 if isinstance(spec, SecondOrderSpec) else 3
    raw = generate_recurrence(spec, n + lead - 1, budget)
    return EngelSequence(strip_leading_ones(raw)[: n])


# ---------------------------------------------------------------------------
# Partial sums
# ---------------------------------------------------------------------------


def closed_form_numerator(z: Sequence[int], n: int) -> int:
    """Numerator of S_n over the denominator x_n, evaluated term by term:

        sum_{j=1}^{n-1} prod_{k=2}^{j} z_k^(2^(n-k) - 2^(j-k))
                        * prod_{l=j+1}^{n} z_l^(2^(n-l))   + 1.

    ``z[0]`` is z_2. Independent of the naive summation path; partial_sum
    checks the two against each other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def zj(j: int) -> int:
        return int(z[j - 2])

    total = 1
    for j in range(1, n):
        term = 1
        for k in range(2, j + 1):
            term *= zj(k) ** (2 ** (n - k) - 2 ** (j - k))
        for l in range(j + 1, n + 1):
            term *= zj(l) ** (2 ** (n - l))
        total += term
    return total


def partial_sum(x: EngelSequence | Sequence[int], n: int, check_closed_form: bool = True) -> Fraction:
    """Exact S_n = sum_{j=1}^{n} 1/x_j.

    The reduced denominator equals x_n: the closed-form numerator is
    congruent to 1 modulo every prime dividing x_n. With
    ``check_closed_form`` the naive summation is cross-checked against the
    closed form, which shares no code with it.
    """
    xs = x.x if isinstance(x, EngelSequence) else tuple(int(v) for v in x)
    if not 1 <= n <= len(xs):
        raise ValueError(f"n must be in 1..{len(xs)}")
    naive = Fraction(0)
    for v in xs[:n]:
        naive += Fraction(1, v)
    if check_closed_form:
        if naive.denominator != xs[n - 1]:
            raise IdentityViolation(f"reduced denominator {naive.denominator} != x_{n}")
        z = []
        for i in range(1, n):
            q, r = divmod(xs[i], xs[i - 1] ** 2)
            if r:
                raise DivisibilityViolation(i + 1)
            z.append(q)
        if closed_form_numerator(z, n) != naive.numerator:
            raise IdentityViolation(f"closed-form numerator mismatch at n = {n}")
    return naive


# ---------------------------------------------------------------------------
# Power-sum (exponent list) import
# ---------------------------------------------------------------------------


def shallit_factors(u: int, c: Sequence[int]) -> FactorSequence:
    """Factors of the series 1 + sum_k u^(-c_k).

    Requires d_k = c_{k+1} - 2*c_k >= 0 for every k, in which case
    z_2 = u^(c_0) and z_j = u^(d_(j-3)) for j >= 3, and the partial sums
    satisfy S_n - 1 = sum_{k=0}^{n-2} u^(-c_k) exactly.
    """
    if u < 2:
        raise ValueError("u must be >= 2")
    cs = [int(v) for v in c]
    if not cs:
        raise ValueError("need at least one exponent")
    if any(v < 1 for v in cs):
        raise ValueError("exponents must be positive")
    gaps = []
    for k in range(len(cs) - 1):
        d = cs[k + 1] - 2 * cs[k]
        if d < 0:
            raise NegativeGap(f"d_{k} = c_{k + 1} - 2*c_{k} = {d} < 0")
        gaps.append(d)
    z = (u ** cs[0],) + tuple(u**d for d in gaps)
    return FactorSequence(z)


# ---------------------------------------------------------------------------
# Single-line spec file format
# ---------------------------------------------------------------------------


def spec_line(spec: RecurrenceSpec) -> str:
    """Serialize a spec as a single key=value line.

    Examples: ``order=2 d1=3 G=1,2`` and ``order=3 e1=2 e2=2 H=0,0,1;1,1,2``
    (G constant term first; H terms are i,j,coeff separated by ';').
    """
    if isinstance(spec, SecondOrderSpec):
        return f"order=2 d1={spec.d1} G={','.join(str(c) for c in spec.g)}"
    hs = ";".join(f"{i},{j},{c}" for (i, j, c) in spec.h)
    return f"order=3 e1={spec.e1} e2={spec.e2} H={hs}"


def parse_spec_line(line: str) -> RecurrenceSpec:
    """Inverse of spec_line."""
    fields = {}
    for token in line.split():
        key, eq, value = token.partition("=")
        if not eq:
            raise InvalidSpec(f"malformed token {token!r}")
        fields[key] = value
    try:
        order = int(fields.pop("order"))
    except KeyError:
        raise InvalidSpec("missing order=") from None
    if order == 2:
        try:
            d1 = int(fields.pop("d1"))
            g = tuple(int(v) for v in fields.pop("G").split(","))
        except KeyError as exc:
            raise InvalidSpec(f"missing {exc} for order=2") from None
        spec: RecurrenceSpec = SecondOrderSpec(d1, g)
    elif order == 3:
        try:
            e1 = int(fields.pop("e1"))
            e2 = int(fields.pop("e2"))
            terms = []
            for chunk in fields.pop("H").split(";"):
                i, j, coeff = (int(v) for v in chunk.split(","))
                terms.append((i, j, coeff))
        except KeyError as exc:
            raise InvalidSpec(f"missing {exc} for order=3") from None
        spec = ThirdOrderSpec(e1, e2, tuple(terms))
    else:
        raise InvalidSpec(f"unsupported order {order}")
    if fields:
        raise InvalidSpec(f"unknown keys: {sorted(fields)}")
    return spec.validate()
