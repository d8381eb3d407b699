"""Exact continued fraction machinery.

Convergents by 2x2 integer matrix products, exact evaluation, the canonical
Euclidean expansion of a non-negative rational, and the zero-removal rule
[..., a, 0, b, ...] -> [..., a+b, ...] for repairing degenerate expansions.

Everything here is a pure function of immutable values and safe to call
concurrently.

Conventions:
  * a_0 >= 0, a_j >= 1 for j >= 1 in a normalized expansion;
  * canonical form additionally has final coefficient >= 2 when the
    expansion is longer than one term, which makes it unique;
  * lengths count every coefficient including a_0.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exceptions import TrailingZero, ZeroCoefficient

# Exact rational values are plain stdlib fractions: always in lowest terms,
# denominator positive, arbitrary precision.
BigRational = Fraction


@dataclass(frozen=True)
class CFExpansion:
    """A finite continued fraction [a_0; a_1, ..., a_m] with no zero entries
    after a_0. Raw coefficient lists that may contain zeros stay plain
    sequences; see normalize_zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty continued fraction")
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))
        if self.coeffs[0] < 0:
            raise ValueError(f"a_0 must be non-negative, got {self.coeffs[0]}")
        for j, a in enumerate(self.coeffs[1:], start=1):
            if a == 0:
                raise ZeroCoefficient(f"a_{j} = 0")
            if a < 0:
                raise ValueError(f"a_{j} must be positive, got {a}")

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]

    @property
    def is_canonical(self) -> bool:
        return len(self.coeffs) == 1 or self.coeffs[-1] >= 2

    def __str__(self):
        return cf_text(self.coeffs)


@dataclass(frozen=True)
class ConvergentTable:
    """Rows (p_j, q_j) for j = 0..m of a continued fraction.

    Keeping the whole table (current and previous columns together) lets the
    step identities of the doubling construction be asserted without
    recomputation.
    """

    rows: tuple[tuple[int, int], ...]

    @property
    def final(self) -> tuple[int, int]:
        return self.rows[-1]

    @property
    def value(self) -> Fraction:
        p, q = self.rows[-1]
        return Fraction(p, q)

    def determinant_ok(self) -> bool:
        """p_j*q_{j-1} - p_{j-1}*q_j == (-1)^(j+1) for every j >= 1."""
        for j in range(1, len(self.rows)):
            p, q = self.rows[j]
            pp, qp = self.rows[j - 1]
            if p * qp - pp * q != (-1) ** (j + 1):
                return False
        return True


CFLike = Union[CFExpansion, Sequence[int]]


def _coeff_list(cf: CFLike) -> list[int]:
    if isinstance(cf, CFExpansion):
        return list(cf.coeffs)
    out = [int(a) for a in cf]
    if not out:
        raise ValueError("empty continued fraction")
    return out


def _check_no_zeros(coeffs: Sequence[int]):
    for j, a in enumerate(coeffs):
        if j >= 1 and a == 0:
            raise ZeroCoefficient(f"a_{j} = 0")
        if a < 0:
            raise ValueError(f"negative coefficient a_{j} = {a}")


def convergents(cf: CFLike) -> ConvergentTable:
    """Convergent table of a normalized continued fraction.

    Row j is the top row of the product of the first j+1 matrices
    [[a_i, 1], [1, 0]]; the final row gives the exact value.
    """
    coeffs = _coeff_list(cf)
    _check_no_zeros(coeffs)
    rows = []
    p_prev, q_prev = 1, 0
    p_prev2, q_prev2 = 0, 1
    for a in coeffs:
        p = a * p_prev + p_prev2
        q = a * q_prev + q_prev2
        rows.append((p, q))
        p_prev2, q_prev2, p_prev, q_prev = p_prev, q_prev, p, q
    return ConvergentTable(tuple(rows))


def evaluate(cf: CFLike) -> Fraction:
    """Exact rational value of a normalized continued fraction.

    Accepts non-canonical input (e.g. a trailing 1, or a_0 = 0); only zeros
    in positions >= 1 are rejected.
    """
    coeffs = _coeff_list(cf)
    _check_no_zeros(coeffs)
    return _fold_value(coeffs)


def _fold_value(coeffs: Sequence[int]) -> Fraction:
    # Right fold; tolerates interior zeros (used on raw lists by
    # normalize_zeros callers), but not a trailing zero.
    if coeffs[-1] == 0 and len(coeffs) > 1:
        raise TrailingZero("cannot evaluate a raw expansion ending in 0")
    value = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        value = a + 1 / value
    return value


def expand_rational(r) -> CFExpansion:
    """Canonical continued fraction of a non-negative rational.

    The Euclidean algorithm already yields the canonical representative:
    the last quotient divides exactly with remainder strictly smaller, so
    the final coefficient is >= 2 whenever the expansion has length > 1.
    This is the independent oracle the recursive constructions are tested
    against.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError(f"negative rational {r}")
    p, q = r.numerator, r.denominator
    coeffs = []
    while q:
        a, rem = divmod(p, q)
        coeffs.append(a)
        p, q = q, rem
    return CFExpansion(tuple(coeffs))


def normalize_zeros(raw: Sequence[int]) -> CFExpansion:
    """Remove interior zeros from a raw coefficient list and canonicalize.

    Applies [..., a, 0, b, ...] -> [..., a+b, ...] left to right until no
    interior zero remains (each application shortens the list by exactly 2),
    then merges a trailing unit quotient [..., a, 1] -> [..., a+1] so the
    result is the canonical representative. The exact value is unchanged
    throughout.

    Left-to-right order is fixed for determinism; for the inputs arising
    here the fixed point does not depend on it.
    """
    coeffs = [int(a) for a in raw]
    if not coeffs:
        raise ValueError("empty continued fraction")
    if coeffs[-1] == 0 and len(coeffs) > 1:
        raise TrailingZero("zero in final position cannot be removed")
    j = 1
    while j < len(coeffs) - 1:
        if coeffs[j] == 0:
            merged = coeffs[j - 1] + coeffs[j + 1]
            coeffs[j - 1:j + 2] = [merged]
            # The merge can expose a new zero at the merged position's
            # neighborhood; step back one slot instead of rescanning.
            j = max(j - 1, 1)
        else:
            j += 1
    if coeffs[-1] == 0 and len(coeffs) > 1:
        raise TrailingZero("zero migrated to final position; irreducible input")
    if len(coeffs) > 1 and coeffs[-1] == 1:
        coeffs[-2:] = [coeffs[-2] + 1]
    return CFExpansion(tuple(coeffs))


def cf_text(cf: CFLike) -> str:
    """Render in the bracket grammar: ``[a0;a1,a2,...]``, no whitespace."""
    coeffs = _coeff_list(cf)
    if len(coeffs) == 1:
        return f"[{coeffs[0]}]"
    return "[{};{}]".format(coeffs[0], ",".join(str(a) for a in coeffs[1:]))


def parse_cf_text(text: str) -> CFExpansion:
    """Parse the bracket grammar produced by cf_text."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"not a bracketed continued fraction: {text!r}")
    body = s[1:-1]
    if ";" in body:
        head, _, tail = body.partition(";")
        coeffs = [int(head)] + [int(t) for t in tail.split(",")]
    else:
        coeffs = [int(body)]
    return CFExpansion(tuple(coeffs))
