"""Growth and irrationality diagnostics for recurrence-generated series.

Writing L_n = log x_n, the second-order recurrence linearizes to

    L_{n+1} - (d1+d2) L_n + L_{n-1} = log c + a_n,
    a_n = log( G(x_n) / (c x_n^d2) ),

whose homogeneous part has the dominant root

    lam = (d1 + d2 + sqrt((d1+d2)^2 - 4)) / 2 > 2.

Solving with x_0 = x_1 = 1 gives an exact term-by-term formula for L_n and
the leading-order constant C with L_n ~ C lam^n. The correction a_k is
O(1/x_k), so the series for C converges doubly exponentially fast.

Logs of huge integers use the top 64 bits only: log x = B log 2 + log m
with B = bitlength - 64 and m the leading 64-bit mantissa, absolute error
below 2^-63. Terms here carry millions of bits; full-precision logs would
be wasted.

All functions take the working precision (decimal digits) as a parameter;
nothing here keeps ambient mutable state.
"""

from dataclasses import dataclass
from typing import Sequence

from mpmath import mp, workdps

from .exceptions import DegenerateRoot, InvalidSpec
from .expansion import SeriesSource, SourceLike
from .sequences import (
    BitBudget,
    BudgetMeter,
    SecondOrderSpec,
    ThirdOrderSpec,
    generate_recurrence,
)

DEFAULT_DPS = 50


def log_big(x: int, dps: int = DEFAULT_DPS):
    """log of a positive integer of arbitrary size.

    Only the leading 64 bits enter; the dropped low bits contribute less
    than 2^-63 absolutely, far below every tolerance used here.
    """
    if x < 1:
        raise ValueError("log_big needs a positive integer")
    with workdps(dps):
        bits = x.bit_length()
        if bits <= 64:
            return mp.log(x)
        shift = bits - 64
        return shift * mp.log(2) + mp.log(x >> shift)


def dominant_root(d1: int, d2: int, dps: int = DEFAULT_DPS):
    """Largest root of t^2 - (d1+d2) t + 1 = 0; exceeds 2 when d1+d2 >= 3."""
    b = d1 + d2
    if b <= 2:
        raise DegenerateRoot(f"d1 + d2 = {b} <= 2 gives a root <= 1")
    with workdps(dps + 10):
        return (b + mp.sqrt(mp.mpf(b) * b - 4)) / 2


def _alpha(spec: SecondOrderSpec, x_k: int):
    # a_k = log(G(x)/(c x^d2)) = log1p(B(x)/(c x^d2)) with B the sub-leading
    # part of G; the ratio is formed exactly before any rounding.
    den = spec.c * x_k**spec.d2
    num = spec.G(x_k) - den
    if num == 0:
        return mp.mpf(0)
    return mp.log1p(mp.mpf(num) / mp.mpf(den))


def reconstruct_lambda_n(
    spec: SecondOrderSpec,
    n: int,
    dps: int = DEFAULT_DPS,
    budget: BitBudget | None = None,
):
    """(exact, true) for L_n = log x_n.

    ``exact`` evaluates the closed-form solution of the linearized
    recurrence term by term; ``true`` is the log of the generated integer.
    The two must agree to well below 1e-9 relative.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    spec.validate()
    xs = generate_recurrence(spec, max(n + 1, 2), budget)
    with workdps(dps + 10):
        lam = dominant_root(spec.d1, spec.d2, dps)
        lami = 1 / lam
        denom = lam - lami
        # Particular solution K = -log(c)/(d1+d2-2) for the constant forcing
        # term; zero initial data L_0 = L_1 = 0 then fix the homogeneous
        # coefficients, giving K * (1 - (lam^n + lam^(1-n))/(1 + lam)).
        bracket = ((1 - lami) * lam**n - (1 - lam) * lami**n) / denom - 1
        exact = bracket * mp.log(spec.c) / (spec.d1 + spec.d2 - 2)
        for k in range(1, n):
            exact += (lam ** (n - k) - lam ** (k - n)) / denom * _alpha(spec, xs[k])
        true = log_big(xs[n], dps)
    return exact, true


def estimate_C(
    spec: SecondOrderSpec,
    dps: int = DEFAULT_DPS,
    rel_cut: float = 1e-15,
    budget: BitBudget | None = None,
    max_terms: int = 60,
):
    """(C, tail_bound) for the leading-order constant in L_n ~ C lam^n:

        C = (1/(d1+d2-2)) * ((1-1/lam)/(lam-1/lam)) * log c
            + (1/(lam-1/lam)) * sum_{k>=1} lam^-k a_k.

    Terms are non-negative and decay doubly exponentially; summation stops
    once the next term falls below ``rel_cut`` of the running value, and the
    dropped tail is bounded by twice that term (the a_k are non-increasing
    and lam > 2, so the tail is dominated by a geometric series).
    """
    spec.validate()
    meter = BudgetMeter(budget)
    with workdps(dps + 10):
        lam = dominant_root(spec.d1, spec.d2, dps)
        lami = 1 / lam
        denom = lam - lami
        c_value = mp.log(spec.c) / (spec.d1 + spec.d2 - 2) * (1 - lami) / denom
        xs = [1, 1]
        k = 0
        while True:
            k += 1
            while len(xs) <= k:
                nxt = xs[-1] ** spec.d1 * spec.G(xs[-1]) // xs[-2]
                meter.charge(nxt, f"x_{len(xs)}")
                xs.append(nxt)
            term = lami**k * _alpha(spec, xs[k]) / denom
            c_value += term
            while len(xs) <= k + 1:
                nxt = xs[-1] ** spec.d1 * spec.G(xs[-1]) // xs[-2]
                meter.charge(nxt, f"x_{len(xs)}")
                xs.append(nxt)
            next_term = lami ** (k + 1) * _alpha(spec, xs[k + 1]) / denom
            if 2 * next_term < rel_cut * c_value or k >= max_terms:
                return c_value, 2 * next_term


def empirical_growth_constant(
    spec3: ThirdOrderSpec,
    n: int = 12,
    dps: int = DEFAULT_DPS,
    budget: BitBudget | None = None,
):
    """(C', err) with log X_n ~ C' lam^n for a lifted third-order spec.

    No series formula is available here, so C' is read off as
    log X_n / lam^n at the largest computed index; ``err`` is the change
    from the previous index, an estimate of the remaining drift.
    """
    parent = spec3.lift_parent()
    if parent is None:
        raise InvalidSpec("empirical growth constant needs a lifted-shape spec")
    lam = dominant_root(parent.d1, parent.d2, dps)
    xs = generate_recurrence(spec3, n + 1, budget)
    with workdps(dps + 10):
        c_n = log_big(xs[n], dps) / lam**n
        c_prev = log_big(xs[n - 1], dps) / lam ** (n - 1)
        return c_n, abs(c_n - c_prev)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    exponent: object  # mpf
    holds: bool


@dataclass(frozen=True)
class GrowthReport:
    lam: object
    epsilon: float
    rows: tuple[GrowthRow, ...]
    holds_from: int | None

    @property
    def ok(self) -> bool:
        return self.holds_from is not None


def growth_report(
    terms: Sequence[int],
    lam,
    epsilon: float = 0.1,
    dps: int = DEFAULT_DPS,
) -> GrowthReport:
    """Per-index growth exponents log x_{n+1} / log x_n and the check
    x_{n+1} > x_n^(lam - epsilon).

    ``terms`` is any integer sequence; rows cover the positions n (counted
    from 0 in the given list) with x_n >= 2 and a successor. ``holds_from``
    is the first position from which the check holds through the end, or
    None when it fails at the last recorded position.
    """
    xs = [int(v) for v in terms]
    if sum(1 for v in xs if v > 1) < 4:
        raise ValueError("need at least 4 terms exceeding 1")
    rows = []
    with workdps(dps):
        lam = mp.mpf(lam)
        threshold = lam - mp.mpf(epsilon)
        for n in range(len(xs) - 1):
            if xs[n] < 2:
                continue
            log_n = log_big(xs[n], dps)
            log_next = log_big(xs[n + 1], dps)
            rows.append(GrowthRow(n, log_next / log_n, bool(log_next > threshold * log_n)))
    holds_from = None
    for row in reversed(rows):
        if not row.holds:
            break
        holds_from = row.n
    return GrowthReport(lam, float(epsilon), tuple(rows), holds_from)


@dataclass(frozen=True)
class RothRecord:
    n: int
    q_bits: int
    lower: object  # mpf
    upper: object  # mpf


@dataclass(frozen=True)
class RothReport:
    """Bracketed effective irrationality exponents at the partial sums.

    S_n = p/q with q = x_n, and |S - S_n| lies strictly between 1/x_{n+1}
    and 2/x_{n+1}, so the exponent -log|S - p/q| / log q is bracketed by
    [log(x_{n+1}/2)/log x_n, log x_{n+1}/log x_n]. ``delta`` is the margin
    of the weakest lower bracket over 2; persistently positive delta is the
    numeric shadow of a super-quadratic approximation rate.
    """

    records: tuple[RothRecord, ...]
    delta: object


@dataclass(frozen=True)
class AsymptoticsReport:
    """Everything the growth analysis of one second-order spec produces."""

    lam: object
    c_lead: int
    alphas: tuple            # a_k for k = 1..n_max-1
    C: object
    C_bound: object
    lambda_n_true: tuple     # log x_n for n = 0..n_max
    lambda_n_exact: tuple    # formula reconstruction, same indices
    growth_exponents: tuple  # (n, log x_{n+1} / log x_n) for n = 2..n_max
    epsilon: float
    roth: "RothReport"


def full_report(
    spec: SecondOrderSpec,
    n_max: int = 10,
    epsilon: float = 0.1,
    dps: int = DEFAULT_DPS,
    budget: BitBudget | None = None,
) -> AsymptoticsReport:
    """Aggregate diagnostics for a second-order spec up to index n_max."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    spec.validate()
    lam = dominant_root(spec.d1, spec.d2, dps)
    c_value, c_bound = estimate_C(spec, dps, budget=budget)
    xs = generate_recurrence(spec, n_max + 2, budget)
    trues, exacts = [], []
    for n in range(0, n_max + 1):
        exact, true = reconstruct_lambda_n(spec, n, dps, budget)
        exacts.append(exact)
        trues.append(true)
    with workdps(dps):
        growth = tuple(
            (n, log_big(xs[n + 1], dps) / log_big(xs[n], dps)) for n in range(2, n_max + 1)
        )
        alphas = tuple(_alpha(spec, xs[k]) for k in range(1, n_max))
    roth = roth_exponents(spec, max(n_max - 1, 1), dps, budget)
    return AsymptoticsReport(
        lam=lam,
        c_lead=spec.c,
        alphas=alphas,
        C=c_value,
        C_bound=c_bound,
        lambda_n_true=tuple(trues),
        lambda_n_exact=tuple(exacts),
        growth_exponents=growth,
        epsilon=float(epsilon),
        roth=roth,
    )


def roth_exponents(
    source: SourceLike,
    depth: int,
    dps: int = DEFAULT_DPS,
    budget: BitBudget | None = None,
) -> RothReport:
    """Exponent brackets at S_n for n = 2 .. depth+1.

    Records start at n = 2, the first partial sum whose denominator
    exceeds 1.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    src = SeriesSource(source, budget)
    records = []
    with workdps(dps):
        log2 = mp.log(2)
        for n in range(2, depth + 2):
            q = src.x(n)
            x_next = src.x(n + 1)
            log_q = log_big(q, dps)
            log_next = log_big(x_next, dps)
            records.append(
                RothRecord(n, q.bit_length(), (log_next - log2) / log_q, log_next / log_q)
            )
    delta = min(r.lower for r in records) - 2
    return RothReport(tuple(records), delta)
