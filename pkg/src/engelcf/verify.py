"""Randomized oracle-equivalence suites.

The recursive constructions never trust themselves: every suite rebuilds
the same expansion through the independent Euclidean route and demands
coefficient-for-coefficient equality, together with the length formulas,
the final-denominator identity q = x_n, the coefficient alphabet, and the
determinant identity at every convergent. Trials are pure and seeded, so
runs are reproducible.
"""

import random

from .cf import convergents, expand_rational
from .exceptions import IdentityViolation
from .expansion import (
    generic_partial_cf,
    verify_step_identities,
    z2eq2_partial_cf,
)
from .sequences import (
    FactorSequence,
    SecondOrderSpec,
    from_factors,
    generate_recurrence,
    lift_spec,
    partial_sum,
)


def generic_alphabet(z: tuple[int, ...]) -> set[int]:
    """Coefficients that may appear for a generic factor list: 1, z_2,
    z_2 - 2, and z_j - 1 for every factor."""
    out = {1, z[0], z[0] - 2}
    out.update(v - 1 for v in z)
    return out


def _fail(message: str):
    raise IdentityViolation(message)


def check_generic_instance(zs: FactorSequence, n_max: int) -> int:
    """All generic-class invariants for one factor list; returns the number
    of expansions checked."""
    checked = 0
    for n in range(3, n_max + 1):
        rec = generic_partial_cf(zs, n)
        xs = from_factors(zs, n)
        oracle = expand_rational(partial_sum(xs, n))
        if rec.cf.coeffs != oracle.coeffs:
            _fail(f"recursion != Euclid oracle at n={n}, z={zs.z}")
        if rec.length != 3 * 2 ** (n - 2) - 1:
            _fail(f"length {rec.length} at n={n}")
        table = convergents(rec.cf)
        if table.final[1] != xs.x[n - 1]:
            _fail(f"final denominator != x_{n} for z={zs.z}")
        if not table.determinant_ok():
            _fail(f"determinant identity failed at n={n}, z={zs.z}")
        if not set(rec.cf.coeffs) <= generic_alphabet(zs.z[: n - 1]):
            _fail(f"alphabet violation at n={n}, z={zs.z}")
        checked += 1
    return checked


def check_z2_instance(zs: FactorSequence, n_max: int) -> int:
    """All z_2 = 2 invariants for one factor list."""
    checked = 0
    for n in range(4, n_max + 1):
        rec = z2eq2_partial_cf(zs, n)
        xs = from_factors(zs, n)
        oracle = expand_rational(partial_sum(xs, n))
        if rec.cf.coeffs != oracle.coeffs:
            _fail(f"z2 recursion != Euclid oracle at n={n}, z={zs.z}")
        if rec.length != 5 * 2 ** (n - 3):
            _fail(f"z2 length {rec.length} at n={n}")
        if rec.cf.coeffs[-1] != 2:
            _fail(f"z2 final coefficient != 2 at n={n}")
        table = convergents(rec.cf)
        if table.final[1] != xs.x[n - 1]:
            _fail(f"z2 final denominator != x_{n} for z={zs.z}")
        if not table.determinant_ok():
            _fail(f"z2 determinant identity failed at n={n}")
        checked += 1
    return checked


def run_generic_suite(trials: int = 100, n_max: int = 7, seed: int = 0) -> int:
    rng = random.Random(seed)
    checked = 0
    for _ in range(trials):
        z = (rng.randint(3, 20),) + tuple(rng.randint(2, 20) for _ in range(n_max - 2))
        checked += check_generic_instance(FactorSequence(z), n_max)
    return checked


def run_z2_suite(trials: int = 100, n_max: int = 7, seed: int = 0) -> int:
    rng = random.Random(seed)
    checked = 0
    for _ in range(trials):
        z = (2,) + tuple(rng.randint(2, 20) for _ in range(n_max - 2))
        checked += check_z2_instance(FactorSequence(z), n_max)
    return checked


def run_lift_suite(spec2: SecondOrderSpec, n: int = 7) -> int:
    """X_k * X_{k+1} = x_k for the lifted recurrence, all computed k."""
    lifted = lift_spec(spec2)
    xs = generate_recurrence(spec2, n)
    bigxs = generate_recurrence(lifted, n + 1)
    for k in range(n):
        if bigxs[k] * bigxs[k + 1] != xs[k]:
            _fail(f"lift identity failed at k={k}")
    return n


def run_identities_suite(zs: FactorSequence, n_through: int) -> int:
    """Step identities for every feasible doubling step 3..n_through-1."""
    count = zs.known_count()
    top = n_through - 1 if count is None else min(n_through - 1, count)
    checked = 0
    for step in range(3, top + 1):
        verify_step_identities(zs, step)
        checked += 1
    if checked == 0:
        _fail("no feasible step to check; give more factors or a larger n")
    return checked
