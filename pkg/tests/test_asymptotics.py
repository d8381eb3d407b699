import pytest
from mpmath import mp, workdps

from engelcf.asymptotics import (
    dominant_root,
    empirical_growth_constant,
    estimate_C,
    full_report,
    growth_report,
    log_big,
    reconstruct_lambda_n,
    roth_exponents,
)
from engelcf.exceptions import DegenerateRoot, InvalidSpec
from engelcf.sequences import (
    FactorSequence,
    SecondOrderSpec,
    ThirdOrderSpec,
    from_factors,
    generate_recurrence,
    lift_spec,
    ones_tail,
)

CUBIC3 = SecondOrderSpec(3, (3,))
AFFINE = SecondOrderSpec(3, (1, 2))
DEGEN = SecondOrderSpec(3, (1, 1))


def test_dominant_root_values():
    with workdps(60):
        assert abs(dominant_root(3, 1) - (2 + mp.sqrt(3))) < mp.mpf("1e-45")
        assert abs(dominant_root(3, 0) - (3 + mp.sqrt(5)) / 2) < mp.mpf("1e-45")
    with pytest.raises(DegenerateRoot):
        dominant_root(2, 0)


def test_dominant_root_residuals():
    with workdps(60):
        for d1 in range(3, 21):
            for d2 in range(0, 21):
                lam = dominant_root(d1, d2)
                assert lam > 2
                assert abs(lam * lam - (d1 + d2) * lam + 1) < mp.mpf("1e-45")
                assert abs(lam * (1 / lam) - 1) < mp.mpf("1e-49")


def test_log_big_matches_direct():
    with workdps(50):
        for v in (1, 2, 3**40, 7**100, 2**64 - 1, 2**64 + 1):
            assert abs(log_big(v) - mp.log(mp.mpf(v))) < mp.mpf("1e-18")
    with pytest.raises(ValueError):
        log_big(0)


def test_reconstruction_trivial_and_known():
    e0, t0 = reconstruct_lambda_n(AFFINE, 1)
    assert e0 == 0 and t0 == 0
    e2, t2 = reconstruct_lambda_n(AFFINE, 2)
    with workdps(60):
        assert abs(t2 - mp.log(3)) < mp.mpf("1e-18")
        assert abs(e2 - t2) < mp.mpf("1e-18")
    e5, t5 = reconstruct_lambda_n(CUBIC3, 5)
    with workdps(60):
        assert abs(t5 - 33 * mp.log(3)) < mp.mpf("1e-14")
        assert abs(e5 - 33 * mp.log(3)) < mp.mpf("1e-14")


@pytest.mark.parametrize("spec", [CUBIC3, AFFINE, DEGEN])
def test_reconstruction_relative_error(spec):
    for n in range(0, 13):
        exact, true = reconstruct_lambda_n(spec, n)
        assert abs(exact - true) / max(1, abs(true)) < mp.mpf("1e-9")


def test_estimate_C_reference_values():
    c_affine, bound = estimate_C(AFFINE)
    with workdps(60):
        assert abs(c_affine - mp.mpf("0.107812043")) <= mp.mpf("1e-8")
        assert bound < mp.mpf("1e-20")
    c_degen, _ = estimate_C(DEGEN)
    with workdps(60):
        assert abs(c_degen - mp.mpf("0.06224548")) <= mp.mpf("1e-7")
    # Pure-power case: every correction term vanishes and C has a closed form.
    c_cubic, bound = estimate_C(CUBIC3)
    with workdps(60):
        lam = dominant_root(3, 0)
        closed = (1 - 1 / lam) / (lam - 1 / lam) * mp.log(3)
        assert abs(c_cubic - closed) < mp.mpf("1e-40")
        assert bound == 0


def test_estimate_C_truncation_shrinks():
    loose, loose_bound = estimate_C(AFFINE, rel_cut=1e-6)
    tight, tight_bound = estimate_C(AFFINE, rel_cut=1e-15)
    assert abs(loose - tight) <= loose_bound
    assert tight_bound <= loose_bound


def test_asymptotic_constant_consistency():
    # log x_n / lam^n approaches C; within 1e-6 by n = 10 for the affine spec.
    c_value, _ = estimate_C(AFFINE)
    lam = dominant_root(3, 1)
    x10 = generate_recurrence(AFFINE, 11)[10]
    with workdps(60):
        assert abs(log_big(x10) / lam**10 - c_value) < mp.mpf("1e-6")


def test_empirical_growth_constant():
    lifted = lift_spec(AFFINE)
    c_prime, drift = empirical_growth_constant(lifted, n=12)
    with workdps(60):
        assert abs(c_prime - mp.mpf("0.0227833")) <= mp.mpf("1e-5")
        assert drift < mp.mpf("1e-8")
        # Factorization X_n X_{n+1} = x_n forces C' (1 + lam) = C; the
        # empirical C' still drifts by O(lam^-n), hence the loose tolerance.
        c_parent, _ = estimate_C(AFFINE)
        lam = dominant_root(3, 1)
        assert abs(c_prime * (1 + lam) - c_parent) < mp.mpf("1e-6")
    with pytest.raises(InvalidSpec):
        empirical_growth_constant(ThirdOrderSpec(1, 2, ((0, 1, 2), (1, 0, 1))).validate())


def test_growth_report_recurrence():
    lam = dominant_root(3, 1)
    report = growth_report(generate_recurrence(AFFINE, 8), lam, 0.1)
    assert report.holds_from == 2
    assert report.ok
    with workdps(50):
        # Exponents decrease toward lam.
        assert abs(report.rows[-1].exponent - lam) < mp.mpf("0.01")


def test_growth_report_ones_tail():
    lam = dominant_root(3, 1)
    xs = from_factors(ones_tail(5), 9)
    report = growth_report(xs.x, lam, 0.1)
    assert all(abs(row.exponent - 2) < mp.mpf("1e-12") for row in report.rows)
    assert not report.ok


def test_growth_report_slow_sequence():
    report = growth_report([2**n for n in range(1, 12)], dominant_root(3, 1), 0.1)
    assert not report.ok
    with workdps(50):
        assert abs(report.rows[-1].exponent - 1) < mp.mpf("0.2")


def test_roth_exponents_recurrence():
    report = roth_exponents(AFFINE, 8)
    assert [r.n for r in report.records] == list(range(2, 10))
    for record in report.records:
        assert record.lower <= record.upper
        if record.n >= 5:
            assert record.lower > mp.mpf("2.3")
    assert report.delta > 0
    assert report.records[0].q_bits == 2  # q = x_2 = 3


def test_roth_exponents_ones_tail():
    report = roth_exponents(ones_tail(3), 10)
    for record in report.records:
        # x_{n+1} = x_n^2 pins the bracket around exponent 2.
        assert record.lower < 2
        assert record.upper > 2 - mp.mpf("1e-12")
        assert record.upper < 2 + mp.mpf("1e-12")
    assert report.delta < 0


def test_roth_single_record():
    report = roth_exponents(FactorSequence((5, 2, 3)), 1)
    assert len(report.records) == 1
    record = report.records[0]
    with workdps(50):
        assert abs(record.upper - log_big(50) / log_big(5)) < mp.mpf("1e-30")


def test_full_report_shape():
    report = full_report(AFFINE, n_max=6)
    assert report.c_lead == 2
    assert len(report.lambda_n_true) == 7 and len(report.lambda_n_exact) == 7
    assert report.lambda_n_true[0] == 0 and report.lambda_n_true[1] == 0
    assert [n for n, _ in report.growth_exponents] == [2, 3, 4, 5, 6]
    assert [r.n for r in report.roth.records] == [2, 3, 4, 5, 6]
    with workdps(50):
        for n in range(7):
            assert abs(report.lambda_n_true[n] - report.lambda_n_exact[n]) < mp.mpf("1e-9")
        assert len(report.alphas) == 5
        assert abs(report.alphas[0] - mp.log(mp.mpf(3) / 2)) < mp.mpf("1e-30")
    assert report.epsilon == 0.1
