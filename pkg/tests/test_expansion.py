import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engelcf.cf import convergents, evaluate, expand_rational, normalize_zeros
from engelcf.exceptions import ClassMismatch, InsufficientFactors
from engelcf.expansion import (
    EngelStream,
    SeriesSource,
    certified_decimal,
    enclosure,
    generic_partial_cf,
    generic_recursion_raw,
    partial_cf,
    partial_lengths,
    stream,
    verify_step_identities,
    z2eq2_partial_cf,
)
from engelcf.sequences import (
    FactorSequence,
    SecondOrderSpec,
    from_factors,
    lift_spec,
    ones_tail,
    partial_sum,
)
from engelcf.verify import check_generic_instance, check_z2_instance, generic_alphabet

AFFINE = SecondOrderSpec(3, (1, 2))


def test_generic_partial_examples():
    assert generic_partial_cf(FactorSequence((3, 2, 2)), 4).cf.coeffs == (
        1, 2, 1, 1, 3, 1, 1, 2, 1, 1, 2,
    )
    assert generic_partial_cf(FactorSequence((3, 9, 81)), 4).cf.coeffs == (
        1, 2, 1, 8, 3, 80, 1, 2, 8, 1, 2,
    )
    assert generic_partial_cf(FactorSequence((3, 2)), 3).cf.coeffs == (1, 2, 1, 1, 3)


def test_generic_partial_is_partial_sum():
    zs = FactorSequence((4, 3, 2, 5, 2))
    for n in range(3, 7):
        part = generic_partial_cf(zs, n)
        assert evaluate(part.cf) == partial_sum(from_factors(zs, n), n)
        assert part.length == 3 * 2 ** (n - 2) - 1


def test_generic_class_guard():
    with pytest.raises(ClassMismatch):
        generic_partial_cf(FactorSequence((2, 3, 4)), 4)
    with pytest.raises(ClassMismatch):
        z2eq2_partial_cf(FactorSequence((3, 3, 3)), 4)


def test_z2eq2_partial_examples():
    # Symbolic n = 5 display instantiated at z = (2, z3, z4, z5).
    z3, z4, z5 = 3, 4, 5
    got = z2eq2_partial_cf(FactorSequence((2, z3, z4, z5)), 5).cf.coeffs
    assert got == (
        1, 1, 1, z3 - 1, 2, z4 - 1, 1, 1, z3 - 1, 1, 1,
        z5 - 1, 2, z3 - 1, 1, 1, z4 - 1, 2, z3 - 1, 2,
    )
    assert z2eq2_partial_cf(FactorSequence((2, 6, 300)), 4).cf.coeffs == (
        1, 1, 1, 5, 2, 299, 1, 1, 5, 2,
    )
    assert z2eq2_partial_cf(FactorSequence((2, 2, 2)), 4).cf.coeffs == (
        1, 1, 1, 1, 2, 1, 1, 1, 1, 2,
    )


def test_z2eq2_equals_normalized_raw_recursion():
    # The raw doubling recursion run with z_2 = 2 develops zeros; removing
    # them (and merging the trailing unit) must land on the z_2 = 2 form.
    zs = FactorSequence((2, 3, 4, 5, 6))
    for n in range(4, 7):
        raw = generic_recursion_raw(zs, n)
        assert normalize_zeros(raw).coeffs == z2eq2_partial_cf(zs, n).cf.coeffs
    raw5 = generic_recursion_raw(FactorSequence((2, 3, 4, 5)), 5)
    assert len(raw5) == 23 and len(normalize_zeros(raw5)) == 20


def test_oracle_equivalence_small():
    check_generic_instance(FactorSequence((3, 2, 2, 2, 2, 2)), 7)
    check_generic_instance(FactorSequence((20, 20, 20, 20, 20, 20)), 7)
    check_z2_instance(FactorSequence((2, 2, 2, 2, 2, 2)), 7)
    check_z2_instance(FactorSequence((2, 20, 2, 20, 2, 20)), 7)


@given(st.integers(3, 20), st.lists(st.integers(2, 20), min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_oracle_equivalence_hypothesis(z2, rest):
    check_generic_instance(FactorSequence((z2, *rest)), 6)
    check_z2_instance(FactorSequence((2, *rest)), 6)


def test_stream_examples():
    assert list(stream(AFFINE, 11).certified) == [
        1, 2, 1, 20, 3, 23876, 1, 2, 20, 1, 2, 7697947188058154,
    ]
    assert list(stream(ones_tail(4), 17).certified)[:17] == [
        1, 3, 6, 4, 4, 2, 4, 6, 4, 2, 6, 4, 2, 4, 4, 6, 4,
    ]
    assert list(stream(ones_tail(2), 19).certified)[:19] == [
        1, 1, 4, 2, 4, 4, 6, 4, 2, 4, 6, 2, 4, 6, 4, 4, 2, 4, 6,
    ]
    assert list(stream(lift_spec(AFFINE), 11).certified) == [
        1, 2, 1, 6, 3, 3410, 1, 2, 6, 1, 2, 2256800700104,
    ]


def test_stream_mixed_oracle():
    got = stream(FactorSequence((5, 1, 2, 1)), 5)
    assert list(got.certified) == [1, 4, 6, 1, 1]
    assert got.series_class.value == "mixed"
    with pytest.raises(InsufficientFactors):
        stream(FactorSequence((5, 1, 2, 1)), 12)


def test_stream_finite_generic_exhaustion():
    zs = FactorSequence((3, 2, 2))
    got = stream(zs, 11)
    # With factors through z_4 the whole 11-coefficient S_4 is certified,
    # but nothing further can be.
    assert len(got.certified) == 11
    with pytest.raises(InsufficientFactors):
        stream(zs, 12)


def test_third_order_general_stream_matches_oracle():
    from engelcf.sequences import ThirdOrderSpec

    spec = ThirdOrderSpec(1, 2, ((0, 1, 2), (1, 0, 1))).validate()
    rec = stream(spec, 12).certified
    orc = stream(spec, 12, force_oracle=True).certified
    k = min(len(rec), len(orc))
    assert k >= 12 and rec[:k] == orc[:k]


def test_stream_prefix_stability():
    # Emitted coefficients never change as certification advances.
    es = EngelStream(AFFINE)
    seen = []
    for _ in range(5):
        es._advance()
        assert es.emitted[: len(seen)] == seen
        seen = list(es.emitted)
    assert es.certified_through == len(seen) - 1


def test_stream_is_prefix_of_partials():
    zs = FactorSequence((4, 3, 2, 5, 2, 7))
    first = stream(zs, 12).certified
    for n in range(5, 8):
        part = generic_partial_cf(zs, n)
        assert part.cf.coeffs[: len(first)] == first

    z2 = FactorSequence((2, 3, 4, 5, 6))
    first = stream(z2, 10).certified
    part = z2eq2_partial_cf(z2, 6)
    assert part.cf.coeffs[: len(first)] == first


def test_interval_oracle_matches_recursion():
    # The two certification mechanisms must agree coefficient for
    # coefficient on sources where both apply.
    for source in (FactorSequence((3, 2, 2, 2, 2, 2)), AFFINE):
        rec = stream(source, 12).certified
        orc = stream(source, 12, force_oracle=True).certified
        k = min(len(rec), len(orc))
        assert k >= 12
        assert rec[:k] == orc[:k]
    z2src = FactorSequence((2, 6, 300, 2, 2))
    rec = stream(z2src, 9).certified
    orc = stream(z2src, 9, force_oracle=True).certified
    k = min(len(rec), len(orc))
    assert k >= 9 and rec[:k] == orc[:k]


def test_interval_oracle_matches_recursion_random():
    rng = random.Random(424242)
    for _ in range(20):
        z2 = rng.choice([2, rng.randint(3, 12)])
        z = (z2,) + tuple(rng.randint(2, 12) for _ in range(7))
        rec = stream(FactorSequence(z), 10).certified
        orc = stream(FactorSequence(z), 10, force_oracle=True).certified
        k = min(len(rec), len(orc))
        assert k >= 10 and rec[:k] == orc[:k], z


def test_stream_alphabets():
    zs = FactorSequence((5, 3, 7, 2, 4, 9))
    got = stream(zs, 20)
    allowed = generic_alphabet(zs.z)
    assert set(got.certified) <= allowed

    for u in (3, 5, 9):
        got = stream(ones_tail(u), 30)
        assert set(got.certified) <= {1, u - 2, u - 1, u, u + 2}


def test_length_sequences():
    assert partial_lengths(FactorSequence((3, 2, 2, 2)), 5) == [1, 2, 5, 11, 23]
    assert partial_lengths(FactorSequence((2, 2, 2, 2)), 5) == [1, 2, 5, 10, 20]
    assert partial_lengths(ones_tail(4), 6) == [1, 2, 3, 5, 9, 17]
    assert partial_lengths(ones_tail(2), 6) == [1, 2, 3, 5, 7, 11]


def test_partial_cf_dispatch():
    assert partial_cf(FactorSequence((3, 2)), 1).cf.coeffs == (1,)
    assert partial_cf(FactorSequence((5,)), 2).cf.coeffs == (1, 5)
    assert partial_cf(FactorSequence((2, 4)), 3).cf.coeffs == (1, 1, 1, 3, 2)
    assert partial_cf(AFFINE, 4).cf.coeffs == generic_partial_cf(
        FactorSequence((3, 21, 23877)), 4
    ).cf.coeffs
    # Mixed class goes through the Euclidean oracle.
    mixed = FactorSequence((5, 1, 2, 1))
    part = partial_cf(mixed, 4)
    assert evaluate(part.cf) == partial_sum(from_factors(mixed, 4), 4)


def test_u2_split_representative():
    # For u = 2 the reported expansion ends in a unit quotient from n = 4 on;
    # the value is that of the canonical form.
    part = partial_cf(ones_tail(2), 4)
    assert part.cf.coeffs == (1, 1, 4, 2, 1)
    assert evaluate(part.cf) == Fraction(29, 16)
    assert expand_rational(Fraction(29, 16)).coeffs == (1, 1, 4, 3)
    assert partial_cf(ones_tail(2), 3).cf.coeffs == (1, 1, 3)


def test_verify_step_identities():
    report = verify_step_identities(FactorSequence((3, 2, 2)), 3)
    assert report.det_m == -1
    assert report.q_tilde == report.x_next

    ex1 = FactorSequence((3, 9, 81, 19683))
    report = verify_step_identities(ex1, 4)
    assert report.q_tilde == 3**33
    assert report.p_tilde == ex1.factor(5) * report.p * report.q + 1

    zs = FactorSequence((4, 3, 2, 5))
    for step in (3,):
        verify_step_identities(zs, step)


def test_convergent_table_shares_rows_with_step_identities():
    zs = FactorSequence((3, 2, 2, 2))
    part = generic_partial_cf(zs, 4)
    table = convergents(part.cf)
    # l_n odd makes det of the full product -1.
    p, q = table.final
    p2, q2 = table.rows[-2]
    assert p * q2 - p2 * q == -1


def test_enclosure_and_certified_decimal():
    lo, hi = enclosure(AFFINE, Fraction(1, 10**12))
    assert 0 < hi - lo <= Fraction(1, 10**12)
    target = Fraction("1.3386243")
    assert abs(lo - target) <= Fraction(5, 10**8)
    assert abs(hi - target) <= Fraction(5, 10**8)
    text = certified_decimal(lo, hi)
    assert text.startswith("1.3386243")

    assert certified_decimal(Fraction(1, 3), Fraction(1, 3), 5) == "0.33333"
    assert certified_decimal(Fraction(10, 7), Fraction(149, 100), 8) == "1.4"
    assert certified_decimal(Fraction(10, 7), Fraction(3, 2), 8) == "1"


def test_series_source_partial_sums_match_reference():
    zs = FactorSequence((3, 5, 2, 7))
    src = SeriesSource(zs)
    xs = from_factors(zs, 5)
    for n in range(1, 6):
        assert src.partial_sum(n) == partial_sum(xs, n)


def test_series_source_from_sequence_terms():
    src = SeriesSource([1, 1, 3, 81, 531441])
    assert src.series_class.value == "generic"
    assert src.x(3) == 81
    assert src.factor(3) == 9


def test_stream_take_is_monotone():
    es = EngelStream(ones_tail(3))
    first = es.take(5)
    longer = es.take(25)
    assert longer[: len(first)] == first
    rnd = random.Random(3)
    # A second stream over the same source certifies identical values.
    again = EngelStream(ones_tail(3)).take(5 + rnd.randint(0, 10))
    assert again[:5] == first[:5]
