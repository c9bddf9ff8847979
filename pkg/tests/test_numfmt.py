from fractions import Fraction

import pytest

from chainlab.numfmt import format_sig, milli_to_str, units


def test_paper_style_frequencies():
    assert format_sig(Fraction(15, 30)) == "0.5"
    assert format_sig(Fraction(20, 41)) == "0.4878"
    assert format_sig(Fraction(1, 41)) == "0.02439"


def test_chain_scores():
    assert format_sig(Fraction(2060, 41)) == "50.244"
    assert format_sig(Fraction(50)) == "50"
    assert format_sig(Fraction(2000, 41)) == "48.78"
    assert format_sig(3600) == "3600"


def test_zero_and_negative():
    assert format_sig(0) == "0"
    assert format_sig(Fraction(-20, 41)) == "-0.4878"


def test_half_up_rounding():
    assert format_sig(Fraction(123455, 10), digits=5) == "12346"  # .5 rounds up
    assert format_sig(Fraction(999995, 10), digits=5) == "100000"  # carry
    assert format_sig(Fraction(1, 3), digits=3) == "0.333"
    assert format_sig(Fraction(2, 3), digits=3) == "0.667"


def test_large_integers_keep_magnitude():
    assert format_sig(123456789, digits=3) == "123000000"


def test_digits_must_be_positive():
    with pytest.raises(ValueError):
        format_sig(Fraction(1), digits=0)


def test_milli_rendering():
    assert milli_to_str(1000) == "1"
    assert milli_to_str(1100) == "1.1"
    assert milli_to_str(100) == "0.1"
    assert milli_to_str(0) == "0"
    assert milli_to_str(-2500) == "-2.5"
    assert milli_to_str(11000) == "11"


def test_units_parsing():
    assert units(5) == 5000
    assert units("1.1") == 1100
    assert units(0.1) == 100
    assert units("0.05") == 50
    assert units("-2") == -2000


def test_units_rejects_sub_milli():
    with pytest.raises(ValueError):
        units("0.0001")


def test_units_milli_roundtrip():
    for value in (0, 100, 1100, 5000, 123456):
        assert units(milli_to_str(value)) == value
