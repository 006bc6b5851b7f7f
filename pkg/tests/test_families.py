import math

import pytest

from qcube.errors import DomainError
from qcube.families import FamilyKind, parse_family, resolve_family


def test_literal():
    fam = parse_family("0.05")
    assert fam.kind is FamilyKind.LITERAL
    assert fam.evaluate(10) == 0.05


def test_power_forms():
    assert parse_family("n^-1.5").evaluate(16) == pytest.approx(16.0**-1.5)
    assert parse_family("0.5*n^-2").evaluate(10) == pytest.approx(0.005)
    assert parse_family("n^(-1.5)").evaluate(9) == pytest.approx(9.0**-1.5)


def test_exp2_divisor_form():
    fam = parse_family("2^-n/2 / n")
    assert fam.kind is FamilyKind.EXP2
    assert fam.resonance() == 2
    assert fam.evaluate(16) == pytest.approx(2.0**-8 / 16)


def test_exp2_rate_form():
    fam = parse_family("2^(-0.4n)/n")
    assert fam.kind is FamilyKind.EXP2
    assert fam.resonance() is None  # 1/0.4 = 2.5 is not an integer
    assert fam.evaluate(10) == pytest.approx(2.0**-4 / 10)
    coef = parse_family("0.5*2^(-n/3)/n")
    assert coef.resonance() == 3
    assert coef.evaluate(9) == pytest.approx(0.5 * 2.0**-3 / 9)


def test_exp2_rate_one_is_critical_window():
    fam = parse_family("2^-n/1 / n")
    assert fam.kind is FamilyKind.CRITICAL
    assert fam.evaluate(12) == pytest.approx(1.0 / (12 * 2**12))


def test_critical_window():
    fam = parse_family("1/(n*2^n)")
    assert fam.kind is FamilyKind.CRITICAL
    assert fam.coefficient == 1.0
    assert fam.evaluate(12) == pytest.approx(1.0 / (12 * 4096))
    half = parse_family("0.5/(n*2^n)")
    assert half.evaluate(12) == pytest.approx(0.5 / (12 * 4096))


def test_subcritical():
    fam = parse_family("1/(n*2^n*log n)")
    assert fam.kind is FamilyKind.SUBCRITICAL
    assert fam.evaluate(12) == pytest.approx(1.0 / (12 * 4096 * math.log(12)))
    assert parse_family("1/(n*2^n*log(n))").evaluate(12) == fam.evaluate(12)


def test_whitespace_insensitive():
    a = parse_family("2^-n/2 / n")
    b = parse_family("2^-n/2/n")
    assert a.kind is b.kind and a.evaluate(14) == b.evaluate(14)


def test_out_of_range_rejected():
    with pytest.raises(DomainError):
        parse_family("5.0")
    assert parse_family("n^-0.1").evaluate(1) == 1.0  # boundary value is legal
    with pytest.raises(DomainError):
        parse_family("3*n^-1").evaluate(2)  # evaluates to 1.5


def test_garbage_rejected():
    for text in ("", "q^-2", "2^n/n", "1/(n*3^n)", "n^-1.5 + 1"):
        with pytest.raises(DomainError):
            parse_family(text)


def test_resolve_family_passthrough():
    fam = parse_family("n^-1.5")
    assert resolve_family(fam) is fam
    assert resolve_family(0.25).evaluate(5) == 0.25
    assert resolve_family("n^-1.5").evaluate(4) == fam.evaluate(4)
