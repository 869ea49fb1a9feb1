# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The midpoint authors

from fractions import Fraction

import pytest

import midpoint as mp


def digits_value(s, n):
    return sum(Fraction(s.digit(i), 2 ** (i + 1)) for i in range(n))


def test_canonical_digits():
    assert mp.from_rational("1/3").digits(6) == "0+0+0+"
    assert mp.from_rational(0).digits(4) == "0000"
    assert mp.from_rational(-1).digits(3, unicode=True) == "−−−"


def test_enclosure_contains_value():
    for r in [Fraction(1, 3), Fraction(-5, 7), Fraction(0), Fraction(1)]:
        lo, hi = mp.enclosure(mp.from_rational(r), 40)
        assert lo <= r <= hi
        assert hi - lo <= Fraction(2, 2 ** 40)


def test_stream_operations():
    x = mp.from_rational(Fraction(1, 3))
    y = mp.from_rational(Fraction(1, 2))
    n = 50
    assert abs(digits_value(mp.mid(x, y), n) - Fraction(5, 12)) <= Fraction(1, 2 ** n)
    assert abs(digits_value(mp.neg(x), n) + Fraction(1, 3)) <= Fraction(1, 2 ** n)
    assert abs(digits_value(mp.tdouble(mp.from_rational("3/4")), n) - 1) <= Fraction(1, 2 ** n)
    lo, hi = mp.enclosure(mp.mul(x, y), 50)
    assert lo <= Fraction(1, 6) <= hi
    b = mp.bigmid(mp.streams([1, -1]), mp.from_rational(0))
    assert abs(digits_value(b, n) - Fraction(1, 4)) <= Fraction(1, 2 ** n)


def test_expressions():
    s = mp.parse_expression("mid(1, -1)")
    assert s.digits(8) == "00000000"
    with pytest.raises(mp.ParseError):
        mp.parse_expression("mid(1")
    with pytest.raises(ValueError):
        mp.parse_expression("3/2")


def test_terms():
    assert mp.weight("(mid a b)") == {"a": Fraction(1, 2), "b": Fraction(1, 2)}
    assert mp.weight("(seq periodic [] [a b])") == {"a": Fraction(2, 3), "b": Fraction(1, 3)}
    assert mp.normalize_term("( mid a  b )") == "(mid a b)"
    with pytest.raises(mp.ParseError):
        mp.weight("(mid a")


def test_decompose_and_levels():
    lam = {"a": Fraction(1, 3), "b": Fraction(2, 3)}
    rho, mu, steps = mp.decompose(lam)
    assert rho == {"b": 1}
    assert mu == {"a": Fraction(2, 3), "b": Fraction(1, 3)}
    for g in lam:
        assert 2 * lam[g] == rho.get(g, 0) + mu.get(g, 0)
    levels, residual = mp.levels(lam, 20)
    assert len(levels) == 20
    assert residual <= Fraction(1, 2 ** 20)
    recon = {g: sum(Fraction(lv.get(g, 0), 2 ** (l + 1)) for l, lv in enumerate(levels)) for g in lam}
    assert max(abs(recon[g] - lam[g]) for g in lam) == residual


def test_checks():
    assert "axioms" in mp.check_suites()
    report = mp.check("axioms", body="simplex:2", samples=50)
    assert report["pass"] and report["max_violation"] == "0"
    lshape = mp.check("cancellation", body="lshape", samples=200)
    assert lshape["expected_failure"] and lshape["expectation_met"] and not lshape["pass"]
    assert mp.check("flatten", body="euclid:2:1", samples=5, seed=3) == mp.check(
        "flatten", body="euclid:2:1", samples=5, seed=3
    )
    with pytest.raises(ValueError):
        mp.check("axioms", body="circle")
