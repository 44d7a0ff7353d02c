from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, strategies as st

from dekomp.rings import Ring, RingParseError, is_prime, parse_element, parse_ring

SMALL = ["Z/6", "Z/8", "GF(5)", "GF(2)[x,y]/m^2", "GF(3)[x]/m^3", "GF(2)[x,y,z]/m^2", "GF(3)[x,y]/m^2"]


def test_parse_descriptors():
    assert parse_ring("Z") == Ring.integers()
    assert parse_ring("GF(2)[x,y]/m^2") == Ring.truncated(2, ("x", "y"), 2)
    assert parse_ring("Z/6") == Ring.integers_mod(6)
    assert parse_ring("GF(3)[X,Y]") == Ring.poly(3, ("X", "Y"))
    for bad in ("GF(4)[x]", "GF(2)[x]/m^1", "Z/1", "Q", "GF(2)[x,x]"):
        with pytest.raises(RingParseError):
            parse_ring(bad)


def test_parse_error_position():
    with pytest.raises(RingParseError) as err:
        parse_ring("GF(4)[x]")
    assert err.value.position == 3


def test_descriptor_round_trip():
    for text in SMALL + ["Z", "GF(2)[X,Y]"]:
        assert str(parse_ring(text)) == text


def test_multiplication_examples():
    R = parse_ring("GF(2)[x,y]/m^2")
    assert R.is_zero(R.mul(R.parse("x"), R.parse("y")))
    Z6 = parse_ring("Z/6")
    assert Z6.mul(2, 3) == 0
    P = parse_ring("GF(2)[X,Y]")
    s = P.parse("X+Y")
    assert P.mul(s, s) == P.parse("X^2+Y^2")


def test_units_and_inverses():
    R = parse_ring("GF(2)[x,y]/m^2")
    a = R.parse("1+x")
    assert R.is_unit(a) and R.try_invert(a) == a
    Z = Ring.integers()
    assert not Z.is_unit(2) and Z.is_unit(-1)
    Z6 = parse_ring("Z/6")
    assert Z6.try_invert(5) == 5 and Z6.try_invert(2) is None


def test_sizes():
    assert parse_ring("GF(2)[x,y]/m^2").size == 8
    assert len(list(parse_ring("GF(2)[x,y]/m^2").elements())) == 8
    assert parse_ring("Z/6").size == 6
    with pytest.raises(ValueError):
        Ring.integers().size


def test_residues():
    R = parse_ring("GF(2)[x,y]/m^2")
    assert R.residue(R.parse("1+x")) == 1
    assert R.residue(R.parse("x+y")) == 0
    assert R.residue(R.zero) == 0


def test_format_and_parse_round_trip():
    R = parse_ring("GF(3)[x,y]/m^3")
    for a in R.elements():
        assert R.parse(R.format(a)) == a
    assert R.format(R.parse("x*y+2*x+1")) == "x*y+2*x+1"
    with pytest.raises(RingParseError):
        parse_element(R, "x+*y")


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("text", SMALL)
def test_unit_iff_invertible_exhaustive(text):
    R = parse_ring(text)
    elems = list(R.elements())
    for a in elems:
        has_inverse = any(R.mul(a, b) == R.one and R.mul(b, a) == R.one for b in elems)
        assert R.is_unit(a) == has_inverse


@pytest.mark.parametrize("text", [t for t in SMALL if "[" in t])
def test_nonunits_form_the_residue_zero_ideal(text):
    R = parse_ring(text)
    elems = list(R.elements())
    nonunits = [a for a in elems if not R.is_unit(a)]
    assert all(R.residue(a) == 0 for a in nonunits)
    nonunit_set = set(nonunits)
    for a, b in itertools.product(nonunits, repeat=2):
        assert R.add(a, b) in nonunit_set
    for a, r in itertools.product(nonunits, elems):
        assert R.mul(r, a) in nonunit_set


@pytest.mark.parametrize("text", SMALL)
@given(data=st.data())
def test_ring_axioms(text, data):
    R = parse_ring(text)
    a, b, c = (data.draw(st.sampled_from(R.element_list)) for _ in range(3))
    assert R.add(a, b) == R.add(b, a)
    assert R.mul(a, b) == R.mul(b, a)
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == R.zero
    for res in (R.add(a, b), R.mul(a, b), R.sub(a, c)):
        assert R.is_canonical(res) and R.check(res) == res


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_integers_match_python(a, b):
    Z = Ring.integers()
    assert Z.mul(a, b) == a * b and Z.add(a, b) == a + b


@given(st.integers(2, 40), st.integers(0, 200), st.integers(0, 200))
def test_integers_mod_match_python(n, a, b):
    R = Ring.integers_mod(n)
    x, y = R.from_int(a), R.from_int(b)
    assert R.mul(x, y) == (a * b) % n
    inv = R.try_invert(x)
    if inv is None:
        assert math.gcd(a, n) != 1
    else:
        assert (inv * a) % n == 1


@pytest.mark.parametrize("text", ["GF(2)[x,y]/m^2", "GF(3)[x]/m^3"])
def test_mult_matrix_matches_multiplication(text):
    R = parse_ring(text)
    for a in R.elements():
        M = R.mult_matrix(a)
        for b in R.elements():
            prod = (M @ R.coords(b)) % R.prime
            assert R.from_coords(prod) == R.mul(a, b)
