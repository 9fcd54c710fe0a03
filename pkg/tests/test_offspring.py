import math
from fractions import Fraction as F

import numpy as np
import pytest

from bgwlab.errors import SpecParseError
from bgwlab.offspring import (Finite, Geometric, PolyExp, PowerLaw, StableTail, parse_family,
                              validate_for)


def test_weight_examples():
    assert Geometric(F(1, 2)).weight(2) == F(1, 8)
    assert StableTail(F(3, 2), 0, F(1, 2)).weight(3) == F(1, 32)
    d = PolyExp((1,))
    for i in range(8):
        assert d.weight(i) == F(1, math.factorial(i))
    assert d.scale == pytest.approx(math.exp(-1))


def test_stabletail_first_weights():
    d = StableTail(F(3, 2), 0, F(1, 2))
    assert tuple(d.weights(2)[:2]) == (F(1, 2), F(1, 4))
    # the generating function at z=1 is 1
    assert sum(d.pmf(20000)) == pytest.approx(1, abs=5e-3)


def test_stabletail_tail_closed_form():
    d = StableTail(F(3, 2), 0, F(1, 2))
    w = d.pmf(400)
    assert d.tail(50) == pytest.approx(1 - w[:51].sum(), rel=1e-9)


def test_mean_examples():
    assert Geometric(F(1, 2)).mean() == 1
    assert StableTail(F(3, 2), 0, F(1, 2)).mean() == 1
    assert Finite((F(1, 2), 0, F(1, 2))).mean() == 1
    assert float(PolyExp((1,)).mean()) == pytest.approx(1)
    assert float(PolyExp((1, F(1, 2))).mean()) == pytest.approx(2)


def test_polyexp_recurrence_against_series():
    # exp(z + z^2/2) counts involutions: [z^n] = I(n)/n!
    inv = [1, 1, 2, 4, 10, 26, 76, 232, 764]
    d = PolyExp((1, F(1, 2)))
    for n, v in enumerate(inv):
        assert d.weight(n) == F(v, math.factorial(n))
    assert d.pmf(60).sum() == pytest.approx(1)


def test_polyexp_rejects_periodic():
    with pytest.raises(ValueError):
        PolyExp((0, 1))


def test_geometric_pmf_and_tail():
    d = Geometric(F(1, 3))
    p = d.pmf(10)
    assert p[0] == pytest.approx(1 / 3)
    assert d.tail(3) == pytest.approx((2 / 3) ** 4)


def test_powerlaw_integer_exponent_is_exact():
    d = PowerLaw(F(2), c=1, w0=F(1, 2))
    assert d.weight(3) == F(1, 27)
    assert d.weight(0) == F(1, 2)
    assert d.total_mass() == pytest.approx(0.5 + 1.2020569031595942)
    assert d.pmf(1000).sum() == pytest.approx(1, abs=1e-5)


def test_validate_for():
    assert validate_for(Geometric(F(1, 2)), "leaves") == []
    probs = validate_for(Finite((F(1, 2), 0, F(1, 2))), "leaves")
    assert any("mu(1)" in p for p in probs)
    probs = validate_for(StableTail(F(3, 2), 0, 1), "internal")
    assert any("1 - m - c*alpha" in p for p in probs)
    assert validate_for(Finite((F(1, 2), 0, F(1, 2))), "internal") == []


@pytest.mark.parametrize("text,expected", [
    ("geometric:p=1/2", Geometric(F(1, 2))),
    ("finite:[1/2,0,1/2]", Finite((F(1, 2), 0, F(1, 2)))),
    ("polyexp:a=[1,1/2]", PolyExp((1, F(1, 2)))),
    ("stabletail:alpha=3/2,m=0,c=1/2", StableTail(F(3, 2), 0, F(1, 2))),
    ("stabletail:alpha=3/2,c=1/2", StableTail(F(3, 2), 0, F(1, 2))),
    ("powerlaw:beta=2", PowerLaw(F(2))),
])
def test_parse_family(text, expected):
    d = parse_family(text)
    assert d == expected
    assert parse_family(d.spec()) == d


@pytest.mark.parametrize("text", [
    "geometric", "geometric:q=1/2", "geometric:p=x", "finite:[1,2", "finite:[1,a]",
    "nosuch:p=1", "geometric:p=1/2,p=1/3", "geometric:p=2",
])
def test_parse_family_errors(text):
    with pytest.raises(SpecParseError) as info:
        parse_family(text)
    assert 0 <= info.value.position <= len(text)


def test_support_upto():
    d = Finite((F(1, 3), 0, F(1, 3), F(1, 3)))
    assert list(d.support_upto(10)) == [0, 2, 3]
    assert d.max_index() == 3
    assert Geometric(F(1, 2)).max_index() is None
    assert np.isclose(d.pmf(5).sum(), 1)
