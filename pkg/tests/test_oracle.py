import math

import pytest

from asmpc.errors import OracleDomainError
from asmpc.oracle import eval_plain
from asmpc.program import parse_program


def _eval(text, **env):
    program = parse_program(text)
    return eval_plain(program, env)


def test_square():
    assert _eval("f = pow(x, exponents=[2])", x=3.0)["f"] == 9.0


def test_log_absolute_value_semantics():
    out = _eval("f = log(x, base=e)", x=-8.0)["f"]
    assert out == pytest.approx(math.log(8.0))


def test_cmp_equal():
    assert _eval("c = cmp(x, y)", x=1.0, y=1.0)["c"] == 0
    assert _eval("c = cmp(x, y)", x=2.0, y=1.0)["c"] == 1
    assert _eval("c = cmp(x, y)", x=0.0, y=1.0)["c"] == -1


def test_linear_and_chain():
    out = _eval("f = linear(x, y, coeffs=[3, 4], bias=1)\ng = mul(f, x)",
                x=2.0, y=1.0)
    assert out["f"] == 11.0
    assert out["g"] == 22.0


def test_reshares_are_identities():
    out = _eval("u = addres(x)\nf = mulres(u)", x=-2.5)
    assert out["u"] == -2.5
    assert out["f"] == -2.5


def test_division_conventions():
    assert _eval("f = div(x, y)", x=0.0, y=5.0)["f"] == 0.0
    with pytest.raises(OracleDomainError) as err:
        _eval("f = div(x, y)", x=1.0, y=0.0)
    assert "f" in str(err.value)


def test_pow_zero_rules():
    assert _eval("f = pow(x, exponents=[0])", x=0.0)["f"] == 1.0
    assert _eval("f = pow(x, exponents=[3])", x=0.0)["f"] == 0.0
    with pytest.raises(OracleDomainError):
        _eval("f = pow(x, exponents=[-2])", x=0.0)


def test_trig_family():
    out = _eval("s = sin(x)\nc = cos(x)\nt = tan(x)", x=0.5)
    assert out["s"] == math.sin(0.5)
    assert out["c"] == math.cos(0.5)
    assert out["t"] == pytest.approx(math.tan(0.5), rel=1e-15)


def test_arcsine_family_mirrors_the_series():
    x = 0.5
    series = _eval("f = asin(x)", x=x)["f"]
    assert series == pytest.approx(math.asin(x), abs=1e-4)
    assert series != math.asin(x)  # finite series, not the library function
    acos = _eval("f = acos(x)", x=x)["f"]
    assert acos == pytest.approx(math.pi / 2 - series, rel=1e-15)
    atan = _eval("f = atan(x)", x=x)["f"]
    assert atan == pytest.approx(math.atan(x), abs=1e-4)


def test_pre_sign_rules():
    assert _eval("f = pre(x, alpha=0.5)", x=4.0)["f"] == 2.0
    assert _eval("f = pre(x, alpha=3)", x=-2.0)["f"] == -8.0
    assert _eval("f = pre(x, alpha=0.5, positive_domain=true)", x=-4.0)["f"] == 2.0
    with pytest.raises(OracleDomainError):
        _eval("f = pre(x, alpha=0.5)", x=-4.0)


def test_pse_domain():
    assert _eval("f = pse(x, y)", x=2.0, y=3.0)["f"] == 8.0
    assert _eval("f = pse(x, y)", x=0.0, y=5.0)["f"] == 0.0
    assert _eval("f = pse(x, y)", x=-2.0, y=3.0)["f"] == -8.0
    with pytest.raises(OracleDomainError):
        _eval("f = pse(x, y)", x=-2.0, y=0.5)


def test_missing_input():
    with pytest.raises(OracleDomainError):
        _eval("f = mul(x, y)", x=1.0)


def test_log_of_zero():
    with pytest.raises(OracleDomainError):
        _eval("f = log(x, base=e)", x=0.0)
