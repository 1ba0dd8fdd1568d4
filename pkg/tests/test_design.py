import math

import pytest
from hypothesis import given, strategies as st

from chargekin.design import (
    FIELD_ORDER,
    DesignParams,
    JointVector,
    ZOE_DESIGN,
    dump_design,
    load_design,
    validate_joints,
)
from chargekin.errors import ConfigParseError, InvariantError, MissingKeyError, StrokeError, UnknownKeyError

ZOE_TEXT = """
# main sizes
L = 532
L2 = 1300
L3 = 160
e_py = 20
rho1_min = 0
rho1_max = 500
rho2_min = 0
rho2_max = 500
rho3_min = 0
rho3_max = 200
theta = 0.5236
"""


def test_load_zoe():
    p = load_design(ZOE_TEXT)
    assert (p.L, p.L2, p.L3) == (532.0, 1300.0, 160.0)
    assert p.e1x == p.e1y == p.e2x == p.e2y == p.e3y == p.e3z == p.e4y == p.e4z == 0.0
    assert p.e_py == 20.0
    assert p.theta == 0.5236


def test_l2_must_exceed_l3():
    text = ZOE_TEXT.replace("L2 = 1300", "L2 = 100")
    with pytest.raises(InvariantError, match="L2 > L3"):
        load_design(text)


def test_missing_theta_is_listed():
    text = ZOE_TEXT.replace("theta = 0.5236", "")
    with pytest.raises(MissingKeyError) as exc:
        load_design(text)
    assert exc.value.missing == ["theta"]


def test_missing_list_is_complete():
    with pytest.raises(MissingKeyError) as exc:
        load_design("L = 1\n")
    assert "L" not in exc.value.missing
    assert {"L2", "L3", "theta", "rho3_max"} <= set(exc.value.missing)


def test_unknown_key_rejected():
    with pytest.raises(UnknownKeyError) as exc:
        load_design(ZOE_TEXT + "bogus = 3\n")
    assert exc.value.key == "bogus"


@pytest.mark.parametrize("line", ["L2 1300", "L2 = abc", "L2 = nan", "L2 = inf"])
def test_parse_error_reports_line(line):
    text = ZOE_TEXT.replace("L2 = 1300", line)
    with pytest.raises(ConfigParseError) as exc:
        load_design(text)
    assert exc.value.lineno == 4


@pytest.mark.parametrize("field", FIELD_ORDER)
@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(field, bad):
    with pytest.raises(InvariantError):
        ZOE_DESIGN.replace(**{field: bad})


@pytest.mark.parametrize(
    "changes, invariant",
    [
        (dict(L=0), "L > 0"),
        (dict(L3=-1), "L3 >= 0"),
        (dict(rho1_min=10, rho1_max=5), "rho1_min <= rho1_max"),
        (dict(theta=0.0), "0 < theta < pi/2"),
        (dict(theta=math.pi / 2), "0 < theta < pi/2"),
        (dict(e_py=0.0), "e_py > 0"),
    ],
)
def test_invariants(changes, invariant):
    with pytest.raises(InvariantError) as exc:
        ZOE_DESIGN.replace(**changes)
    assert exc.value.invariant == invariant


def test_dump_order_is_fixed():
    keys = [ln.split("=")[0].strip() for ln in dump_design(ZOE_DESIGN).splitlines() if not ln.startswith("#")]
    assert tuple(keys) == FIELD_ORDER


finite = st.floats(min_value=-1e4, max_value=1e4, allow_nan=False, allow_infinity=False)


@given(
    L=st.floats(1e-3, 1e4), extra=st.floats(1e-3, 1e4), L3=st.floats(0, 1e3),
    strokes=st.lists(st.tuples(finite, st.floats(0, 1e3)), min_size=3, max_size=3),
    theta=st.floats(1e-6, math.pi / 2 - 1e-6), offs=st.lists(finite, min_size=8, max_size=8),
    e_py=st.floats(1e-6, 1e3),
)
def test_round_trip(L, extra, L3, strokes, theta, offs, e_py):
    (a, da), (b, db), (c, dc) = strokes
    p = DesignParams(
        L=L, L2=L3 + extra, L3=L3, rho1_min=a, rho1_max=a + da, rho2_min=b, rho2_max=b + db,
        theta=theta, rho3_min=c, rho3_max=c + dc, e_py=e_py,
        **dict(zip(["e1x", "e1y", "e2x", "e2y", "e3y", "e3z", "e4y", "e4z"], offs)),
    )
    assert load_design(dump_design(p)) == p


def test_validate_interior():
    q = validate_joints(ZOE_DESIGN, JointVector(88, 76, 0))
    assert q.validated


def test_validate_lower_bound():
    with pytest.raises(StrokeError) as exc:
        validate_joints(ZOE_DESIGN, JointVector(-1, 0, 0))
    assert (exc.value.actuator, exc.value.bound) == ("rho1", "min")


def test_validate_closed_interval():
    assert validate_joints(ZOE_DESIGN, JointVector(0, 500, 0)).validated
    assert validate_joints(ZOE_DESIGN, JointVector(500, 0, 200)).validated


def test_validate_rho3_optional():
    assert validate_joints(ZOE_DESIGN, JointVector(10, 10)).validated


@given(
    q=st.tuples(st.floats(-100, 600), st.floats(-100, 600), st.floats(-100, 300)),
    grow=st.tuples(*[st.floats(0, 100)] * 6),
)
def test_validate_monotone(q, grow):
    p = ZOE_DESIGN
    wide = p.replace(
        rho1_min=p.rho1_min - grow[0], rho1_max=p.rho1_max + grow[1],
        rho2_min=p.rho2_min - grow[2], rho2_max=p.rho2_max + grow[3],
        rho3_min=p.rho3_min - grow[4], rho3_max=p.rho3_max + grow[5],
    )
    try:
        validate_joints(p, JointVector(*q))
    except StrokeError:
        return
    assert validate_joints(wide, JointVector(*q)).validated
