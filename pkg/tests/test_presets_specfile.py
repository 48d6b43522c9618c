import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullholo.presets import PRESETS, get_preset
from nullholo.rational import RationalFunction, is_infinity
from nullholo.specfile import SpecParseError, SurfaceFile, dumps, from_form, loads
from nullholo.surface_geom import chern_osserman_check, end_completeness, total_curvature

PRESET_CASES = [
    ("plane", {}),
    ("nilpotent", {}),
    ("catenoid-cousin", dict(mu=0.3, a=0.0, b=1.0)),
    ("catenoid-cousin", dict(mu=0.0, a=1.0, b=2.0)),
    ("catenoid-cousin", dict(mu=0.2, a=0.25, b=1.5)),
    ("s5-family", {}),
    ("s5-family", dict(c=0.01)),
]
IDS = [f"{n}-{'-'.join(f'{k}{v}' for k, v in p.items())}" for n, p in PRESET_CASES]
EXPECTED_K = {"plane": 0, "nilpotent": 2, "catenoid-cousin": 2, "s5-family": 4}


@pytest.fixture(scope="module", params=PRESET_CASES, ids=IDS)
def preset(request):
    name, params = request.param
    return name, params, get_preset(name, **params)


def test_preset_names():
    assert set(PRESETS) == {"plane", "nilpotent", "catenoid-cousin", "s5-family"}
    with pytest.raises(ValueError, match="unknown preset"):
        get_preset("helicoid")


def test_completeness_transfers(preset):
    _, _, s = preset
    for end, row in end_completeness(s).items():
        assert (row["primal"] <= -1) == (row["dual"] <= -1), end


def test_dual_end_orders_bounded(preset):
    _, _, s = preset
    for end, row in end_completeness(s).items():
        assert row["dual"] <= -2 + 1e-6, end


def test_degree_consistency(preset):
    name, params, s = preset
    if name == "catenoid-cousin" and (params["b"] - params["a"]) % 1:
        with pytest.raises(ValueError, match="single-valued"):
            total_curvature(s, "dual")
        return
    tc = total_curvature(s, "dual", quadrature=True)
    assert tc.k == EXPECTED_K[name]
    assert tc.degree_from_quadrature == tc.k


def test_seed_chern_osserman_equality():
    v = chern_osserman_check(get_preset("s5-family"), "dual")
    assert (v.lhs, v.rhs, v.euler_char_M, v.ends) == (4, 4, -1, 3)
    assert v.equality


# spec files

ENNEPER = """\
# Enneper surface in the plane frame
label: enneper
kind: weierstrass
frame: plane-frame
g: z
g: 0
omega: 1
"""


def test_weierstrass_file_builds_form():
    spec = loads(ENNEPER)
    form = spec.to_form()
    assert spec.label == "enneper"
    assert [e for e in form.ends if is_infinity(e)]


def test_matrix_file_round_trip():
    text = "n: 2\ndesignation: right\nentry 1 2: 1/z^2 + z\npunctures: 0, inf\n"
    spec = loads(text)
    assert loads(dumps(spec)) == spec
    assert spec.to_surface().dual is not None


def test_from_form_round_trip():
    s = get_preset("nilpotent")
    spec = from_form(s.primal, "nil")
    again = loads(dumps(spec)).to_form()
    z = np.array([0.3 + 0.2j, -1.1 + 0.5j])
    assert np.allclose(again.evaluate(z), s.primal.evaluate(z), rtol=1e-13)


small_int = st.integers(-4, 4)
poly = st.lists(small_int, min_size=1, max_size=3).filter(any)
entry = st.tuples(poly, st.sampled_from([[1], [0, 1], [1, 1], [0, 0, 1]]))


@given(
    st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), entry, min_size=1, max_size=4),
    st.sampled_from(["left", "right"]),
    st.lists(st.sampled_from([0, -1, 2j, math.inf]), unique=True, max_size=3),
    st.text("abcxyz_", max_size=8),
)
def test_round_trip_random(entries, designation, punctures, label):
    spec = SurfaceFile(
        label=label,
        n=3,
        designation=designation,
        punctures=list(punctures),
        entries={k: RationalFunction(np.array(n, dtype=complex), np.array(d, dtype=complex)) for k, (n, d) in entries.items()},
    )
    assert loads(dumps(spec)) == spec


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("n: 2\nentry 1 1 z\n", 2, 1),
        ("n: 2\nentry 1 1: z +* 2\n", 2, 16),
        ("kind: matrix\ngenus: 1\n", 2, 8),
        ("n: 2\nentry 3 1: z\n", 2, 1),
        ("n: 2\nfoo: 3\n", 2, 1),
        ("n: 2\nn: 3\n", 2, 1),
        ("n: 2\npunctures: 0,  1+q\n", 2, 16),
        ("kind: weierstrass\nframe: nope\n", 2, 8),
    ],
)
def test_parse_errors_locate(text, line, column):
    with pytest.raises(SpecParseError) as info:
        loads(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(info.value)


def test_base_point_on_puncture_rejected():
    with pytest.raises(SpecParseError, match="base point"):
        loads("n: 2\nbase_point: 0\npunctures: 0\n")
