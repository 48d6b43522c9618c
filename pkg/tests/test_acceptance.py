"""Acceptance criteria 1-9 at their stated tolerances.

Each test records PASS/FAIL through the ``criterion`` fixture; the terminal
summary prints one line per criterion.  Criteria that cannot hold as stated
run faithfully and are marked xfail(strict=True); see notes/decisions.md.
"""
import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_traceless
from nullholo.catenoid import CatenoidCousinParams
from nullholo.frobenius import LaurentODE, classify_singularity, frobenius_series, series_vs_transport
from nullholo.lie_core import PLANE_FRAME
from nullholo.mero_forms import (
    MeromorphicMatrixForm,
    WeierstrassData,
    nilpotent_example_dual_form,
    nilpotent_example_form,
    nilpotent_lift,
    residue,
    weierstrass_to_form,
)
from nullholo.path_ode import Tolerances, circle_path, integrate_linear, line_path, monodromy
from nullholo.perturb import A0, first_order_matrices, jacobian_rank, monodromies, newton_solve
from nullholo.presets import get_preset
from nullholo.rational import RationalFunction
from nullholo.surface_geom import (
    catenoid_cousin_surface,
    chern_osserman_check,
    dual_form_numeric,
    end_completeness,
    finn_isoperimetric,
    gauss_curvature,
    metric_order,
    total_curvature,
)

FOUR_PI = 4 * math.pi
LEDGER = "see notes/decisions.md"


# 1 ---------------------------------------------------------------------------


def _catenoid_case(criterion, mu, a, b):
    t0 = time.perf_counter()
    try:
        s = catenoid_cousin_surface(CatenoidCousinParams(mu, a, b))
        tc = total_curvature(s, "dual", quadrature=True)
        co = chern_osserman_check(s, "dual")
    except ValueError as exc:
        criterion(1, False, f"({mu},{a},{b}) {exc}")
        raise
    dt = time.perf_counter() - t0
    rel = abs(tc.quadrature - FOUR_PI) / FOUR_PI
    ok = tc.k == 2 and tc.exact == FOUR_PI and rel <= 1e-3 and abs(co.slack) <= 1e-6 and co.equality and dt < 10
    criterion(1, ok, f"({mu},{a},{b}) k={tc.k} quad_rel={rel:.2e} slack={co.slack:.1e} t={dt:.2f}s")
    assert tc.k == 2 and tc.exact == FOUR_PI
    assert rel <= 1e-3
    assert abs(co.slack) <= 1e-6 and co.equality
    assert dt < 10


@pytest.mark.parametrize("mu, a, b", [(0.3, 0.0, 1.0), (0.0, 1.0, 2.0)])
def test_criterion1_catenoid_cousin_equality(criterion, mu, a, b):
    _catenoid_case(criterion, mu, a, b)


@pytest.mark.xfail(strict=True, raises=ValueError, reason=f"(0,0,1) makes the lift constant, so no dual metric exists; {LEDGER}")
def test_criterion1_catenoid_cousin_equality_degenerate(criterion):
    _catenoid_case(criterion, 0.0, 0.0, 1.0)


# 2 ---------------------------------------------------------------------------


def test_criterion2_seed_total_curvature(criterion):
    t0 = time.perf_counter()
    s = get_preset("s5-family")
    tcs = [total_curvature(s, w, quadrature=True) for w in ("primal", "dual")]
    cos = [chern_osserman_check(s, w) for w in ("primal", "dual")]
    dt = time.perf_counter() - t0
    ok = (
        all(tc.k == 4 and tc.exact == 8 * math.pi for tc in tcs)
        and all((v.lhs, v.rhs, v.euler_char_M, v.ends) == (4, 4, -1, 3) and v.equality for v in cos)
        and dt < 10
    )
    criterion(2, ok, f"TA/pi={tcs[0].exact / math.pi:g} lhs={cos[0].lhs:g} rhs={cos[0].rhs:g} chi={cos[0].euler_char_M} r={cos[0].ends} t={dt:.2f}s")
    assert ok


# 3 ---------------------------------------------------------------------------


def test_criterion3_jacobian_rank(criterion):
    t0 = time.perf_counter()
    r = jacobian_rank(A0)
    s = r.singular_values
    sigma9 = s[8] if len(s) > 8 else 0.0  # an 8 x 14 matrix has no ninth singular value
    dt = time.perf_counter() - t0
    ok = r.rank == 8 and s[7] >= 1e3 * sigma9 and s[7] > r.threshold and dt < 30
    criterion(3, ok, f"rank={r.rank} sigma8={s[7]:.6g} sigma9={sigma9:g} t={dt:.2f}s")
    assert ok


# 4 ---------------------------------------------------------------------------


def _first_order_errors(a, c):
    rhos = monodromies(c, a)
    M = first_order_matrices(a)
    errs = []
    for j, name in enumerate(("gamma1", "gamma2")):
        s = rhos[name] @ rhos[name].conj().T
        errs.append(np.linalg.norm((s - np.eye(3)) / c - M[j]) / np.linalg.norm(M[j]))
    return np.array(errs)


@pytest.mark.xfail(strict=True, reason=f"remainder relative to the first-order term is ~30 c |a7|; ~3e-3 at c=1e-4; {LEDGER}")
def test_criterion4_first_order_law(criterion):
    t0 = time.perf_counter()
    a = A0.copy()
    a[6] = 1j  # the seed has vanishing periods, so rotate omega to make them nonzero
    errs = {c: _first_order_errors(a, c) for c in (1e-3, 1e-4, 1e-5)}
    ratios = np.array([errs[1e-3] / errs[1e-4], errs[1e-4] / errs[1e-5]])
    dt = time.perf_counter() - t0
    linear = bool(np.all((ratios > 8) & (ratios < 12)))
    ok = bool(np.all(errs[1e-4] <= 1e-3)) and linear and dt < 60
    criterion(4, ok, f"rel_err(c=1e-4)={errs[1e-4].max():.2e} ratios={ratios.min():.2f}..{ratios.max():.2f} t={dt:.2f}s")
    assert np.all(errs[1e-4] <= 1e-3)
    assert linear and dt < 60


# 5 ---------------------------------------------------------------------------


def test_criterion5_newton_closure(criterion):
    t0 = time.perf_counter()
    st = newton_solve(0.01)
    dt = time.perf_counter() - t0
    devs = st.unitary_deviations
    ok = st.residual <= 1e-10 and max(devs.values()) <= 1e-8 and set(st.stage_degrees.values()) == {4}
    criterion(5, ok, f"|phi|={st.residual:.2e} max_dev={max(devs.values()):.2e} k_path={sorted(set(st.stage_degrees.values()))} t={dt:.1f}s")
    assert ok


# 6 ---------------------------------------------------------------------------


def test_criterion6_frobenius_oracle(criterion, rng):
    euler = LaurentODE(np.diag([0.25, -0.25]), [])
    d_euler = series_vs_transport(euler, frobenius_series(euler, 0.25, [1, 0], J=30), 0.5).deviation
    expo = LaurentODE(np.zeros((1, 1)), [np.ones((1, 1))])
    d_exp = series_vs_transport(expo, frobenius_series(expo, 0, [1], J=30), 0.5).deviation
    mono = []
    for _ in range(5):
        R = random_traceless(rng, 3, rng.uniform(0.2, 1.0))
        form = MeromorphicMatrixForm.from_constant(R, "1/z", designation="right")
        rho = monodromy(form, circle_path(0, 1.0), "right", Tolerances(1e-12, 1e-14))
        mono.append(np.max(np.abs(rho - expm(2j * np.pi * R))))
    ok = d_euler <= 1e-9 and d_exp <= 1e-9 and max(mono) <= 1e-8
    criterion(6, ok, f"euler={d_euler:.1e} exp={d_exp:.1e} expm_max={max(mono):.1e}")
    assert ok


# 7 ---------------------------------------------------------------------------

REASONS = {"all-eigenvalues-zero ⟹ R=0 contradiction", "logarithmic monodromy"}


def _random_nilpotent_form(rng):
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    gi = np.linalg.inv(g)
    U1, U2 = (np.triu(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)), 1) for _ in range(2))
    R, H = g @ U1 @ gi, g @ U2 @ gi  # strictly upper triangular in a common basis: null
    ents = [[RationalFunction([R[i, j], H[i, j]], [0, 1]) for j in range(3)] for i in range(3)]
    return MeromorphicMatrixForm.with_detected_punctures(ents)


def test_criterion7_classifier(criterion, rng):
    bad = []
    worst = 0.0
    for k in range(20):
        form = _random_nilpotent_form(rng)
        rep = classify_singularity(form, 0)
        R = residue(form, 0)
        worst = max(worst, abs(np.trace(R @ R)))
        if rep.su_monodromy_possible is not False or rep.reason not in REASONS:
            bad.append((k, rep.verdict, rep.reason))
    ok = not bad and worst <= 1e-12
    criterion(7, ok, f"forms=20 bad={bad} max|trR^2|={worst:.1e}")
    assert ok


# 8 ---------------------------------------------------------------------------

PRESETS = [
    ("plane", {}),
    ("nilpotent", {}),
    ("catenoid-cousin", dict(mu=0.3, a=0.0, b=1.0)),
    ("catenoid-cousin", dict(mu=0.0, a=1.0, b=2.0)),
    ("catenoid-cousin", dict(mu=0.2, a=0.25, b=1.5)),
    ("s5-family", {}),
    ("s5-family", dict(c=0.01)),
]


def _sample_points(form, count=15, extent=2.5):
    x = np.linspace(-extent, extent, count)
    pts = (x[:, None] + 1j * x[None, :]).ravel()
    ends = [complex(e) for e in form.ends if not math.isinf(abs(e))]
    return np.array([p for p in pts if all(abs(p - e) > 0.05 for e in ends)])


def _random_weierstrass(rng):
    c = rng.integers(-2, 3, size=5)
    g = (RationalFunction([c[0], c[1] or 1], [0, 1]), RationalFunction([c[2], 1], [1, 1]))
    return weierstrass_to_form(WeierstrassData(g, RationalFunction([1 + abs(c[3])], [0, 0, 1]), PLANE_FRAME))


def test_criterion8_structural_invariants(criterion, rng):
    t0 = time.perf_counter()
    parts = {}

    drift = 0.0
    for _ in range(10):
        R, S = random_traceless(rng), random_traceless(rng)
        path = line_path(0, np.exp(1j * rng.uniform(0, 2 * np.pi)))
        res = integrate_linear(lambda z: R / (z + 2) + S * z, path, "left", np.eye(3))
        drift = max(drift, res.det_drift)
    parts["det_drift"] = (drift <= 1e-9, f"{drift:.1e}")

    inv = 0.0
    for a, b, c in (("z", "1/z", "1"), ("z^2", "1/(z-1)", "2")):
        F = nilpotent_lift(a, b, c)
        pts = [0.7 + 0.4j, -1 + 1j, 2 - 0.5j]
        neg = (-nilpotent_example_dual_form(a, b, c)).replace(designation="left")
        dd = dual_form_numeric(neg, pts, base=0.5, F_base=np.linalg.inv(F(0.5)), fit_ends=False)
        h0 = np.sum(np.abs(nilpotent_example_form(a, b, c).evaluate(np.array(pts))) ** 2, axis=(1, 2))
        h2 = np.sum(np.abs(dd.values) ** 2, axis=(1, 2))
        inv = max(inv, float(np.max(np.abs(h2 - h0) / h0)))
    parts["involution"] = (inv <= 1e-7, f"{inv:.1e}")

    kmax = -math.inf
    surfaces = [get_preset(n, **p) for n, p in PRESETS]
    forms = [f for s in surfaces for f in (s.primal, s.dual) if f is not None and hasattr(f, "ends") and not hasattr(f, "lift")]
    forms += [_random_weierstrass(rng) for _ in range(10)]
    for f in forms:
        kmax = max(kmax, float(np.max(gauss_curvature(f, _sample_points(f)))))
    parts["K<=0"] = (kmax <= 1e-12, f"{kmax:.1e}")

    worst_dual, transfer = -math.inf, True
    for s in surfaces:
        for row in end_completeness(s).values():
            worst_dual = max(worst_dual, row["dual"])
            transfer &= (row["primal"] <= -1) == (row["dual"] <= -1)
    parts["dual_order<=-2"] = (worst_dual <= -2 + 1e-6, f"{worst_dual:.4g}")
    parts["completeness_transfer"] = (transfer, str(transfer))

    dt = time.perf_counter() - t0
    ok = all(v[0] for v in parts.values())
    criterion(8, ok, " ".join(f"{k}={v[1]}" for k, v in parts.items()) + f" t={dt:.1f}s")
    assert ok


# 9 ---------------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason=f"the functional gives t = -ord - 1 (1 at order -2 ends), not -ord; {LEDGER}")
def test_criterion9_finn_functional(criterion):
    model = finn_isoperimetric(lambda z: np.abs(z) ** -4.0, 0)
    s = get_preset("catenoid-cousin", mu=0.3, a=0.0, b=1.0)
    cat = finn_isoperimetric(s.dual, 0)
    targets = [(-(-2), model.estimate), (-metric_order(s.dual, 0), cat.estimate)]
    ok = all(abs(t - target) <= 1e-2 for target, t in targets)
    criterion(9, ok, f"model t={model.estimate:.6f} (want 2) catenoid t={cat.estimate:.6f} (want {targets[1][0]:g})")
    assert ok
