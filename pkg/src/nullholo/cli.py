"""Command-line front end.

Every subcommand prints sorted ``key=value`` lines, a ``---`` separator and a
short human summary.  With ``--out DIR`` the same text and any CSV tables are
written there (existing files are kept unless ``--force`` is given).

Exit status: 0 all checks passed; 1 analysis error; 2 usage or parse error;
3 refusing to overwrite; 10 + i when check i (1-based, listed per subcommand
in ``--help``) is the first one to fail.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import frobenius, perturb, presets, specfile, surface_geom
from .catenoid import ExponentForm
from .lie_core import NAMED_FRAMES, frame_gram_check
from .mero_forms import MeromorphicMatrixForm, is_null_form
from .path_ode import Tolerances, default_clearance, loop_around, transport, unitary_deviation
from .rational import RationalFunction, is_infinity, parse_complex

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_EXISTS, EXIT_CHECK = 0, 1, 2, 3, 10

CHECKS = {
    "validate": ["frame_gram", "traceless", "null", "poles_declared"],
    "monodromy": ["det_drift", "unitary"],
    "frobenius": ["null_residue_trace"],
    "curvature": ["nonpositive_curvature", "degree_consistent"],
    "chern-osserman": ["inequality_holds", "equality"],
    "dual": ["fit_conditioned", "dual_order_bound"],
    "perturb": ["phi_converged", "sigma_unitary", "degree_locked"],
    "mesh": ["hermitian_unimodular"],
}

CSV_DOCS = {
    "curvature": "curvature_samples.csv: re_z, im_z, h, K",
    "dual": "dual_samples.csv: re_z, im_z, then re_ij, im_ij for every entry (row-major)",
    "perturb": "perturb_trace.csv: c, iteration, residual, step_norm, damping",
    "mesh": "mesh.csv: re_z, im_z, f_ii for each i, then re_f_ij, im_f_ij for i < j",
    "monodromy": "monodromy.csv: loop, i, j, re_rho, im_rho, re_sigma, im_sigma",
}


class CheckFailed(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return f"{x:.12g}"
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        sign = "-" if x.imag < 0 else "+"
        return f"{_fmt(x.real)}{sign}{_fmt(abs(x.imag))}i"
    return str(x)


def _e(x, digits: int = 3) -> str:
    return f"{float(x) + 0.0:.{digits}e}"


def _end_name(p) -> str:
    return "inf" if is_infinity(p) else _fmt(complex(p))


class Report:
    def __init__(self, name: str):
        self.name = name
        self.keys: dict[str, str] = {}
        self.summary: list[str] = []
        self.tables: dict[str, tuple[list[str], list[list]]] = {}
        self.checks: list[tuple[str, bool]] = []

    def set(self, key: str, value) -> None:
        self.keys[key] = _fmt(value)

    def check(self, name: str, ok: bool) -> None:
        self.checks.append((name, bool(ok)))
        self.set(f"check.{name}", "pass" if ok else "fail")

    def text(self) -> str:
        lines = [f"{k}={self.keys[k]}" for k in sorted(self.keys)]
        return "\n".join(lines + ["---"] + self.summary) + "\n"

    def exit_status(self) -> int:
        order = CHECKS[self.name]
        for name, ok in self.checks:
            if not ok:
                return EXIT_CHECK + order.index(name) + 1
        return EXIT_OK


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# inputs


def _tolerances(args) -> Tolerances:
    return Tolerances(args.ode_rtol, args.ode_atol)


def load_surface(args):
    if args.spec and args.preset:
        raise argparse.ArgumentTypeError("give either --spec or --preset, not both")
    if args.spec:
        sf = specfile.load(args.spec)
        return sf.to_surface(), sf.frame
    if not args.preset:
        raise argparse.ArgumentTypeError("one of --spec or --preset is required")
    name = args.preset
    if name == "catenoid-cousin":
        kw = dict(mu=args.mu, a=float(args.a), b=float(args.b))
        if args.dual_convention != "auto":
            return presets.get_preset(name, dual_convention=args.dual_convention, **kw), None
        try:
            return presets.get_preset(name, dual_convention="derived", **kw), None
        except ValueError:
            # constant lift: only the printed coefficient leaves a metric to study
            return presets.get_preset(name, dual_convention="printed", **kw), None
    if name == "nilpotent":
        a, b, c = args.nilpotent
        return presets.get_preset(name, a=a, b=b, c=c), None
    if name == "s5-family":
        return presets.get_preset(name, c=args.c), "s5-frame"
    if name == "plane":
        return presets.get_preset(name), "plane-frame"
    raise argparse.ArgumentTypeError(f"unknown preset {name!r}; choose from {', '.join(presets.PRESETS)}")


def _rational_forms(surface):
    out = []
    for which in ("primal", "dual"):
        f = surface.primal if which == "primal" else surface.dual
        if isinstance(f, MeromorphicMatrixForm):
            out.append((which, f))
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, rep: Report):
    surface, frame_name = load_surface(args)
    rep.set("label", surface.label)
    if frame_name:
        dev = float(np.max(np.abs(frame_gram_check(NAMED_FRAMES[frame_name])))) if len(NAMED_FRAMES[frame_name]) else 0.0
        rep.set("frame", frame_name)
        rep.set("frame.gram_deviation", _e(dev))
        rep.check("frame_gram", dev <= 1e-12)
    forms = _rational_forms(surface)
    ok_trace = ok_null = ok_poles = True
    for which, f in forms:
        trace = RationalFunction.constant(0)
        for i in range(f.n):
            trace = trace + f.entries[i][i]
        tr = float(np.max(np.abs(trace.num)))
        res = is_null_form(f)
        rep.set(f"{which}.trace_max_coefficient", _e(tr))
        rep.set(f"{which}.null", res.is_null)
        ok_trace &= tr <= 1e-12
        ok_null &= res.is_null
        found, inf = f.detected_poles()
        undeclared = [p for p in found if not f.is_declared(p)] + ([math.inf] if inf and not f.infinity else [])
        ok_poles &= not undeclared
        for e in f.ends:
            rep.set(f"{which}.pole_order[{_end_name(e)}]", f.pole_order(e))
    for which in ("primal", "dual"):
        f = surface.primal if which == "primal" else surface.dual
        if isinstance(f, ExponentForm):
            rep.set(f"{which}.null", f.is_null())
            ok_null &= f.is_null()
            for e in f.ends:
                rep.set(f"{which}.pole_order[{_end_name(e)}]", f.pole_order(e))
    rep.check("traceless", ok_trace)
    rep.check("null", ok_null)
    rep.check("poles_declared", ok_poles)
    rep.set("ends", surface.r)
    rep.summary.append(f"{surface.label}: {surface.r} end(s); forms checked: {', '.join(w for w, _ in forms) or 'exponent family'}")


def _loops_for(surface, args):
    if args.preset == "s5-family":
        return {name: perturb.LOOPS[name]() for name in ("gamma1", "gamma2", "gamma3")}
    base = surface.base_point
    finite = surface.finite_ends
    loops = {}
    for k, p in enumerate(finite):
        others = [abs(p - q) for q in finite if q != p]
        r = min([0.4, 0.5 * abs(base - p)] + [0.4 * d for d in others])
        loops[f"loop{k + 1}[{_end_name(p)}]"] = loop_around(base, p, r, min_clearance=0.5 * r)
    return loops


def cmd_monodromy(args, rep: Report):
    surface, _ = load_surface(args)
    tol = _tolerances(args)
    rows = []
    if args.preset == "s5-family":
        a = perturb.A0
        c = args.c if args.c else 0.0
        form = perturb.lift_coefficient(c, a) if c else None
        side = "right"
    else:
        form = surface.primal if surface.primal is not None else surface.dual
        side = getattr(form, "designation", "left")
    rep.set("label", surface.label)
    rep.set("side", side)
    worst_drift, worst_dev = 0.0, 0.0
    for name, loop in _loops_for(surface, args).items():
        if form is None:
            rho, drift = np.eye(3, dtype=complex), 0.0
        else:
            res = transport(form, loop, side, None, tol)
            rho, drift = res.end_matrix, res.det_drift
        sigma = rho @ rho.conj().T
        dev = unitary_deviation(rho)
        worst_drift, worst_dev = max(worst_drift, drift), max(worst_dev, dev)
        rep.set(f"{name}.unitary_deviation", _e(dev))
        rep.set(f"{name}.det_drift", _e(drift))
        for i in range(rho.shape[0]):
            for j in range(rho.shape[1]):
                rows.append([name, i + 1, j + 1, rho[i, j].real, rho[i, j].imag, sigma[i, j].real, sigma[i, j].imag])
        rep.summary.append(f"{name}: |rho rho* - I| = {dev:.3e}")
    rep.check("det_drift", worst_drift <= 1e-6)
    if args.require_unitary:
        rep.check("unitary", worst_dev <= 1e-8)
    rep.tables["monodromy.csv"] = (["loop", "i", "j", "re_rho", "im_rho", "re_sigma", "im_sigma"], rows)


def cmd_frobenius(args, rep: Report):
    surface, _ = load_surface(args)
    forms = _rational_forms(surface)
    if not forms:
        raise ValueError("the frobenius report needs a rational form")
    ok = True
    for which, f in forms:
        for e in f.ends:
            r = frobenius.classify_singularity(f, e)
            for k, v in r.as_lines().items():
                if k == "pole":
                    continue
                rep.set(f"{which}[{_end_name(e)}].{k}", v)
            if r.pole_order == 1 and r.is_null:
                ok &= abs(r.trace_square) <= 1e-12
            rep.summary.append(f"{which} end {_end_name(e)}: {r.verdict}" + (f" ({r.reason})" if r.reason else ""))
    rep.check("null_residue_trace", ok)


def _which_form(surface, which):
    if which == "auto":
        return "dual" if surface.dual is not None else "primal"
    return which


def cmd_curvature(args, rep: Report):
    surface, _ = load_surface(args)
    which = _which_form(surface, args.which)
    report = surface_geom.curvature_report(surface, which, args.grid, quadrature=not args.no_quadrature)
    rep.set("label", surface.label)
    rep.set("which", which)
    Ks = [K for _, _, K in report.samples]
    rep.set("samples", len(Ks))
    rep.set("K_max", _e(max(Ks)))
    rep.set("K_min", _e(min(Ks), 6))
    k = round(report.total_curvature_exact / (2 * math.pi))
    rep.set("k", k)
    rep.set("TA", report.total_curvature_exact)
    rep.set("TA_over_pi", 2 * k)
    for e, m in report.end_orders.items():
        rep.set(f"end_order[{_end_name(e)}]", m)
    consistent = True
    if report.total_curvature_quadrature is not None:
        rep.set("TA_quadrature", f"{report.total_curvature_quadrature:.9g}")
        rep.set("TA_quadrature_error", _e(report.quadrature_error))
        consistent = round(report.total_curvature_quadrature / (2 * math.pi)) == k
    rep.check("nonpositive_curvature", max(Ks) <= 1e-12)
    rep.check("degree_consistent", consistent)
    rep.tables["curvature_samples.csv"] = (["re_z", "im_z", "h", "K"], [[z.real, z.imag, h, K] for z, h, K in report.samples])
    rep.summary.append(f"{surface.label} ({which}): TA = 2 pi x {k}; max K on {len(Ks)} samples = {_e(max(Ks))}")


def cmd_chern_osserman(args, rep: Report):
    surface, _ = load_surface(args)
    sides = ["primal", "dual"] if args.which == "both" else [args.which]
    holds = eq = True
    rep.set("label", surface.label)
    for which in sides:
        v = surface_geom.chern_osserman_check(surface, which, quadrature=args.quadrature)
        prefix = f"{which}." if len(sides) > 1 else ""
        rep.set(prefix + "which", which)
        rep.set(prefix + "lhs", v.lhs)
        rep.set(prefix + "rhs", v.rhs)
        rep.set(prefix + "slack", v.slack)
        rep.set(prefix + "equality", v.equality)
        rep.set(prefix + "k", v.k)
        rep.set(prefix + "ends", v.ends)
        rep.set(prefix + "euler_char_M", v.euler_char_M)
        holds &= v.holds
        eq &= v.equality
        rep.summary.append(f"{which}: TA/2pi = {_fmt(v.lhs)} >= -chi(M) + r = {_fmt(v.rhs)}" + (" (equality)" if v.equality else ""))
    rep.check("inequality_holds", holds)
    if args.expect_equality:
        rep.check("equality", eq)
    if surface.metadata.get("dual_convention") == "printed":
        rep.summary.append("note: the printed dual coefficient is not dF F^-1 for this lift; metric-level check only")


def cmd_dual(args, rep: Report):
    surface, _ = load_surface(args)
    tol = _tolerances(args)
    form = surface.primal if surface.primal is not None and not isinstance(surface.primal, presets.TransportedLeftForm) else surface.dual
    base = surface.base_point
    probes = [parse_complex(p) for p in args.probe] if args.probe else [base + 0.25 * np.exp(1j * t) for t in (0.3, 2.0, 4.0)]
    F_base = surface.lift_at_base if getattr(form, "designation", "left") == "left" else None
    ds = surface_geom.dual_form_numeric(form, probes, base, F_base, tol=tol)
    rep.set("label", surface.label)
    rep.set("source", getattr(form, "designation", "left"))
    conditioned = True
    bound = True
    for e, fit in ds.fits.items():
        rep.set(f"fit[{_end_name(e)}].order", fit.order)
        rep.set(f"fit[{_end_name(e)}].metric_order", -fit.order)
        rep.set(f"fit[{_end_name(e)}].condition", _e(fit.condition))
        res = fit.residue if fit.residue is not None else np.zeros((form.n, form.n))
        rep.set(f"fit[{_end_name(e)}].residue", ";".join(_fmt(complex(np.round(x, 10))) for x in res.ravel()))
        conditioned &= fit.condition <= 1e8
        bound &= -fit.order <= -2 + 1e-6
    rep.check("fit_conditioned", conditioned)
    rep.check("dual_order_bound", bound)
    n = form.n
    header = ["re_z", "im_z"] + [f"{p}_{i + 1}{j + 1}" for i in range(n) for j in range(n) for p in ("re", "im")]
    rows = []
    for z, M in zip(ds.points, ds.values):
        row = [z.real, z.imag]
        for x in M.ravel():
            row += [x.real, x.imag]
        rows.append(row)
    rep.tables["dual_samples.csv"] = (header, rows)
    rep.summary.append(f"{len(rows)} probe samples; dual end orders " + ", ".join(f"{_end_name(e)}: {f.order}" for e, f in ds.fits.items()))


def cmd_perturb(args, rep: Report):
    tol = _tolerances(args) if args.ode_rtol != DEFAULT_ODE_RTOL else perturb.PHI_TOL
    st = perturb.newton_solve(args.c_target, args.schedule_factor, args.stages, fd_step=args.fd_step, tol=tol)
    rep.set("c", args.c_target)
    rep.set("residual", _e(st.residual))
    rep.set("iterations", len(st.history))
    rep.set("jacobian", st.jacobian_kind)
    for i, x in enumerate(st.a, 1):
        rep.set(f"a{i}", complex(x))
    for k, v in sorted(st.unitary_deviations.items()):
        rep.set(f"sigma_deviation.{k}", _e(v))
    stages = sorted({h.c for h in st.history})
    for h in st.history:
        rep.set(f"trace.stage{stages.index(h.c) + 1}.iter{h.iteration:02d}.residual", _e(h.residual))
    for i, c in enumerate(stages, 1):
        rep.set(f"trace.stage{i}.c", c)
    rep.set("k", st.degree)
    rep.set("TA_over_pi", 2 * st.degree)
    rep.check("phi_converged", st.residual <= 1e-10)
    rep.check("sigma_unitary", all(v <= 1e-8 for v in st.unitary_deviations.values()))
    rep.check("degree_locked", st.degree == 4)
    if args.c_target:
        surf = presets.s5_surface(args.c_target, st.a)
        v = surface_geom.chern_osserman_check(surf, "dual")
        rep.set("dual.lhs", v.lhs)
        rep.set("dual.rhs", v.rhs)
        rep.set("dual.equality", v.equality)
    rep.tables["perturb_trace.csv"] = (["c", "iteration", "residual", "step_norm", "damping"], [[h.c, h.iteration, h.residual, h.step_norm, h.damping] for h in st.history])
    rep.summary.append(f"c = {args.c_target:g}: |phi| = {st.residual:.2e} after {len(st.history)} Newton steps; TA(dual) = {2 * st.degree} pi")
    if not args.report:
        rep.tables.clear()


def cmd_mesh(args, rep: Report):
    surface, _ = load_surface(args)
    tol = _tolerances(args)
    finite = surface.finite_ends
    clear = 0.5 * default_clearance(finite) if finite else 0.1
    xs = np.linspace(-args.extent, args.extent, args.count)
    pts = [complex(x, y) for y in xs for x in xs if all(abs(complex(x, y) - p) > clear for p in finite)]
    lift = surface.lift
    if lift is None:
        form = surface.primal if isinstance(surface.primal, MeromorphicMatrixForm) else surface.dual
        side = form.designation
        punct = list(form.punctures)

        def lift(z):
            path = surface_geom.plan_path(surface.base_point, z, punct, min(default_clearance(punct), 0.45 * min(abs(z - p) for p in punct)) if punct else 0.25)
            return transport(form, path, side, surface.lift_at_base, tol, check_clearance=False).end_matrix

    n = surface.n
    rows = []
    worst = 0.0
    for z in pts:
        F = lift(z)
        f = F @ F.conj().T
        worst = max(worst, float(np.max(np.abs(f - f.conj().T))), abs(np.linalg.det(f) - 1))
        row = [z.real, z.imag] + [f[i, i].real for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                row += [f[i, j].real, f[i, j].imag]
        rows.append(row)
    header = ["re_z", "im_z"] + [f"f_{i + 1}{i + 1}" for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            header += [f"re_f_{i + 1}{j + 1}", f"im_f_{i + 1}{j + 1}"]
    rep.set("label", surface.label)
    rep.set("points", len(rows))
    rep.set("hermitian_unimodular_deviation", _e(worst))
    rep.check("hermitian_unimodular", worst <= 1e-8)
    rep.tables["mesh.csv"] = (header, rows)
    rep.summary.append(f"{len(rows)} surface points f = F F* on a {args.count}x{args.count} grid")


COMMANDS = {
    "validate": cmd_validate,
    "monodromy": cmd_monodromy,
    "frobenius": cmd_frobenius,
    "curvature": cmd_curvature,
    "chern-osserman": cmd_chern_osserman,
    "dual": cmd_dual,
    "perturb": cmd_perturb,
    "mesh": cmd_mesh,
}

HELP = {
    "validate": "frame Gram deviation, nullity and pole inventory",
    "monodromy": "transport around loops about each finite end",
    "frobenius": "classify each end as a singular point of the lift equation",
    "curvature": "curvature samples, end orders and total curvature",
    "chern-osserman": "compare TA/2pi with -chi(M) + r",
    "dual": "numerically transported dual form with Laurent fits",
    "perturb": "Newton continuation of the seven-parameter family",
    "mesh": "surface points f = F F^* for plotting",
}

DEFAULT_ODE_RTOL = 1e-10


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nullholo", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        epilog = "checks (exit 10+i on the first failure): " + ", ".join(f"{i + 1}={c}" for i, c in enumerate(CHECKS[name]))
        if name in CSV_DOCS:
            epilog += "\nCSV: " + CSV_DOCS[name]
        p = sub.add_parser(name, help=HELP[name], epilog=epilog, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--out", help="directory for the text report and CSV tables")
        p.add_argument("--force", action="store_true", help="overwrite existing output files")
        p.add_argument("--ode-rtol", type=float, default=DEFAULT_ODE_RTOL)
        p.add_argument("--ode-atol", type=float, default=1e-12)
        if name != "perturb":
            p.add_argument("--spec", help="surface spec file")
            p.add_argument("--preset", help="one of: " + ", ".join(presets.PRESETS))
            p.add_argument("--mu", type=float, default=0.0, help="catenoid-cousin mu")
            p.add_argument("--a", default="0", help="catenoid-cousin a")
            p.add_argument("--b", default="1", help="catenoid-cousin b")
            p.add_argument("--dual-convention", choices=("auto", "derived", "printed"), default="auto", help="catenoid-cousin dual form: dF F^-1 (derived), the variant with coefficient a+b (printed, metric-level only), or auto = derived unless the lift is constant")
            p.add_argument("--c", type=float, default=0.0, help="s5-family deformation scale")
            p.add_argument("--nilpotent", nargs=3, default=("z", "1/z", "1"), metavar=("A", "B", "C"), help="entries of the unipotent lift")
        if name == "monodromy":
            p.add_argument("--require-unitary", action="store_true", help="fail unless every monodromy is unitary to 1e-8")
        if name == "curvature":
            p.add_argument("--which", choices=("auto", "primal", "dual"), default="auto")
            p.add_argument("--grid", type=int, default=12)
            p.add_argument("--no-quadrature", action="store_true")
        if name == "chern-osserman":
            p.add_argument("--which", choices=("primal", "dual", "both"), default="dual")
            p.add_argument("--quadrature", action="store_true", help="also integrate the curvature numerically")
            p.add_argument("--expect-equality", action="store_true")
        if name == "dual":
            p.add_argument("--probe", action="append", help="probe point a+bi (repeatable)")
        if name == "perturb":
            p.add_argument("--c-target", type=float, default=0.01)
            p.add_argument("--schedule-factor", type=float, default=2.0)
            p.add_argument("--stages", type=int, default=4)
            p.add_argument("--fd-step", type=float, default=1e-7)
            p.add_argument("--report", action="store_true", help="also write the iteration trace CSV")
        if name == "mesh":
            p.add_argument("--extent", type=float, default=2.0)
            p.add_argument("--count", type=int, default=21)
        p.set_defaults(func=fn)
    return parser


def _write_outputs(rep: Report, out: str, force: bool) -> None:
    files = {f"{rep.name}.txt": rep.text()}
    files.update({name: _csv_text(h, rows) for name, (h, rows) in rep.tables.items()})
    os.makedirs(out, exist_ok=True)
    clash = [f for f in files if os.path.exists(os.path.join(out, f))]
    if clash and not force:
        raise FileExistsError(", ".join(clash))
    for fname, text in files.items():
        with open(os.path.join(out, fname), "w", encoding="utf-8") as fh:
            fh.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.command)
    try:
        if args.out and not args.force:
            target = os.path.join(args.out, f"{args.command}.txt")
            if os.path.exists(target):
                print(f"nullholo: {target} exists (use --force)", file=stderr)
                return EXIT_EXISTS
        args.func(args, rep)
    except (specfile.SpecParseError, argparse.ArgumentTypeError) as exc:
        print(f"nullholo {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except Exception as exc:  # analysis errors carry their module in the message
        mod = type(exc).__module__.replace("nullholo.", "")
        print(f"nullholo {args.command}: [{mod}] {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_ERROR
    stdout.write(rep.text())
    if args.out:
        try:
            _write_outputs(rep, args.out, args.force)
        except FileExistsError as exc:
            print(f"nullholo: refusing to overwrite {exc} (use --force)", file=stderr)
            return EXIT_EXISTS
    return rep.exit_status()


def main() -> None:
    sys.exit(run())
