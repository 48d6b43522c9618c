import csv
import io
import subprocess
import sys

import pytest

from nullholo.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def keys(text):
    head = text.split("\n---\n", 1)[0]
    return dict(line.split("=", 1) for line in head.splitlines())


def test_catenoid_cousin_equality_example():
    code, out, _ = call("chern-osserman", "--preset", "catenoid-cousin", "--mu", "0", "--a", "0", "--b", "1")
    k = keys(out)
    assert code == 0
    assert (k["lhs"], k["rhs"], k["equality"]) == ("2", "2", "true")


def test_plane_curvature_example(tmp_path):
    code, out, _ = call("curvature", "--preset", "plane", "--out", str(tmp_path / "o"))
    k = keys(out)
    assert code == 0 and k["TA"] == "0" and float(k["K_min"]) == 0 and float(k["K_max"]) == 0
    with open(tmp_path / "o" / "curvature_samples.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["re_z", "im_z", "h", "K"]
    assert all(float(r["K"]) == 0 for r in rows)


def test_report_lines_sorted():
    _, out, _ = call("validate", "--preset", "s5-family")
    names = [line.split("=", 1)[0] for line in out.split("\n---\n", 1)[0].splitlines()]
    assert names == sorted(names)


@pytest.mark.parametrize(
    "argv",
    [
        ("validate", "--preset", "nilpotent"),
        ("curvature", "--preset", "catenoid-cousin", "--mu", "0.3", "--a", "0", "--b", "1"),
        ("monodromy", "--preset", "s5-family", "--c", "0.01"),
        ("dual", "--preset", "nilpotent"),
        ("frobenius", "--preset", "nilpotent"),
    ],
)
def test_deterministic_text(argv):
    first = call(*argv)
    assert first[0] == 0
    assert call(*argv) == first


def test_unknown_preset_is_usage_error(capsys):
    code, _, _ = call("validate", "--preset", "helicoid")
    assert code == 2


def test_parse_error_reports_location(tmp_path):
    spec = tmp_path / "bad.surf"
    spec.write_text("n: 2\nentry 1 2: z +* 1\n")
    code, _, err = call("validate", "--spec", str(spec))
    assert code == 2
    assert "line 2, column" in err


def test_analysis_error_names_module():
    code, _, err = call("curvature", "--preset", "catenoid-cousin", "--mu", "0.2", "--a", "0.25", "--b", "1.5")
    assert code == 1
    assert err.startswith("nullholo curvature: [")


def test_outputs_not_overwritten(tmp_path):
    out = str(tmp_path / "o")
    assert call("mesh", "--preset", "plane", "--count", "3", "--out", out)[0] == 0
    assert call("mesh", "--preset", "plane", "--count", "3", "--out", out)[0] == 3
    assert call("mesh", "--preset", "plane", "--count", "3", "--out", out, "--force")[0] == 0


def test_mesh_csv_columns(tmp_path):
    call("mesh", "--preset", "nilpotent", "--count", "4", "--out", str(tmp_path))
    with open(tmp_path / "mesh.csv") as fh:
        header = next(csv.reader(fh))
    assert header[:2] == ["re_z", "im_z"]
    assert len(header) == 2 + 9


def test_failed_check_sets_exit_status():
    # the seed parameters do not close the deformed monodromy
    code, out, _ = call("monodromy", "--preset", "s5-family", "--c", "0.01", "--require-unitary")
    assert code >= 10
    assert "check.unitary=fail" in out


def test_help_documents_csv_columns(capsys):
    assert call("curvature", "--help")[0] == 0
    assert "re_z" in capsys.readouterr().out


def test_perturb_short_run_deterministic():
    argv = ("perturb", "--c-target", "0.001", "--stages", "1")
    first = call(*argv)
    assert first[0] == 0
    k = keys(first[1])
    assert k["k"] == "4" and k["TA_over_pi"] == "8"
    assert call(*argv) == first


@pytest.mark.slow
def test_perturb_example(tmp_path):
    code, out, _ = call("perturb", "--c-target", "0.01", "--report", "--out", str(tmp_path))
    k = keys(out)
    assert code == 0
    assert float(k["residual"]) <= 1e-10
    assert max(float(k[f"sigma_deviation.gamma{j}"]) for j in (1, 2, 3)) <= 1e-8
    assert k["TA_over_pi"] == "8"
    assert (tmp_path / "perturb_trace.csv").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nullholo", "validate", "--preset", "plane"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "check.null=pass" in res.stdout
