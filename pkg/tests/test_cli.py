import csv
import io
import json
import math
import xml.etree.ElementTree as ET

import pytest

from lpdual.cli import main
from lpdual.sweep import SweepSpec, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_theta_exact_special(capsys):
    code, out, _ = run(capsys, "theta", "-p", "1", "-q", "2", "-r", "5")
    assert code == 0 and out.startswith("3.14159265") and "method=exact_special" in out


def test_theta_json(capsys):
    code, out, _ = run(capsys, "theta", "-p", "-2", "-q", "2", "-r", "7", "--json")
    d = json.loads(out)
    assert code == 0 and d["theta"] == pytest.approx(math.pi / 2)


def test_theta_no_special_uses_quadrature(capsys):
    code, out, _ = run(capsys, "theta", "-p", "-2", "-q", "2", "-r", "7", "--json", "--no-special")
    d = json.loads(out)
    assert d["method"] == "quadrature" and abs(d["theta"] - math.pi / 2) < 1e-12


def test_theta_domain_error(capsys):
    code, _, err = run(capsys, "theta", "-p", "3", "-q", "2", "-r", "2")
    assert code == 2 and "requires p < q" in err


def test_theta_convergence_error(capsys, monkeypatch):
    from lpdual import cli
    from lpdual.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "theta", boom)
    code, _, _ = run(capsys, "theta", "-p", "0", "-q", "2", "-r", "3")
    assert code == 3


def test_classify_output(capsys):
    assert run(capsys, "classify", "-p", "-5", "-q", "5")[1].splitlines()[0] == "Case(4)/Subcase 1°, exactly 2, k∈{3}"
    assert "continuum family" in run(capsys, "classify", "-p", "1", "-q", "2")[1]
    assert run(capsys, "classify", "-p", "2", "-q", "1")[1].startswith("Case(1)/Subcase 1°, unique")


def test_branches_json(capsys):
    code, out, _ = run(capsys, "branches", "-p", "-5", "-q", "5")
    (b,) = json.loads(out)
    assert code == 0 and b["m"] == 3 and b["certified"] is True


def test_curve_csv_roundtrip(capsys, tmp_path):
    path = tmp_path / "g.csv"
    code, _, _ = run(capsys, "curve", "-p", "0", "-q", "5", "-m", "2", "-o", str(path))
    assert code == 0
    text = path.read_text()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["theta", "u", "u_theta", "x", "y"]
    assert len(rows) - 1 == 2048
    for cell in rows[1][:3] + rows[500]:
        # 17 significant digits round-trip exactly
        assert format(float(cell), ".17g") == cell


def test_curve_missing_branch(capsys, tmp_path):
    code, _, err = run(capsys, "curve", "-p", "0", "-q", "5", "-m", "3", "-o", str(tmp_path / "x.csv"))
    assert code == 4 and "no branch" in err


def test_curve_svg(capsys, tmp_path):
    path = tmp_path / "ell.svg"
    code, _, _ = run(capsys, "curve", "-p", "-2", "-q", "2", "--lambda", "1.3", "-o", str(path))
    assert code == 0
    root = ET.parse(path).getroot()
    assert root.get("version") == "1.1"
    (p,) = [e for e in root.iter() if e.tag.endswith("path")]
    d = p.get("d")
    assert d.startswith("M ") and d.endswith(" Z")
    x0, y0, w, h = map(float, root.get("viewBox").split())
    # semi-axes 1.3 and 1/1.3, plus 1% of the larger extent on each side
    assert w == pytest.approx(2 * 1.3 * 1.02, rel=1e-3)
    assert h == pytest.approx(2 / 1.3 + 0.04 * 1.3, rel=1e-3)


def test_curve_bad_family_parameter(capsys):
    assert run(capsys, "curve", "-p", "0", "-q", "2", "--lambda", "0.5")[0] == 2
    assert run(capsys, "curve", "-p", "-2", "-q", "-1", "--mu", "1.5")[0] == 2


def test_sweep_rows(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--p-range", "0", "2", "--q-range", "0", "2", "--resolution", "3", "-o", str(path))
    rows = list(csv.DictReader(path.open()))
    assert code == 0 and len(rows) == 9
    assert list(rows[0]) == ["p", "q", "case_path", "qualifier", "count", "xi"]
    # q-major order
    assert [(r["p"], r["q"]) for r in rows[:3]] == [("0", "0"), ("1", "0"), ("2", "0")]
    diag = [r for r in rows if r["p"] == r["q"]]
    assert all(r["case_path"].startswith("Case(1)") for r in diag)


def test_sweep_single_cell(capsys):
    code, out, _ = run(capsys, "sweep", "--p-range", "-5", "-5", "--q-range", "5", "5", "--step", "1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and lines[1].startswith("-5,5,Case(4)/Subcase 1°")


def test_sweep_unwritable(capsys):
    assert run(capsys, "sweep", "--step", "1", "-o", "/nonexistent-dir/x.csv")[0] == 5


def test_sweep_deterministic_across_workers():
    spec = SweepSpec.from_step((-8, 8), (-4, 12), 0.5)
    assert run_sweep(spec, workers=1) == run_sweep(spec, workers=3)


def test_verify_single_check(capsys):
    code, out, _ = run(capsys, "verify", "--check", "duality")
    assert code == 0 and "[PASS] duality" in out


def test_verify_rejects_unknown_check(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--check", "nope"])
