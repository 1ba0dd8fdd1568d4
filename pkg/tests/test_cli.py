import re

import numpy as np
import pytest

from chargekin.cli import main
from chargekin.design import ZOE_DESIGN, dump_design
from chargekin.workspace import boundary


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_cfg(tmp_path, **kw):
    path = tmp_path / "design.cfg"
    path.write_text(dump_design(ZOE_DESIGN.replace(**kw)))
    return str(path)


def test_ik(capsys):
    code, out, _ = run(capsys, "ik", "--x", "612", "--y", "0")
    assert code == 0
    assert out.strip() == "rho1=0.000000 rho2=76.000000"


def test_ik_spatial(capsys):
    code, out, _ = run(capsys, "ik", "--x", "650", "--y", "465.692194", "--z", "86.602540")
    assert code == 0
    vals = [float(v) for v in re.findall(r"=(-?[\d.]+)", out)]
    np.testing.assert_allclose(vals, [238, 238, 100], atol=1e-4)


def test_fk_branches(capsys):
    code, out, _ = run(capsys, "fk", "--rho1", "238", "--rho2", "238")
    assert code == 0 and out.strip() == "x=650.000000 y=415.692194"
    code, out, _ = run(capsys, "fk", "--rho1", "238", "--rho2", "238", "--branch", "lower")
    assert out.strip() == "x=650.000000 y=-415.692194"


def test_exit_codes(capsys):
    assert run(capsys, "ik", "--x", "650", "--y", "600")[0] == 3
    assert run(capsys, "fk", "--rho1", "600", "--rho2", "100")[0] == 4
    assert run(capsys, "fk", "--rho1", "0", "--rho2", "0")[0] == 3


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["workspace", "--grid", "16"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["place", "--lb", "100", "--n", "5"])
    assert exc.value.code == 2


def test_help_states_units_and_half_side(capsys):
    with pytest.raises(SystemExit):
        main(["place", "--help"])
    text = capsys.readouterr().out
    assert "mm" in text and "half-side" in text


def test_workspace_files(tmp_path, capsys):
    csv, svg = tmp_path / "b.csv", tmp_path / "w.svg"
    code, out, _ = run(capsys, "workspace", "--csv", str(csv), "--svg", str(svg), "--lame", "650,385,100,12")
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "loop,x,y,tag"
    text = svg.read_text()
    d = re.search(r'class="workspace"', text) and re.search(r'<path d="([^"]+)"[^>]*class="workspace"', text).group(1)
    pts = np.array([[float(a), float(b)] for a, b in re.findall(r"(-?[\d.]+),(-?[\d.]+)", d)])
    xmin, ymin, xmax, ymax = boundary(ZOE_DESIGN).bounds
    # svg ordinates are negated
    assert abs(pts[:, 0].min() - xmin) < 0.5 and abs(pts[:, 0].max() - xmax) < 0.5
    assert abs(-pts[:, 1].max() - ymin) < 0.5 and abs(-pts[:, 1].min() - ymax) < 0.5
    assert 'class="singularity"' in text and 'class="lame"' in text


def test_empty_workspace_writes_nothing(tmp_path, capsys):
    cfg = write_cfg(tmp_path, rho1_min=1200.0, rho1_max=1300.0)
    csv = tmp_path / "b.csv"
    code, _, err = run(capsys, "workspace", "--config", cfg, "--csv", str(csv))
    assert code == 6
    assert not csv.exists()
    assert not list(tmp_path.glob(".chargekin-*"))


def test_io_error(tmp_path, capsys):
    code, _, _ = run(capsys, "workspace", "--csv", str(tmp_path / "missing" / "b.csv"))
    assert code == 7
    assert run(capsys, "ik", "--config", str(tmp_path / "nope.cfg"), "--x", "612", "--y", "0")[0] == 7


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("L = 532\nbogus = 1\n")
    code, _, err = run(capsys, "ik", "--config", str(path), "--x", "612", "--y", "0")
    assert code == 2 and "line 2" in err


def test_place_witness(tmp_path, capsys):
    csv = tmp_path / "p.csv"
    code, out, _ = run(capsys, "place", "--lb", "100", "--grid", "48", "--csv", str(csv))
    assert code == 0
    m = re.search(r"witness: x_c=(\S+) y_c=(\S+)", out)
    assert m
    assert csv.read_text().splitlines()[0] == "x_c,y_c,feasible,component"


def test_place_none(capsys):
    code, out, _ = run(capsys, "place", "--lb", "10000", "--grid", "32")
    assert code == 8 and "witness: none" in out


def test_check_spec_prototype(tmp_path, capsys):
    out_path = tmp_path / "report.txt"
    code, out, _ = run(capsys, "check-spec", "--grid", "32", "--out", str(out_path))
    assert code == 0
    assert re.search(r"^\(b\) .*: pass", out, re.M)
    assert re.search(r"^\(d\) .*: pass", out, re.M)
    assert re.search(r"^\(e\) .*: pass", out, re.M)
    assert re.search(r"^\(a\) .*: not evaluable", out, re.M)
    assert out_path.read_text().startswith("design:")


def test_check_spec_short_insertion_stroke(tmp_path, capsys):
    cfg = write_cfg(tmp_path, rho3_max=30.0)
    code, out, _ = run(capsys, "check-spec", "--config", cfg, "--grid", "32")
    assert code == 0
    line = re.search(r"^\(b\) .*$", out, re.M).group(0)
    assert "fail" in line and "measured=30.000" in line and "required=60.000" in line


def test_check_spec_degenerate(tmp_path, capsys):
    cfg = write_cfg(tmp_path, rho1_min=1200.0, rho1_max=1300.0)
    code, out, _ = run(capsys, "check-spec", "--config", cfg, "--grid", "32")
    line = re.search(r"^\(d\) .*$", out, re.M).group(0)
    assert "fail" in line and "degenerate" in line


def test_plan_csv(tmp_path, capsys):
    csv = tmp_path / "plan.csv"
    code, _, err = run(capsys, "plan", "--to", "650", "465.692194", "86.602540", "--csv", str(csv))
    assert code == 0
    rows = csv.read_text().splitlines()
    assert rows[0].startswith("index,x,y,z")
    assert len(rows) == 42
    assert "waypoints=41" in err


def test_plan_singular(capsys):
    code, _, _ = run(capsys, "plan", "--from", "650", "-30", "0", "--to", "650", "30", "0")
    assert code == 5


def test_dump_config_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "dump-config")
    path = tmp_path / "z.cfg"
    path.write_text(out)
    code, out2, _ = run(capsys, "ik", "--config", str(path), "--x", "612", "--y", "0")
    assert out2.strip() == "rho1=0.000000 rho2=76.000000"
