import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nlsa.cli import main
from nlsa.fixtures import l1
from nlsa.serialize import algebra_dumps, algebra_loads

FIXDIR = Path(__file__).resolve().parents[1] / "src" / "nlsa" / "fixtures"


def run_cli(args, cwd):
    """Run the CLI in-process with a controlled cwd; returns (code, stdout)."""
    import contextlib
    import io

    old = os.getcwd()
    buf = io.StringIO()
    try:
        os.chdir(cwd)
        with contextlib.redirect_stdout(buf):
            code = main(args)
    finally:
        os.chdir(old)
    return code, buf.getvalue()


@pytest.fixture()
def workdir(tmp_path):
    for f in FIXDIR.iterdir():
        (tmp_path / f.name).write_text(f.read_text())
    return tmp_path


def test_validate_ok_and_json(workdir):
    code, out = run_cli(["validate", "L1.json"], workdir)
    assert code == 0
    assert "pass" in out
    code, out = run_cli(["validate", "L1.json", "--json"], workdir)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_validate_mutated_exits_2(workdir):
    g = algebra_loads((workdir / "L1.json").read_text())
    bad = dict(g.constants)
    bad[(0, 1, 3)] = {1: 1}
    from nlsa.algebra import NLieSuperalgebra

    gbad = NLieSuperalgebra(g.space, 3, bad, name="L1-mutated")
    (workdir / "bad.json").write_text(algebra_dumps(gbad))
    code, out = run_cli(["validate", "bad.json", "--json"], workdir)
    assert code == 2
    data = json.loads(out)
    assert not data["ok"]
    assert data["failures"][0]["axiom"] == "filippov"
    assert data["failures"][0]["witness"]


def test_validate_parse_error_exits_1(workdir):
    (workdir / "broken.json").write_text('{"name": "x", "n": 2, "basis": '
                                         '[{"name": "a", "parity": "evenish"}]}')
    code, _ = run_cli(["validate", "broken.json"], workdir)
    assert code == 1


def test_series_output(workdir):
    code, out = run_cli(["series", "L1.json"], workdir)
    assert code == 0
    assert "nilpotent length: 2" in out
    assert "solvable length: 2" in out


def test_cohomology_reports(workdir):
    code, out = run_cli(["cohomology", "Ab.json", "--module", "trivial",
                         "--degree", "1", "--parity", "both"], workdir)
    assert code == 0
    assert "dim H" in out
    code, out = run_cli(
        ["cohomology", "L1.json", "--module", "coadjoint", "--degree", "1",
         "--parity", "0", "--wedge-compatible", "--json"], workdir)
    data = json.loads(out)
    assert data["wedge_compatible"] is True
    code, out = run_cli(["cohomology", "L2.json", "--module", "adjoint",
                         "--degree", "0", "--parity", "1", "--json"], workdir)
    assert code == 0
    block = json.loads(out)["blocks"][0]
    assert block["parity"] == 1
    assert block["dim_coboundaries"] == 0


def test_tstar_writes_files(workdir):
    code, out = run_cli(["tstar", "L1.json", "--output", "out"], workdir)
    assert code == 0
    made = algebra_loads((workdir / "out.json").read_text())
    packaged = algebra_loads((workdir / "M1.json").read_text())
    assert made.constants == packaged.constants
    assert (workdir / "out_form.json").read_text() == \
        (workdir / "M1_form.json").read_text()


def test_extend_and_validate_output(workdir):
    fiber = {"name": "A", "n": 3,
             "basis": [{"name": "a1", "parity": "even"}], "brackets": []}
    (workdir / "fiber.json").write_text(json.dumps(fiber))
    cocycle = {"degree": 1, "parity": 0, "entries": [
        {"args": [["e1", "e2"], "e3"], "target": "a1", "value": "1"},
        {"args": [["e1", "e3"], "e2"], "target": "a1", "value": "-1"},
        {"args": [["e2", "e3"], "e1"], "target": "a1", "value": "1"},
    ]}
    (workdir / "coc.json").write_text(json.dumps(cocycle))
    code, out = run_cli(["extend", "L1.json", "fiber.json", "coc.json",
                         "--output", "ext"], workdir)
    assert code == 0
    code, _ = run_cli(["validate", "ext.json"], workdir)
    assert code == 0


def test_reconstruct_pipeline(workdir):
    code, out = run_cli(["reconstruct", "M1.json", "--form", "M1_form.json",
                         "--output", "rec", "--json"], workdir)
    assert code == 0
    data = json.loads(out)
    assert data["quotient_dim"] == 4
    assert data["isometry_verified"] is True
    assert (workdir / "rec_quotient.json").exists()


def test_reconstruct_with_ideal(workdir):
    code, out = run_cli(
        ["reconstruct", "M1.json", "--form", "M1_form.json",
         "--ideal", "e1*,e2*,e3*,e4*", "--output", "rd", "--json"], workdir)
    assert code == 0
    data = json.loads(out)
    assert data["theta_zero"] is True
    q = algebra_loads((workdir / "rd_quotient.json").read_text())
    assert q.constants == l1().constants


def test_isotropic_command(workdir):
    code, out = run_cli(["isotropic", "M1.json", "--form", "M1_form.json",
                         "--json"], workdir)
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 4
    code, out = run_cli(
        ["isotropic", "M1.json", "--form", "M1_form.json",
         "--ideal", "e1*,e2*,e3*,e4*", "--json"], workdir)
    assert code == 0
    assert json.loads(out)["equivalence_holds"] is True


def test_equivalence_command(workdir):
    from nlsa.metric import cyclic_cocycle_basis
    from nlsa.serialize import cochain_dumps

    g = l1()
    theta = cyclic_cocycle_basis(g)[0]
    (workdir / "th.json").write_text(cochain_dumps(theta))
    zero = {"degree": 1, "parity": 0, "entries": []}
    (workdir / "zero.json").write_text(json.dumps(zero))
    code, out = run_cli(
        ["equivalence", "L1.json", "th.json", "th.json", "--json"], workdir)
    assert code == 0
    assert json.loads(out)["equivalent"] is True
    code, out = run_cli(
        ["equivalence", "L1.json", "th.json", "zero.json", "--json"], workdir)
    assert code == 0
    assert json.loads(out)["equivalent"] is False


def test_missing_file_exit_1(workdir):
    code, _ = run_cli(["validate", "nope.json"], workdir)
    assert code == 1


def test_fixture_env_var(tmp_path, workdir):
    old = os.environ.get("NLSA_FIXTURES")
    os.environ["NLSA_FIXTURES"] = str(workdir)
    try:
        code, _ = run_cli(["validate", "L2.json"], tmp_path)
        assert code == 0
    finally:
        if old is None:
            os.environ.pop("NLSA_FIXTURES", None)
        else:
            os.environ["NLSA_FIXTURES"] = old


def test_console_entry_point(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "nlsa.cli", "validate", "L1.json"],
        cwd=workdir, capture_output=True, text=True)
    assert proc.returncode == 0
    assert "pass" in proc.stdout
