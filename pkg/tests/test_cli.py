import io
import json
import math

import pytest

from bdconvex.cli import SWEEP_HEADER, cmd_analyze, cmd_sweep, fmt, main
from bdconvex.bdstate import bd_from_probs

REF = 0.5 * math.log2(5 / 7) + 0.5 * math.log2(5 / 3)


def run(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def state_file(tmp_path):
    def write(text):
        path = tmp_path / "state.json"
        path.write_text(text)
        return str(path)
    return write


class TestFormat:
    def test_fifteen_digits(self):
        assert fmt(1 / 3) == 0.333333333333333
        assert fmt(-0.0) == 0.0 and str(fmt(-0.0)) == "0.0"

    def test_non_finite(self):
        assert fmt(math.inf) is None and fmt(math.nan) is None


class TestAnalyze:
    def test_reference(self, state_file):
        code, out, _ = run(["analyze", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}')])
        assert code == 0
        rep = json.loads(out)
        assert rep["lsd"]["lambda"] == pytest.approx(0.6, abs=1e-14)
        assert rep["ree"]["value_bits"] == pytest.approx(REF, abs=1e-14)
        assert rep["coincidence"] is True
        assert rep["lsd"]["pure_index"] == 1
        assert list(rep) == ["p", "classification", "t", "concurrence", "lsd", "ree", "coincidence"]

    def test_t_form_uniform(self, state_file):
        code, out, _ = run(["analyze", "--state", state_file('{"t":[0,0,0]}')])
        rep = json.loads(out)
        assert code == 0
        assert rep["lsd"]["lambda"] == 1.0 and rep["ree"]["value_bits"] == 0.0
        assert rep["classification"] == "separable_interior"

    def test_stdin(self, monkeypatch):
        code, out, _ = run(["analyze"], stdin='{"p":[0.7,0.1,0.1,0.1]}', monkeypatch=monkeypatch)
        assert code == 0 and json.loads(out)["concurrence"] == pytest.approx(0.4)

    def test_pure_state_null(self, state_file):
        code, out, _ = run(["analyze", "--state", state_file('{"p":[1,0,0,0]}')])
        rep = json.loads(out)
        assert code == 0 and rep["ree"]["value_bits"] is None and rep["ree"]["infinite"] is True

    def test_byte_stable(self, state_file):
        path = state_file('{"p":[0.62,0.2,0.1,0.08]}')
        assert run(["analyze", "--state", path])[1] == run(["analyze", "--state", path])[1]

    def test_reproducible_from_modules(self):
        from bdconvex.lsd import optimal_lsd
        from bdconvex.relent import ree_bd
        s = bd_from_probs([0.62, 0.2, 0.1, 0.08])
        rep = cmd_analyze(s)
        assert rep["lsd"]["lambda"] == fmt(optimal_lsd(s).lam)
        assert rep["ree"]["value_bits"] == fmt(ree_bd(s).value)

    def test_csv(self, state_file):
        code, out, _ = run(["analyze", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}'), "--format", "csv"])
        lines = out.split("\n")
        assert code == 0 and lines[0] == ",".join(SWEEP_HEADER)

    @pytest.mark.parametrize("text", ['{"p":[0.7,0.1,0.1]}', "{not json", '{"q":[1,0,0,0]}'])
    def test_malformed(self, state_file, text):
        code, out, err = run(["analyze", "--state", state_file(text)])
        assert code == 2 and out == "" and err.startswith("error:")

    def test_missing_file(self, tmp_path):
        assert run(["analyze", "--state", str(tmp_path / "nope.json")])[0] == 2

    @pytest.mark.parametrize("text", ['{"p":[0.7,0.2,0.2,0.1]}', '{"p":[1.2,-0.2,0,0]}', '{"t":[1,1,1]}'])
    def test_invalid_state(self, state_file, text):
        assert run(["analyze", "--state", state_file(text)])[0] == 3

    def test_bad_flag(self):
        assert run(["analyze", "--format", "xml"])[0] == 2


class TestSweep:
    def test_lambda_column(self):
        code, out, _ = run(["sweep", "--p1-min", "0.6", "--p1-max", "0.9", "--steps", "4"])
        lines = out.strip("\n").split("\n")
        assert code == 0 and lines[0] == "p1,lambda,ree_bits,concurrence,w1,w2,w3,w4"
        assert "\r" not in out and len(lines) == 5
        for line in lines[1:]:
            p1, lam = (float(v) for v in line.split(",")[:2])
            assert lam == pytest.approx(2 * (1 - p1), abs=1e-14)

    def test_rows(self):
        rows = cmd_sweep(0.501, 0.99, 25)
        assert all(b.p1 > a.p1 for a, b in zip(rows, rows[1:]))
        for r in rows:
            c = 2 * r.p1 - 1
            assert abs(r.ree_bits + 0.5 * math.log2(1 - c * c)) <= 1e-12
            assert r.lam == 2 * (1 - r.p1) or abs(r.lam - 2 * (1 - r.p1)) <= 1e-15
        assert rows[0].ree_bits < 1e-5

    def test_json(self):
        code, out, _ = run(["sweep", "--p1-min", "0.6", "--p1-max", "0.9", "--steps", "2", "--format", "json"])
        rows = json.loads(out)
        assert code == 0 and list(rows[0]) == SWEEP_HEADER

    @pytest.mark.parametrize("args", [("0.4", "0.9", "4"), ("0.9", "0.6", "4"), ("0.6", "1.0", "4"), ("0.6", "0.9", "1")])
    def test_bad_range(self, args):
        lo, hi, n = args
        assert run(["sweep", "--p1-min", lo, "--p1-max", hi, "--steps", n])[0] == 4


class TestVerify:
    def test_quick(self, state_file):
        code, out, _ = run(["verify", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}')])
        rep = json.loads(out)
        assert code == 0 and rep["passed"]
        assert [c["name"] for c in rep["checks"]] == [
            "sdp_lambda", "lp_lambda", "kkt_ree", "slackness", "residual_purity"]
        assert all(c["residual"] <= c["tolerance"] for c in rep["checks"])

    def test_full(self, state_file, monkeypatch):
        monkeypatch.setenv("BDCONVEX_SEED", "7")
        code, out, _ = run(["verify", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}'),
                            "--level", "full", "--step", "5e-3"])
        rep = json.loads(out)
        names = [c["name"] for c in rep["checks"]]
        assert code == 0 and rep["seed"] == 7
        assert {"grid_min_ree", "grid_max_lambda", "random_batch"} <= set(names)
        grid = [c for c in rep["checks"] if c["name"].startswith("grid")]
        assert all(c["tolerance"] == pytest.approx(1.5e-2) for c in grid)

    def test_pure_skips_kkt(self, state_file):
        code, out, _ = run(["verify", "--state", state_file('{"p":[0,0,0,1]}')])
        rep = json.loads(out)
        assert code == 0
        assert next(c for c in rep["checks"] if c["name"] == "kkt_ree")["skipped"]

    def test_uniform(self, state_file):
        code, _, err = run(["verify", "--state", state_file('{"p":[0.25,0.25,0.25,0.25]}')])
        assert code == 3 and "not entangled" in err

    def test_step_range(self, state_file):
        path = state_file('{"p":[0.7,0.1,0.1,0.1]}')
        assert run(["verify", "--state", path, "--level", "full", "--step", "0.5"])[0] == 4

    def test_bad_seed(self, state_file, monkeypatch):
        monkeypatch.setenv("BDCONVEX_SEED", "abc")
        assert run(["verify", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}')])[0] == 2

    def test_failed_check(self, state_file, monkeypatch):
        import bdconvex.cli as cli
        monkeypatch.setitem(cli.TOLERANCES, "lp_lambda", -1.0)
        code, out, err = run(["verify", "--state", state_file('{"p":[0.7,0.1,0.1,0.1]}')])
        assert code == 1 and "lp_lambda" in err
        assert json.loads(out)["failed"] == ["lp_lambda"]
