import io
import subprocess
import sys

import pytest

from feedcode.capacity import CurveSpec, curve_csv_lines
from feedcode.cli import main
from feedcode.codecs import RubberCodec
from feedcode.session import ReplayAdversary, run_session


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_capacity_lambda_r():
    code, out, _ = run("capacity", "--kind", "lambda_r", "--q", "4", "--r", "1", "--step", "0.25")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["tau", "rate"]
    assert [float(v) for _, v in rows[1:]] == pytest.approx([1, 0.594361, 0.5, 0.5, 0.5], abs=1e-6)


@pytest.mark.parametrize("argv", [
    ("--kind", "binary", "--step", "0.5"),
    ("--kind", "qary_upper", "--q", "3", "--step", "0.5"),
])
def test_capacity_endpoints(argv):
    code, out, _ = run("capacity", *argv)
    assert code == 0
    assert out.splitlines()[1:] == ["0.000000000,1.000000000", "0.500000000,0.000000000",
                                    "1.000000000,0.000000000"]


def test_capacity_matches_library():
    _, out, _ = run("capacity", "--kind", "rubber", "--q", "5", "--a", "2", "--step", "0.01")
    assert out.splitlines() == list(curve_csv_lines(CurveSpec("rubber", q=5, a=2), 0.01))


def test_capacity_rejects_hypothesis():
    code, _, err = run("capacity", "--kind", "lambda_r", "--q", "5", "--r", "2")
    assert code == 2
    assert "r^2+r+1" in err


def test_simulate_replay_matches_library():
    code, out, _ = run("simulate", "--codec", "rubber:q=3,a=1,n=5,t=2",
                       "--adversary", "replay:err=10100", "--m", "1")
    tr = run_session(RubberCodec(3, 1, 5, 2), ReplayAdversary([1, 0, 1, 0, 0]), 1)
    assert code == 0
    assert out == tr.to_text() + "\n\nok=1 fail=0\n"
    assert "sent=10101\nrecv=20201" in out


def test_simulate_null_and_random():
    code, out, _ = run("simulate", "--codec", "interval:q=4,r=1,n=12,t=2", "--sessions", "5", "--quiet")
    assert (code, out) == (0, "ok=5 fail=0\n")
    code, out, _ = run("simulate", "--codec", "sep:q=4", "--adversary", "random",
                       "--sessions", "1000", "--seed", "7", "--quiet")
    assert (code, out) == (0, "ok=1000 fail=0\n")


def test_simulate_failure_exit_code():
    code, out, _ = run("simulate", "--codec", "rubber:q=3,a=1,n=5,t=2", "--adversary",
                       "replay:err=00221", "--m", "1", "--budget", "3")
    assert code == 1
    assert "decoded=FAIL" in out or "fail=1" in out


def test_simulate_errors():
    code, _, err = run("simulate", "--codec", "rubber:q=3,n=x,t=2")
    assert code == 2 and "column 14" in err
    code, _, err = run("simulate", "--codec", "rubber:q=3,a=1,n=5,t=2", "--adversary",
                       "replay:err=11100", "--m", "1")
    assert code == 2 and "position 2" in err
    code, _, err = run("simulate", "--codec", "rubber:q=3,a=1,n=5,t=2", "--m", "3")
    assert code == 2


def test_verify_examples():
    code, out, _ = run("verify", "--codec", "sep:channel=w4r1,n=4", "--t", "4")
    assert code == 0 and out.startswith("VERDICT=PASS\n")
    code, out, _ = run("verify", "--codec", "rubber:q=3,a=1,n=5,t=2")
    assert code == 0 and out.startswith("VERDICT=PASS\n")
    assert "bound=4\n" in out


def test_verify_rejected_parameters():
    code, out, err = run("verify", "--codec", "rubber:q=3,a=1,n=5,t=2", "--t", "3")
    assert code == 2 and out == ""
    assert "rejected" in err


def test_verify_fail_and_inconclusive():
    code, out, _ = run("verify", "--codec", "rubber:q=3,a=1,n=5,t=2", "--budget", "3", "--m", "1")
    assert code == 1
    assert "counterexample=00221" in out
    code, out, _ = run("verify", "--codec", "rubber:q=3,a=1,n=7,t=2", "--node-budget", "40")
    assert code == 3 and out.startswith("VERDICT=INCONCLUSIVE")


def test_verify_node_budget_env(monkeypatch):
    monkeypatch.setenv("FEEDCODE_NODE_BUDGET", "40")
    code, out, _ = run("verify", "--codec", "rubber:q=3,a=1,n=7,t=2")
    assert code == 3


def test_channel_reports(tmp_path):
    path = tmp_path / "w4r1.txt"
    path.write_text("q=4\n1100\n0110\n0011\n1001\n")
    code, out, _ = run("channel", "--channel", str(path))
    assert code == 0
    assert out.startswith("class=Lambda_r(1) sep_pair=(0,2) sep_size=2 zero_error_positive=true")
    _, out, _ = run("channel", "--channel", "identity5")
    assert "class=Lambda_r(0)" in out and "sep_size=5" in out
    _, out, _ = run("channel", "--channel", "complete3")
    assert "zero_error_positive=false" in out


def test_channel_emit_round_trip(tmp_path):
    _, out, _ = run("channel", "--channel", "w5r2", "--emit")
    path = tmp_path / "c.txt"
    path.write_text(out)
    assert run("channel", "--channel", str(path)) == run("channel", "--channel", "w5r2")
    code, out, _ = run("simulate", "--codec", f"sep:channel={path},n=3", "--quiet")
    assert code == 2  # w5r2 has no separable pair


def test_channel_file_diagnostics(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("q=3\n110\n0y1\n101\n")
    code, _, err = run("channel", "--channel", str(path))
    assert code == 2 and "line 3" in err
    code, _, err = run("channel", "--channel", str(tmp_path / "missing.txt"))
    assert code == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("capacity")[0] == 2
    assert run("frobnicate")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "feedcode", "channel", "--channel", "w4r1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("class=Lambda_r(1)")
