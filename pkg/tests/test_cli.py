import json
import shutil
import subprocess

import mpmath
import pytest

from besselmoments.cli import Config, main, parse_point, read_config_file, resolve_config, UsageError

BOLOGNA = "1.0712850554218076585187119780308171607"


def call(*argv):
    lines = []
    code = main(list(argv), out=lines.append)
    return code, "\n".join(lines)


def test_eval_ikm():
    code, out = call("eval", "ikm", "1", "4", "1", "--digits", "40")
    assert code == 0
    assert out.startswith(BOLOGNA[:36])


def test_divergent_moment_exit_code(capsys):
    code, _ = call("eval", "jym", "2", "0", "1")
    assert code == 3
    err = capsys.readouterr().err
    assert "JYM(2,0;1)" in err and "t^0" in err


def test_table1_rows():
    code, out = call("eval", "table1")
    rows = out.splitlines()
    assert code == 0
    assert len(rows) == 10
    assert all(r.endswith("OK") for r in rows)


def test_eval_lvalue_and_forms():
    code, out = call("eval", "lvalue", "f46", "2", "--digits", "20")
    assert code == 0 and out
    code, out = call("eval", "form", "X63", "1/2+0.6454972243679028141965442332970666018i", "--digits", "20")
    assert code == 0 and out.startswith("-0.015625+")
    code, out = call("eval", "form", "theta", "i", "--digits", "20")
    assert code == 0 and out.startswith("1.08643")


def test_eval_eta_q():
    code, out = call("eval", "eta-q", "f46", "8")
    assert code == 0
    coeffs = [int(line.split("\t")[1]) for line in out.splitlines()]
    assert coeffs[:7] == [1, -2, -3, 4, 6, 6, -16]


def test_eval_eichler():
    code, out = call("eval", "eichler")
    assert code == 0 and "sigma4_cm" in out
    code, out = call("eval", "eichler", "sigma4_cm", "--digits", "20")
    assert code == 0
    assert abs(mpmath.mpf(out) * 240 - 1) < 1e-18


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "ikm", "x", "4", "1"),
        ("eval", "ikm", "1", "4", "1", "--digits", "10"),
        ("eval", "form", "X63", "1/2-1i"),
        ("eval", "form", "nope", "i"),
        ("eval", "eichler", "nope"),
        ("eval", "lvalue", "f46", "7"),
        ("eval", "eta-q", "f46", "0"),
        ("frobnicate",),
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = call(*argv)
    assert code == 2


def test_verify_unknown_suite(capsys):
    code, out = call("verify", "--suite", "unknown")
    assert code == 0
    assert "0/0 passed" in out
    assert "warning" in capsys.readouterr().err


def test_verify_json_report(tmp_path):
    path = tmp_path / "report.json"
    code, _ = call("verify", "--suite", "B_closed_143", "--format", "json", "-o", str(path))
    assert code == 0
    rows = json.loads(path.read_text())
    assert len(rows) == 1
    assert set(rows[0]) == {"id", "description", "anchor", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "pass", "seconds"}
    assert rows[0]["pass"] is True
    assert isinstance(rows[0]["lhs"], str)


def test_verify_csv_report():
    code, out = call("verify", "--suite", "B_closed_143", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()[:2]
    assert header.startswith("id,description,anchor,lhs")
    assert row.startswith("B_closed_143,")


def test_verify_failure_exit_code(tmp_path):
    cfg = tmp_path / "settings.cfg"
    cfg.write_text("# force a failure\ntolerance.B_closed_143 = 0\n")
    code, out = call("verify", "--suite", "B_closed_143", "--config", str(cfg))
    assert code == 1
    assert out.startswith("FAIL")


def test_config_precedence(tmp_path):
    cfg = tmp_path / "settings.cfg"
    cfg.write_text("digits = 30\nparallelism = 3\nformat = csv\nqtrunc = 50\n")
    base = resolve_config(config_path=str(cfg), env={})
    assert (base.digits, base.parallelism, base.output_format, base.qtrunc_override) == (30, 3, "csv", 50)
    env = resolve_config(config_path=str(cfg), env={"MOMENTS_DIGITS": "35", "MOMENTS_PARALLELISM": "2"})
    assert (env.digits, env.parallelism) == (35, 2)
    flag = resolve_config(digits=45, fmt="json", config_path=str(cfg), env={"MOMENTS_DIGITS": "35"})
    assert (flag.digits, flag.output_format) == (45, "json")
    default = resolve_config(env={})
    assert default == Config()


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("digits\n")
    with pytest.raises(UsageError):
        read_config_file(str(bad))
    with pytest.raises(UsageError):
        read_config_file(str(tmp_path / "missing.cfg"))
    with pytest.raises(UsageError):
        resolve_config(fmt="yaml", env={})
    with pytest.raises(UsageError):
        resolve_config(env={"MOMENTS_DIGITS": "many"})


@pytest.mark.parametrize(
    "text,value",
    [("0.5+0.6i", (0.5, 0.6)), ("1/2+3/5i", (0.5, 0.6)), ("0.5+0.6j", (0.5, 0.6)), ("i", (0, 1)), ("-1/4-2i", (-0.25, -2)), ("3", (3, 0))],
)
def test_parse_point(text, value):
    z = parse_point(text)
    assert abs(z - mpmath.mpc(*value)) < 1e-15


def test_parse_point_rejects_garbage():
    with pytest.raises(UsageError):
        parse_point("1+2k")


@pytest.mark.skipif(shutil.which("besselmoments") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["besselmoments", "eval", "ikm", "1", "2", "1", "--digits", "20"], capture_output=True, text=True, timeout=120)
    assert p.returncode == 0
    assert p.stdout.startswith("0.60459978807")
