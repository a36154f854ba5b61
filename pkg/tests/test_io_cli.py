"""Body files, CSV formatting and the command-line interface."""

import csv
import io

import numpy as np
import pytest

from centroid_lab import cli
from centroid_lab.errors import NotSymmetric, ParseError
from centroid_lab.io import fmt, load_body, parse_body_file, parse_body_spec, write_csv

SQUARE = "2 4\n0.5 0.5\n0.5 -0.5\n-0.5 0.5\n-0.5 -0.5\n"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_square(tmp_path):
    f = tmp_path / "sq.txt"
    f.write_text("# unit square\n" + SQUARE.replace("0.5 0.5\n", "0.5 0.5   # corner\n"))
    P = parse_body_file(f)
    assert P.n_vertices == 4 and P.volume == pytest.approx(1.0)


def test_parse_normalize(tmp_path):
    f = tmp_path / "cross.txt"
    f.write_text("2 4\n1 0\n-1 0\n0 1\n0 -1\n")
    assert parse_body_file(f).volume == pytest.approx(2.0)
    assert parse_body_file(f, normalize=True).volume == pytest.approx(1.0)


def test_parse_asymmetric(tmp_path):
    f = tmp_path / "tri.txt"
    f.write_text("2 3\n1 0\n0 1\n-1 -1\n")
    with pytest.raises(Exception) as exc:
        parse_body_file(f)
    assert isinstance(exc.value, (NotSymmetric,)) or "span" in str(exc.value)


def test_parse_asymmetric_full_rank(tmp_path):
    f = tmp_path / "quad.txt"
    f.write_text("2 4\n1 0\n0 1\n-1 -1\n0.9 -0.2\n")
    with pytest.raises(NotSymmetric):
        parse_body_file(f)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("2 5\n0.5 0.5\n0.5 -0.5\n-0.5 0.5\n-0.5 -0.5\n", 5, 1),
        ("2 3\n0.5 0.5\n0.5 -0.5\n-0.5 0.5\n-0.5 -0.5\n", 5, 1),
        ("2 4\n0.5 0.5\n0.5 x\n-0.5 0.5\n-0.5 -0.5\n", 3, 5),
        ("2 4\n0.5 0.5 0.1\n", 2, 1),
        ("two 4\n", 1, 1),
    ],
)
def test_parse_errors_name_the_line(tmp_path, text, line, col):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    with pytest.raises(ParseError) as exc:
        parse_body_file(f)
    assert exc.value.line == line and exc.value.column == col
    assert f"line {line}" in str(exc.value)


def test_body_specs():
    assert load_body("builtin:cube:3").volume == pytest.approx(1.0)
    assert load_body("builtin:polygon:8").n_vertices == 8
    assert load_body("builtin:ball:4").dim == 4
    assert parse_body_spec("builtin:cross:2").label == "cross2"
    with pytest.raises(ValueError):
        parse_body_spec("builtin:cube")


def test_fmt_and_csv():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(True) == "true" and fmt(3) == "3"
    text = write_csv([("a", 1.0, np.float64(2.5))], ["x", "y", "z"])
    assert text == "x,y,z\na,1,2.5\n"


def test_cli_support(capsys):
    code, out, _ = run(capsys, "support", "--body", "builtin:cube:2", "--p", "2", "--theta", "1,0")
    assert code == 0 and out.strip() == "0.2886751"
    code, out, _ = run(capsys, "support", "--body", "builtin:ball:2", "--p", "2", "--theta", "1,0")
    assert out.strip() == "0.2820948"
    code, out, _ = run(capsys, "support", "--body", "builtin:cube:2", "--p", "4", "--theta", "3,4", "--band")
    assert "band" in out


def test_cli_usage_errors(capsys):
    code, _, err = run(capsys, "support", "--body", "builtin:cube:2", "--p", "2", "--theta", "1,0,0")
    assert code == 2 and "--theta" in err
    code, _, err = run(capsys, "support", "--body", "nope.txt", "--p", "2", "--theta", "1,0")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["support", "--body", "builtin:cube:2", "--p", "2", "--theta", "1,0", "--tol-profile", "slow"])
    assert exc.value.code == 2


def test_cli_body_and_profile(capsys, tmp_path):
    code, out, _ = run(capsys, "body", "--body", "builtin:cube:3")
    assert code == 0 and "vertices 8" in out and "polar    10.66667" in out
    code, out, _ = run(capsys, "body", "--body", "builtin:ball:3")
    assert "analytic ball" in out
    code, out, _ = run(capsys, "profile", "--body", "builtin:cube:2", "--theta", "0.8660254037844387,0.5", "--p", "10")
    assert code == 0 and "t_peak" in out
    f = tmp_path / "prof.csv"
    code, _, _ = run(capsys, "profile", "--body", "builtin:cube:2", "--theta", "1,1", "--samples", "5", "--out", str(f))
    rows = list(csv.reader(f.open()))
    assert rows[0] == ["t", "f"] and len(rows) == 6


def test_cli_polarvol(capsys):
    code, out, _ = run(capsys, "polarvol", "--body", "builtin:cube:2", "--resolution", "1024", "--p", "8")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["polar_volume"]) == pytest.approx(8.0, abs=1e-8)
    assert float(rows[1]["polar_volume"]) > 8.0


def test_cli_rate_and_fit(capsys, tmp_path):
    f = tmp_path / "rate.csv"
    code, _, err = run(capsys, "rate", "--body", "builtin:cube:2", "--p", "2^6,2^7,2^8,2^9,2^10",
                       "--tol-profile", "fast", "--out", str(f))
    assert code == 0 and "outside" not in err
    rows = list(csv.DictReader(f.open()))
    assert list(rows[0]) == cli.RATE_HEADER
    for r in rows:
        R, e = float(r["R"]), float(r["err"])
        assert float(r["L"]) - 3 * e <= R <= float(r["U"]) + 3 * e
    g = tmp_path / "fit.csv"
    code, _, _ = run(capsys, "fit", "--in", str(f), "--out", str(g))
    fit = list(csv.DictReader(g.open()))
    assert code == 0 and list(fit[0]) == cli.FIT_HEADER and fit[0]["body"] == "cube2"
    code, _, err = run(capsys, "fit", "--in", str(f), "--p-min", "1000")
    assert code == 2 and "at least 4" in err


def test_cli_approx(capsys):
    code, out, err = run(capsys, "approx", "--body", "builtin:cube:2", "--p", "16,64,256",
                         "--margin-p", "16", "--pairs", "200", "--resolution", "1024")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [float(r["p"]) for r in rows] == [16, 64, 256]
    assert all(r["contained"] == "true" for r in rows)
    assert "p0 = 16" in err


def test_cli_verify_single_suite(capsys, tmp_path):
    f = tmp_path / "v.csv"
    code, _, err = run(capsys, "verify", "--suite", "special", "--out", str(f))
    assert code == 0 and "checks passed" in err
    assert f.read_text().startswith("suite,check,value,bound,passed\n")


def test_cli_verify_failure_exit(monkeypatch, capsys):
    from centroid_lab import verify

    monkeypatch.setitem(verify.SUITES, "special", lambda *a: [("special", "forced", 1.0, 0.0, False)])
    code, _, err = run(capsys, "verify", "--suite", "special")
    assert code == 1 and "FAILED special:forced" in err


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv("CENTROID_LAB_THREADS", "3")
    args = cli.build_parser().parse_args(["verify"])
    assert args.threads == 3
    monkeypatch.setenv("CENTROID_LAB_THREADS", "junk")
    assert cli.build_parser().parse_args(["verify"]).threads == 1
