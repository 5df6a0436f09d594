import json

import pytest

from lattice_llt.cli import main, parse_count

COIN = '{"v0": 0, "D": 1, "probs": {"0": 0.5, "1": 0.5}}'


@pytest.fixture
def three_file(tmp_path):
    p = tmp_path / "three.json"
    p.write_text('{"v0": 0, "D": 1, "probs": {"0": 0.5, "1": 0.3, "2": 0.2}}')
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(out):
    return [line for line in out.splitlines() if not line.startswith("#")]


def test_pmf_ok(capsys, three_file):
    code, out, _ = run(capsys, "pmf", "--pmf", three_file)
    assert code == 0
    assert out.startswith("# lattice_llt ")
    rows = dict(line.split(",") for line in body(out)[1:])
    assert float(rows["mu"]) == pytest.approx(0.7)
    assert rows["basber"] == "true"


def test_pmf_errors(capsys, tmp_path):
    bad = tmp_path / "span.json"
    bad.write_text('{"v0": 0, "D": 1, "probs": {"0": 0.5, "2": 0.5}}')
    code, _, err = run(capsys, "pmf", "--pmf", str(bad))
    assert code == 2 and "NonMaximalSpan" in err
    short = tmp_path / "short.json"
    short.write_text('{"v0": 0, "D": 1, "probs": {"0": 0.5, "1": 0.499}}')
    code, _, err = run(capsys, "pmf", "--pmf", str(short))
    assert code == 2 and "SumNotOne" in err


def test_convolve_table(capsys):
    code, out, _ = run(capsys, "convolve", "--pmf", COIN, "--n", "2")
    assert code == 0
    assert body(out) == ["value,offset,prob", "0.0,0,0.25", "1.0,1,0.5", "2.0,2,0.25"]


def test_convolve_point(capsys, three_file):
    code, out, _ = run(capsys, "convolve", "--pmf", three_file, "--n", "3", "--at", "2")
    assert code == 0
    assert float(body(out)[1].split(",")[1]) == pytest.approx(0.285)


def test_convolve_too_large(capsys):
    code, _, err = run(capsys, "convolve", "--pmf", COIN, "--n", "10^9")
    assert code == 2 and "SupportTooLarge" in err


def test_chernoff(capsys):
    code, out, _ = run(capsys, "chernoff", "--vartheta", "0.5", "--theta", "0.25", "--n", "10")
    n, exact, bound, holds = body(out)[1].split(",")
    assert float(exact) == pytest.approx(0.054688, abs=1e-6)
    assert float(bound) == pytest.approx(0.270, abs=1e-3)
    assert holds == "true"


def test_chernoff_domain(capsys):
    code, _, err = run(capsys, "chernoff", "--vartheta", "0.5", "--rho", "1.0")
    assert code == 2 and "DomainError" in err


def test_corr_format(capsys):
    code, out, _ = run(capsys, "corr", "--pmf", COIN, "--kappa", "0", "--grid", "decade", "--nmax", "100")
    assert code == 0
    lines = out.splitlines()
    assert body(out)[0] == "n,m,exact_cov,thm1_shape,cor1_shape,ratio"
    assert lines[-3].startswith("# C_hat,")
    assert float(lines[-3].split(",")[1]) >= 0


def test_asllt(capsys):
    code, out, _ = run(capsys, "asllt", "--pmf", COIN, "--paths", "3", "--nmax", "1000", "--seed", "7", "--expected")
    assert code == 0
    assert body(out)[0] == "N,mean,std,stderr,min,max,expected"
    assert out.splitlines()[-1] == "# limit,0.7978845608028654"


def test_bpart_and_llt(capsys, three_file):
    code, out, _ = run(capsys, "bpart", "--pmf", three_file)
    assert code == 0 and "# reconstruction_residual,0.0" in out
    code, out, _ = run(capsys, "llt", "--coin", "--ns", "1,10")
    assert code == 0 and len(body(out)) == 3
    code, out, _ = run(capsys, "llt", "--pmf", three_file, "--ns", "10,100,1000")
    assert code == 0 and "# alpha_hat," in out


def test_json_mirrors_csv(capsys):
    code, out, _ = run(capsys, "convolve", "--pmf", COIN, "--n", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["columns"] == ["value", "offset", "prob"]
    assert doc["rows"] == [[0.0, 0, 0.25], [1.0, 1, 0.5], [2.0, 2, 0.25]]
    assert doc["config"]["n"] == 2


def test_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.csv"
        assert main(["asllt", "--pmf", COIN, "--paths", "4", "--nmax", "2000", "--seed", "11", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_parse_count():
    assert parse_count("10^9") == 10**9
    assert parse_count("1e5") == 100000
    assert parse_count("42") == 42
