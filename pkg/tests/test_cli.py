import csv
import io
import math

import pytest

from levelstat.cli import main

from conftest import EXAMPLE, EXAMPLE_SAMPLE


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def example_file(tmp_path):
    p = tmp_path / "perm.txt"
    p.write_text(" ".join(map(str, EXAMPLE)) + "\n")
    return str(p)


def test_rsk_example(capsys, example_file):
    code, out, _ = _run(capsys, "rsk", example_file)
    assert code == 0
    assert "shape: 4,3,2,1,1" in out
    h = float(out.split("H: ")[1].split()[0])
    assert h == pytest.approx(math.log(17280), rel=1e-15)
    assert "kappa: 1 2 1 1 3 1 2 3 4 2 5" in out


def test_rsk_sample_and_identity(capsys, tmp_path):
    s = tmp_path / "s.txt"
    s.write_text("\n".join(map(str, EXAMPLE_SAMPLE)))
    code, out, _ = _run(capsys, "rsk", str(s))
    assert code == 0 and "input: sample" in out and "shape: 4,3,2,1,1" in out
    i = tmp_path / "i.txt"
    i.write_text("1 2 3")
    code, out, _ = _run(capsys, "rsk", str(i))
    assert "shape: 3" in out and "kappa: 1 1 1" in out
    lp = float(out.split("LP: ")[1].split()[0])
    assert lp == pytest.approx(math.log(6))


def test_rsk_emit_pq(capsys, tmp_path, example_file):
    code, _, _ = _run(capsys, "rsk", example_file, "--emit-pq", "--out", str(tmp_path / "o"))
    assert code == 0
    rows = _rows((tmp_path / "o" / "rsk_pq.csv").read_text())
    assert [r["entries"] for r in rows if r["tableau"] == "P"] == ["1 3 4 6", "2 7 10", "5 8", "9", "11"]


def test_malformed_input_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 x\n")
    code, _, err = _run(capsys, "rsk", str(bad))
    assert code == 2 and ":2:" in err
    code, _, _ = _run(capsys, "rsk", str(tmp_path / "missing.txt"))
    assert code == 2
    m = tmp_path / "m.txt"
    m.write_text("0,1\n1\n")
    code, _, err = _run(capsys, "simulate", "--model", "checkerboard", "--matrix", str(m), "--replicas", "2")
    assert code == 2 and ":2:" in err


def test_enumerate(capsys):
    code, out, _ = _run(capsys, "enumerate", "--n", "11")
    rows = _rows(out)
    assert code == 0 and len(rows) == 56
    assert sum(int(r["accepted"]) for r in rows) == 27
    _, out, _ = _run(capsys, "enumerate", "--n", "1")
    assert len(_rows(out)) == 1
    _, out, _ = _run(capsys, "enumerate", "--n", "5")
    rows = _rows(out)
    assert len(rows) == 7 and sum(float(r["prob"]) for r in rows) == pytest.approx(1, abs=1e-14)


def test_enumerate_histogram(capsys):
    _, out, _ = _run(capsys, "enumerate", "--n", "12", "--histogram")
    rows = _rows(out)
    assert sum(int(r["count"]) for r in rows) == math.factorial(12)


def test_test_exit_codes(capsys, tmp_path, example_file):
    code, out, _ = _run(capsys, "test", example_file)
    assert code == 0 and "decision=accept" in out
    ident = tmp_path / "id.txt"
    ident.write_text(" ".join(map(str, range(1, 12))))
    code, out, _ = _run(capsys, "test", str(ident))
    assert code == 1 and "decision=reject" in out
    code, out, _ = _run(capsys, "test", str(ident), "--test", "h_test")
    assert code == 1 and "statistic=H" in out


def test_simulate(capsys):
    _, out, _ = _run(capsys, "simulate", "--model", "iid_uniform", "--n", "2", "--replicas", "20")
    hs = {r["h"] for r in _rows(out)}
    assert hs == {format(math.log(2), ".17g")}


def test_simulate_exp_family_t0_uniform(capsys):
    import itertools

    _, out, _ = _run(capsys, "simulate", "--model", "exp_family", "--n", "4", "--t", "0", "--replicas", "24000", "--chain")
    rows = _rows(out)
    from collections import Counter

    from levelstat.plancherel import plancherel_record
    from levelstat.young import partitions_of

    counts = Counter(r["shape"] for r in rows)
    for lam in partitions_of(4):
        p = plancherel_record(lam).prob
        assert abs(counts[str(lam)] / 24000 - p) < 4 * math.sqrt(p * (1 - p) / 24000)


def test_figures(capsys, tmp_path):
    _, out, _ = _run(capsys, "figures", "--figure", "y-process", "--n", "11")
    rows = _rows(out)
    assert len(rows) == 11 and all(0 < float(r["y_value"]) < 3e6 for r in rows)
    _, out, _ = _run(capsys, "figures", "--figure", "h-hist", "--n", "30", "--replicas", "1")
    assert len(_rows(out)) == 1
    _, out, _ = _run(capsys, "figures", "--figure", "min-shape", "--n", "8")
    assert [int(r["lambda_k"]) for r in _rows(out)] == [4, 2, 1, 1]
    code, _, _ = _run(capsys, "figures", "--figure", "h-hist", "--n", "30", "--replicas", "50", "--out", str(tmp_path))
    assert code == 0 and (tmp_path / "h_hist_n30.svg").read_text().startswith("<svg")
    with pytest.raises(SystemExit):
        main(["figures", "--figure", "nope", "--n", "3"])


def test_power_grid(capsys, tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text("iid_uniform 11\nar1 11 rho=0.9\n")
    code, out, _ = _run(capsys, "power", "--grid", str(grid), "--test", "shape_set", "--replicas", "50")
    rows = _rows(out)
    assert code == 0 and [r["model"] for r in rows] == ["iid_uniform", "ar1"]


def test_decompose(capsys):
    code, out, _ = _run(capsys, "decompose", "--shape", "3,2,1")
    rows = _rows(out)
    assert code == 0 and rows[0]["reference_value"] == ""
    assert float(rows[0]["d_to_uniform"]) > float(rows[0]["kl_to_uniform"])


def test_byte_identical_across_workers(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d, w in ((a, "1"), (b, "2")):
        main(["simulate", "--model", "ar1", "--rho", "0.5", "--n", "200", "--replicas", "30",
              "--seed", "42", "--workers", w, "--out", str(d)])
    capsys.readouterr()
    name = "simulate_ar1_n200.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()
