import csv
import subprocess
import sys


from polyeval import io
from polyeval.cli import main

from helpers import dist1, pow2, rand_points, rand_poly, seeded


def run(*args):
    return main([str(a) for a in args])


def test_eval_example(tmp_path):
    (tmp_path / "f.poly").write_text("degree 1\n0x1p0\n0x1p0\n")
    (tmp_path / "x.txt").write_text("0x1p0\n")
    assert run("eval", "--poly", tmp_path / "f.poly", "--points", tmp_path / "x.txt",
               "--prec", 20, "--out", tmp_path / "y.txt") == 0
    assert (tmp_path / "y.txt").read_text().split() == ["0x1p1+0x0p0i"]


def test_interp_then_eval_roundtrip(tmp_path):
    rng = seeded(3)
    pts = rand_points(rng, 9, 2, 12)
    vals = rand_points(rng, 9, 3, 12)
    io.write_points(tmp_path / "x.txt", pts)
    io.write_points(tmp_path / "v.txt", vals)
    assert run("interp", "--points", tmp_path / "x.txt", "--values", tmp_path / "v.txt",
               "--prec", 80, "--out", tmp_path / "f.poly") == 0
    assert run("eval", "--poly", tmp_path / "f.poly", "--points", tmp_path / "x.txt",
               "--prec", 60, "--out", tmp_path / "y.txt") == 0
    got = io.read_points(tmp_path / "y.txt")
    for y, v in zip(got, vals):
        assert dist1([y], [v]) <= 2 * pow2(-60) + pow2(-70)


def test_shift_zero_is_identity(tmp_path):
    F = rand_poly(seeded(4), 6, 2, 10)
    io.write_poly(tmp_path / "f.poly", F)
    assert run("shift", "--poly", tmp_path / "f.poly", "--m", "0x0p0", "--prec", 50,
               "--out", tmp_path / "g.poly") == 0
    assert io.read_poly(tmp_path / "g.poly").coeffs == F.coeffs
    assert run("shift", "--poly", tmp_path / "f.poly", "--m", "0x1p0+0x1p-1i", "--prec", 50,
               "--out", tmp_path / "h.poly") == 0


def test_refine(tmp_path):
    (tmp_path / "f.poly").write_text("degree 2\n-0x1p1\n0x0p0\n0x1p0\n")
    (tmp_path / "iv.txt").write_text("# sqrt 2\n0x1p0 0x1p1\n")
    assert run("refine", "--poly", tmp_path / "f.poly", "--intervals", tmp_path / "iv.txt",
               "--prec", 40, "--out", tmp_path / "out.txt") == 0
    (iv,) = io.read_intervals(tmp_path / "out.txt")
    a, b = iv.a.to_fraction(), iv.b.to_fraction()
    assert a * a < 2 < b * b and b - a <= pow2(-40)


def test_exit_codes(tmp_path, capsys):
    (tmp_path / "bad.poly").write_text("degree 1\n0x1p0\nnope\n")
    (tmp_path / "x.txt").write_text("0x1p0\n")
    assert run("eval", "--poly", tmp_path / "bad.poly", "--points", tmp_path / "x.txt",
               "--prec", 10, "--out", tmp_path / "y.txt") == 2
    assert "bad.poly:3" in capsys.readouterr().err
    (tmp_path / "f.poly").write_text("degree 2\n-0x1p1\n0x0p0\n0x1p0\n")
    (tmp_path / "iv.txt").write_text("0x1p1 0x1p2\n")
    assert run("refine", "--poly", tmp_path / "f.poly", "--intervals", tmp_path / "iv.txt",
               "--prec", 10, "--out", tmp_path / "o.txt") == 3
    assert "EvaluationUndecidable" in capsys.readouterr().err
    assert not (tmp_path / "o.txt").exists()
    assert run("eval", "--poly", tmp_path / "missing.poly", "--points", tmp_path / "x.txt",
               "--prec", 10, "--out", tmp_path / "y.txt") == 1


def test_bench_csv(tmp_path):
    assert run("bench", "--mode", "eval", "--n", 8, "--prec", 32, "--repeat", 2,
               "--out", tmp_path / "b.csv") == 0
    rows = list(csv.DictReader((tmp_path / "b.csv").open()))
    assert len(rows) == 2 and rows[0]["mode"] == "eval" and float(rows[0]["seconds"]) > 0


def test_workers_determinism(tmp_path):
    rng = seeded(5)
    io.write_poly(tmp_path / "f.poly", rand_poly(rng, 30, 3, 12))
    io.write_points(tmp_path / "x.txt", rand_points(rng, 30, 2, 12))
    outs = []
    for w in (1, 4):
        out = tmp_path / f"y{w}.txt"
        assert run("eval", "--poly", tmp_path / "f.poly", "--points", tmp_path / "x.txt",
                   "--prec", 100, "--out", out, "--workers", w) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "polyeval", "--help"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and "eval" in res.stdout
