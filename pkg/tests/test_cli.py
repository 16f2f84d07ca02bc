import json
import math

import numpy as np
import pytest

from twistcc.cli import main
from twistcc.geometry import config_from_json, config_to_json, PlanarConfig, PotentialParams

from oracles import equilateral_config, square_config


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(config_to_json(equilateral_config((1.0, 2.0, 3.0)), PotentialParams(3.0)))
    return str(path)


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(config_to_json(square_config((1.0, 1.0, 3.0, 5.0)), PotentialParams(3.0)))
    return str(path)


def test_eval_exit_codes(triangle_file, square_file, tmp_path, capsys):
    assert main(["eval", triangle_file]) == 0
    assert main(["eval", square_file]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"A": 3.0, "masses": [1, 1], "positions": [[0,')
    assert main(["eval", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_eval_csv_and_manifest(triangle_file, tmp_path, capsys):
    out = tmp_path / "resid.csv"
    assert main(["eval", triangle_file, "--csv", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "i,j,la,b_ij,b_ji"
    assert len(lines) == 4  # header + 3 pairs
    manifest = json.loads((tmp_path / "resid.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "eval"
    assert manifest["outputs"] == [str(out)]
    assert manifest["tolerances"]["tol"] == 1e-10


def test_eval_unknown_flag(triangle_file):
    with pytest.raises(SystemExit) as exc:
        main(["eval", triangle_file, "--bogus"])
    assert exc.value.code == 2


def test_descend_cli(square_file, tmp_path, capsys):
    traj = tmp_path / "traj.csv"
    final = tmp_path / "final.json"
    assert main(["descend", square_file, "--traj", str(traj),
                 "--final", str(final)]) == 0
    header = traj.read_text().splitlines()[0]
    assert header == "step,x1,y1,x2,y2,x3,y3,x4,y4,I,f"
    cfg, params = config_from_json(final.read_text())
    from twistcc.twist import cc_residual
    assert cc_residual(cfg, params, 1e-10).is_cc
    # deterministic rerun: byte-identical outputs
    first = traj.read_bytes()
    assert main(["descend", square_file, "--traj", str(traj),
                 "--final", str(final)]) == 0
    assert traj.read_bytes() == first


def test_descend_random_seeded(tmp_path):
    traj1 = tmp_path / "r1.csv"
    traj2 = tmp_path / "r2.csv"
    assert main(["descend", "--random", "4", "--seed", "7", "--traj", str(traj1)]) == 0
    assert main(["descend", "--random", "4", "--seed", "7", "--traj", str(traj2)]) == 0
    assert traj1.read_bytes() == traj2.read_bytes()
    assert main(["descend"]) == 2  # neither config nor --random


def test_flow_cli(square_file, tmp_path):
    traj = tmp_path / "flow.csv"
    assert main(["flow", square_file, "--pairs", "1-2:1.0,1-3:1.0,1-4:1.0",
                 "--dt", "0.001", "--steps", "200", "--traj", str(traj)]) == 0
    rows = traj.read_text().splitlines()
    assert len(rows) == 202
    first = rows[1].split(",")
    last = rows[-1].split(",")
    assert abs(float(last[-2]) - float(first[-2])) < 1e-8 * float(first[-2])  # I conserved


def test_hessian_cli_lagrange_structure(triangle_file, tmp_path, capsys):
    out = tmp_path / "hess.csv"
    assert main(["hessian", triangle_file, "--normalized", "--csv", str(out)]) == 0
    txt = capsys.readouterr().out
    assert "signature = (0 neg, 1 zero, 2 pos)" in txt
    rows = [r.split(",") for r in out.read_text().splitlines()[1:]]
    entries = {(r[1], r[2]): float(r[5]) for r in rows if r[0] == "entry"}
    # off-diagonal entries of the equilateral twist Hessian are all -3A/4
    A = 3.0
    for a in range(3):
        for b in range(3):
            if a != b:
                assert entries[(str(a), str(b))] == pytest.approx(-3 * A / 4, rel=1e-12)


def test_kite_map_cli(tmp_path):
    csv_out = tmp_path / "map.csv"
    pgm_out = tmp_path / "map.pgm"
    assert main(["kite-map", "--z3", "1.75:2.05:10", "--z4", "0.76:0.86:10",
                 "--A", "3", "--csv", str(csv_out), "--pgm", str(pgm_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0].startswith("z3,z4,class,mu31,mu41,x2,idx_Hs,idx_Ha,idx_total")
    assert len(lines) == 101
    assert pgm_out.read_bytes().startswith(b"P5\n10 10\n255\n")
    manifest = json.loads((tmp_path / "map.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "kite-map"
    # config re-read round trip: x2 column reproduces the float exactly
    from twistcc.kite import KiteShape, kite_scale
    for line in lines[1:]:
        parts = line.split(",")
        if parts[2] in ("tall", "wide") and parts[5]:
            x2 = kite_scale(KiteShape(float(parts[0]), float(parts[1])),
                            PotentialParams(3.0))
            assert float(parts[5]) == x2


def test_certify_cli(tmp_path):
    out = tmp_path / "cert.csv"
    assert main(["certify", "--z3", "1.99,2.01", "--z4", "0.79,0.81",
                 "--A", "3", "--subdivide", "1", "--csv", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "z3_lo,z3_hi,z4_lo,z4_hi,idx_Hs,cert_Hs,idx_Ha,cert_Ha,idx_total"
    assert len(lines) == 5


def test_lagrange_cli(tmp_path, capsys):
    out = tmp_path / "lagrange.csv"
    assert main(["lagrange", "--masses", "1,2,3", "--A", "3", "--csv", str(out)]) == 0
    txt = capsys.readouterr().out
    assert "signature = (0 neg, 1 zero, 2 pos)" in txt
    rows = [r.split(",") for r in out.read_text().splitlines()[1:]]
    coeffs = {r[1]: float(r[5]) for r in rows if r[0] == "charpoly"}
    assert coeffs["a1"] == pytest.approx(-8.0, rel=1e-14)
    assert coeffs["a2"] == 1.0
    assert main(["lagrange", "--masses", "1,-2,3"]) == 2


def test_bundled_examples(tmp_path):
    import pathlib
    data = pathlib.Path(__file__).resolve().parent.parent / "data"
    assert main(["eval", str(data / "lagrange_123.json")]) == 0
    traj = tmp_path / "traj.csv"
    assert main(["descend", str(data / "square_1135.json"),
                 "--traj", str(traj)]) == 0
    assert traj.exists()


def test_roundtrip_17_digits(tmp_path):
    # values written by the CLI re-read to the identical double
    vals = [math.pi, 1 / 3, 2 ** -40, 1.2345678901234567e-7]
    from twistcc.cli import fmt
    for v in vals:
        assert float(fmt(v)) == v
