"""Command-line interface.

Subcommands: eval, descend, flow, hessian, kite-map, certify, lagrange.
All file outputs are written atomically (write-then-rename), all numbers
with 17 significant digits so they re-read losslessly, and every run that
produces files also emits a JSON manifest next to its first output.
Body and pair indices are 1-based on the command line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .certify import certify_box
from .geometry import (GeometryError, PlanarConfig, PotentialParams,
                       build_pair_table, config_to_json, euler_residual, f_value,
                       load_config, moment_of_inertia, potential_u)
from .hessian import assemble_twist_hessian, lagrange_char_poly_coeffs, morse_index
from .intervals import Interval
from .kite import (MAP_CSV_COLUMNS, KiteError, cell_csv_row, kite_index_map,
                   write_pgm)
from .solver import FlowSpec, descend, flow_fixed_combo, rescale_to_cc_size
from .twist import (albouy_chenciner_asym, cc_residual, laura_andoyer,
                    twist_span_basis)


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_atomic(path: str, data: str | bytes) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    tmp = f"{path}.tmp"
    with open(tmp, mode) as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_csv_atomic(path: str, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    write_atomic(path, buf.getvalue())


@dataclass
class RunManifest:
    subcommand: str
    arguments: dict
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__
    timestamp_utc: str = ""

    def write(self) -> None:
        if not self.outputs:
            return
        self.timestamp_utc = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        path = self.outputs[0] + ".manifest.json"
        write_atomic(path, json.dumps(asdict(self), indent=2) + "\n")


def _load(path: str) -> tuple[PlanarConfig, PotentialParams]:
    try:
        return load_config(path)
    except json.JSONDecodeError as exc:
        raise SystemExitError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise SystemExitError(f"{path}: {exc}")
    except GeometryError as exc:
        raise SystemExitError(f"{path}: {exc}")


class SystemExitError(Exception):
    """Input error: reported on stderr with exit status 2."""


def _parse_pairs(text: str, n: int):
    terms = []
    try:
        for chunk in text.split(","):
            pair, _, coeff = chunk.partition(":")
            a, _, b = pair.partition("-")
            i, j = int(a) - 1, int(b) - 1
            c = float(coeff) if coeff else 1.0
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"pair {pair} out of range")
            terms.append((c, (i, j)))
    except ValueError as exc:
        raise SystemExitError(f"bad --pairs value {text!r}: {exc}")
    return tuple(terms)


def _parse_range(text: str):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
        if not (hi > lo and count > 0):
            raise ValueError
        return lo, hi, count
    except ValueError:
        raise SystemExitError(f"bad range {text!r}, expected lo:hi:count")


def _parse_interval(text: str) -> Interval:
    try:
        a, b = (float(v) for v in text.split(","))
        return Interval(min(a, b), max(a, b))
    except Exception:
        raise SystemExitError(f"bad interval {text!r}, expected a,b")


# --- subcommands -----------------------------------------------------------------

def cmd_eval(args) -> int:
    config, params = _load(args.config)
    table = build_pair_table(config, params)
    m = config.masses
    res = cc_residual(config, params, tol=args.tol)
    rows = []
    for i in range(config.n):
        for j in range(i + 1, config.n):
            rows.append([i + 1, j + 1,
                         fmt(laura_andoyer(table, m, (i, j))),
                         fmt(albouy_chenciner_asym(table, m, i, j)),
                         fmt(albouy_chenciner_asym(table, m, j, i))])
    U = potential_u(config, params)
    I = moment_of_inertia(config)
    print(f"f = {fmt(f_value(config, params))}")
    print(f"U = {fmt(U)}")
    print(f"I = {fmt(I)}")
    print(f"euler_residual = {fmt(euler_residual(config, params))}")
    print(f"max_la = {fmt(res.max_la)}")
    print(f"max_ac = {fmt(res.max_ac)}")
    print(f"is_cc = {res.is_cc} (tol = {fmt(args.tol)})")
    if args.csv:
        write_csv_atomic(args.csv, ["i", "j", "la", "b_ij", "b_ji"], rows)
        RunManifest("eval", {"config": args.config}, [args.config], [args.csv],
                    {"tol": args.tol}).write()
    return 0 if res.is_cc else 1


def _trajectory_rows(states, params):
    for step, cfg in enumerate(states):
        row = [step] + [fmt(v) for v in cfg.positions]
        row.append(fmt(moment_of_inertia(cfg)))
        row.append(fmt(f_value(cfg, params)))
        yield row


def _trajectory_header(n):
    cols = ["step"]
    for i in range(1, n + 1):
        cols += [f"x{i}", f"y{i}"]
    return cols + ["I", "f"]


def cmd_descend(args) -> int:
    if args.config:
        config, params = _load(args.config)
        inputs = [args.config]
    elif args.random:
        rng = np.random.default_rng(args.seed)
        n = args.random
        while True:
            pts = rng.uniform(-1, 1, (n, 2))
            d = pts[:, None, :] - pts[None, :, :]
            r = np.hypot(d[..., 0], d[..., 1])
            if r[np.triu_indices(n, 1)].min() > 0.2:
                break
        config = PlanarConfig.from_points(pts, np.ones(n))
        params = PotentialParams(args.A)
        inputs = []
    else:
        raise SystemExitError("descend needs a config file or --random N")
    report = descend(config, params, tol=args.tol, max_iter=args.max_iter,
                     record=bool(args.traj))
    final = rescale_to_cc_size(report.config, params)
    print(f"converged = {report.converged}")
    print(f"iterations = {report.iterations}")
    print(f"max_la_residual = {fmt(report.max_la_residual)}")
    print(f"f = {fmt(report.f_value)}")
    print(f"collinear_collapse = {report.collinear_collapse}")
    outputs = []
    if args.traj:
        states = [PlanarConfig(pos, config.masses) for _, pos, _, _ in report.history]
        states.append(report.config)
        write_csv_atomic(args.traj, _trajectory_header(config.n),
                         _trajectory_rows(states, params))
        outputs.append(args.traj)
    if args.final:
        write_atomic(args.final, config_to_json(final, params) + "\n")
        outputs.append(args.final)
    if outputs:
        RunManifest("descend", {"config": args.config, "random": args.random},
                    inputs, outputs,
                    {"tol": args.tol, "max_iter": args.max_iter},
                    args.seed).write()
    return 0 if report.converged else 1


def cmd_flow(args) -> int:
    config, params = _load(args.config)
    terms = _parse_pairs(args.pairs, config.n)
    spec = FlowSpec(terms=terms, dt=args.dt, steps=args.steps)
    traj = flow_fixed_combo(config, params, spec)
    write_csv_atomic(args.traj, _trajectory_header(config.n),
                     _trajectory_rows(traj, params))
    RunManifest("flow", {"config": args.config, "pairs": args.pairs,
                         "dt": args.dt, "steps": args.steps},
                [args.config], [args.traj]).write()
    print(f"steps_completed = {len(traj) - 1}")
    return 0


def cmd_hessian(args) -> int:
    config, params = _load(args.config)
    basis, dim = twist_span_basis(config)
    tm = assemble_twist_hessian(config, params, basis, normalized=args.normalized)
    w = np.linalg.eigvalsh(tm.matrix)
    neg, zero, pos = morse_index(tm)
    rows = []
    for a in range(dim):
        for b in range(dim):
            rows.append(["entry", a, b, tm.directions[a].name,
                         tm.directions[b].name, fmt(tm.matrix[a, b])])
    for k, val in enumerate(np.sort(w)):
        rows.append(["eigenvalue", k, "", "", "", fmt(val)])
    print(f"span_dimension = {dim}")
    print(f"signature = ({neg} neg, {zero} zero, {pos} pos)")
    if args.csv:
        write_csv_atomic(args.csv, ["kind", "row", "col", "dir_row", "dir_col", "value"],
                         rows)
        RunManifest("hessian", {"config": args.config, "normalized": args.normalized},
                    [args.config], [args.csv]).write()
    return 0


def cmd_kite_map(args) -> int:
    z3_lo, z3_hi, n3 = _parse_range(args.z3)
    z4_lo, z4_hi, n4 = _parse_range(args.z4)
    params = PotentialParams(args.A)
    cells = kite_index_map(z3_lo, z3_hi, n3, z4_lo, z4_hi, n4, params)
    write_csv_atomic(args.csv, list(MAP_CSV_COLUMNS),
                     (cell_csv_row(c) for c in cells))
    outputs = [args.csv]
    if args.pgm:
        write_pgm(cells, n3, n4, args.pgm)
        outputs.append(args.pgm)
    computed = [c for c in cells if c.computed]
    totals = sorted({c.idx_total for c in computed})
    print(f"cells = {len(cells)}, admissible_computed = {len(computed)}")
    print(f"observed_total_indices = {totals}")
    RunManifest("kite-map", {"z3": args.z3, "z4": args.z4, "A": args.A},
                [], outputs).write()
    return 0


def cmd_certify(args) -> int:
    params = PotentialParams(args.A)
    z3 = _parse_interval(args.z3)
    z4 = _parse_interval(args.z4)
    k = max(0, args.subdivide)
    parts = 2 ** k
    rows = []
    decided = 0
    total = 0

    def split(iv: Interval, t: int):
        w = (iv.hi - iv.lo) / parts
        return Interval(iv.lo + t * w, iv.lo + (t + 1) * w)

    for a in range(parts):
        for b in range(parts):
            box3, box4 = split(z3, a), split(z4, b)
            cert = certify_box(box3, box4, params)
            total += 1
            if cert.total is not None:
                decided += 1
            rows.append([fmt(box3.lo), fmt(box3.hi), fmt(box4.lo), fmt(box4.hi),
                         "Unknown" if cert.hs.value is None else cert.hs.value,
                         cert.hs.certificate,
                         "Unknown" if cert.ha.value is None else cert.ha.value,
                         cert.ha.certificate,
                         "Unknown" if cert.total is None else cert.total])
    write_csv_atomic(args.csv,
                     ["z3_lo", "z3_hi", "z4_lo", "z4_hi", "idx_Hs", "cert_Hs",
                      "idx_Ha", "cert_Ha", "idx_total"], rows)
    print(f"boxes = {total}, certified = {decided}, coverage = {decided / total:.3f}")
    RunManifest("certify", {"z3": args.z3, "z4": args.z4, "A": args.A,
                            "subdivide": args.subdivide}, [], [args.csv]).write()
    return 0


def cmd_lagrange(args) -> int:
    try:
        masses = tuple(float(v) for v in args.masses.split(","))
    except ValueError:
        raise SystemExitError(f"bad --masses value {args.masses!r}")
    if len(masses) != 3 or min(masses) <= 0:
        raise SystemExitError("--masses needs three positive values m1,m2,m3")
    params = PotentialParams(args.A)
    import math
    pts = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0)]
    config = PlanarConfig.from_points(pts, masses)
    tm = assemble_twist_hessian(config, params, [(0, 1), (0, 2), (1, 2)],
                                normalized=True)
    a0, a1, a2 = lagrange_char_poly_coeffs(masses)
    w = np.sort(np.linalg.eigvalsh(tm.matrix))
    neg, zero, pos = morse_index(tm)
    print(f"signature = ({neg} neg, {zero} zero, {pos} pos)")
    print(f"eigenvalues = {', '.join(fmt(v) for v in w)}")
    print(f"char_poly_coeffs (a0, a1, a2) = {fmt(a0)}, {fmt(a1)}, {fmt(a2)}")
    rows = []
    for a in range(3):
        for b in range(3):
            rows.append(["entry", a, b, tm.directions[a].name,
                         tm.directions[b].name, fmt(tm.matrix[a, b])])
    for kk, val in enumerate(w):
        rows.append(["eigenvalue", kk, "", "", "", fmt(val)])
    for name, val in (("a0", a0), ("a1", a1), ("a2", a2)):
        rows.append(["charpoly", name, "", "", "", fmt(val)])
    if args.csv:
        write_csv_atomic(args.csv, ["kind", "row", "col", "dir_row", "dir_col", "value"],
                         rows)
        RunManifest("lagrange", {"masses": args.masses, "A": args.A},
                    [], [args.csv]).write()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twistcc",
        description="Planar central configurations: residuals, descent, twist "
                    "Hessians, kite index maps, and certified indices.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("eval", help="first-order residual report for a configuration")
    q.add_argument("config")
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--csv")
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("descend", help="gradient descent to a central configuration")
    q.add_argument("config", nargs="?")
    q.add_argument("--random", type=int, help="random start with N bodies")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--A", type=float, default=3.0)
    q.add_argument("--tol", type=float, default=1e-10)
    q.add_argument("--max-iter", type=int, default=50000)
    q.add_argument("--traj", help="trajectory CSV output")
    q.add_argument("--final", help="final rescaled configuration JSON")
    q.set_defaults(func=cmd_descend)

    q = sub.add_parser("flow", help="integrate a fixed twist combination")
    q.add_argument("config")
    q.add_argument("--pairs", required=True,
                   help="e.g. 1-2:1.0,1-3:1.0,1-4:1.0 (1-based bodies)")
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--steps", type=int, default=1000)
    q.add_argument("--traj", required=True)
    q.set_defaults(func=cmd_flow)

    q = sub.add_parser("hessian", help="twist-basis Hessian and eigenvalues")
    q.add_argument("config")
    q.add_argument("--basis", choices=["auto"], default="auto")
    q.add_argument("--normalized", action="store_true")
    q.add_argument("--csv")
    q.set_defaults(func=cmd_hessian)

    q = sub.add_parser("kite-map", help="Morse-index map over kite shapes")
    q.add_argument("--z3", required=True, help="lo:hi:n")
    q.add_argument("--z4", required=True, help="lo:hi:n")
    q.add_argument("--A", type=float, default=3.0)
    q.add_argument("--csv", required=True)
    q.add_argument("--pgm")
    q.set_defaults(func=cmd_kite_map)

    q = sub.add_parser("certify", help="rigorous index certification over a shape box")
    q.add_argument("--z3", required=True, help="a,b")
    q.add_argument("--z4", required=True, help="c,d")
    q.add_argument("--A", type=float, default=3.0)
    q.add_argument("--subdivide", type=int, default=0)
    q.add_argument("--csv", required=True)
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("lagrange", help="3-body equilateral Hessian analysis")
    q.add_argument("--masses", required=True, help="m1,m2,m3")
    q.add_argument("--A", type=float, default=3.0)
    q.add_argument("--csv")
    q.set_defaults(func=cmd_lagrange)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, KiteError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
