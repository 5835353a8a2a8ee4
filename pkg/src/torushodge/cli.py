"""Command-line interface.

Subcommands: orbits, decompose, hodge, frame-check, modes.  Exit codes:
0 ok, 1 compute/validation error, 2 usage error.  JSON output is emitted
with sorted keys so identical inputs give byte-identical results.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np
import sympy as sp

from . import frame_algebra as fa
from .hodge_catalog import (
    cyclic3_h01_report,
    kt4_h11_bc,
    kt4_h11_d,
    kt4_h11_dbar,
    kt4_h12_bc,
    kt4_h21_bc,
)
from .jordan_structure import jordan_decompose
from .lattice_orbits import orbit_of, orbit_partition
from .manifolds import cyclic3_pde_01, kt4_pde_21, kt4_pde_21_system, load_config
from .mode_systems import (
    decoupled_kernel_scan,
    reduce_to_ode,
    reduce_to_recurrence,
    schwartz_ode_candidates,
    schwartz_recurrence_candidates,
)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2


def _emit_json(payload):
    print(json.dumps(payload, sort_keys=True, indent=2))


def _load(args):
    try:
        return load_config(args.config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: cannot load config {args.config!r}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_COMPUTE)


def _manifold_pde(cfg, args):
    """Harmonicity systems by manifold name: (infinite-orbit, finite-orbit).

    The infinite-orbit system must be square for the explicit ODE form;
    finite-orbit kernel scans need every equation, including rows that are
    redundant at generic modes but not at degenerate ones.
    """
    if cfg.name == "kt4":
        b = args.b if args.b is not None else 8 * np.pi * args.d
        return kt4_pde_21(args.rho, args.a, b), kt4_pde_21_system(args.rho, args.a, b)
    if cfg.name == "cyclic3":
        pde = cyclic3_pde_01()
        return pde, pde
    print(f"error: no PDE system registered for manifold {cfg.name!r}", file=sys.stderr)
    raise SystemExit(EXIT_COMPUTE)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_orbits(args):
    cfg = _load(args)
    orbits = orbit_partition(cfg.bundle, args.box, max_steps=args.max_steps)
    rows = [
        {
            "representative": list(o.representative),
            "finite": o.is_finite,
            "size": (o.size if o.is_finite else "inf"),
        }
        for o in orbits
    ]
    rows.sort(key=lambda r: r["representative"])
    if args.json:
        _emit_json({"manifold": cfg.name, "box": args.box, "count": len(rows), "orbits": rows})
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["representative", "finite", "size"])
        for r in rows:
            w.writerow([" ".join(map(str, r["representative"])), r["finite"], r["size"]])
    return EXIT_OK


def _matrix_strings(M):
    return [[str(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def cmd_decompose(args):
    cfg = _load(args)
    y = tuple(int(v) for v in args.mode.split(","))
    if len(y) != cfg.n:
        print(f"error: mode must have {cfg.n} components", file=sys.stderr)
        return EXIT_COMPUTE
    jordan = jordan_decompose(cfg.bundle.A)
    pde_ode, pde_rec = _manifold_pde(cfg, args)
    orbit = orbit_of(cfg.bundle, y)
    out = {"manifold": cfg.name, "mode": list(y)}
    if orbit.is_finite:
        out["pde"] = pde_rec.label
        rec = reduce_to_recurrence(pde_rec, jordan, orbit)
        out["kind"] = "recurrence"
        out["orbit_length"] = rec.N
        out["shift_matrices"] = {str(dlt): _matrix_strings(M) for dlt, M in rec.shift_matrices.items()}
        if rec.transfer is not None:
            out["transfer"] = _matrix_strings(rec.transfer)
    else:
        out["pde"] = pde_ode.label
        ode = reduce_to_ode(pde_ode, jordan, y)
        out["kind"] = "ode"
        out["matrix"] = _matrix_strings(ode.matrix)
    _emit_json(out)
    return EXIT_OK


def cmd_hodge(args):
    cfg = _load(args)
    b = args.b if args.b is not None else 8 * np.pi * args.d
    target = args.target
    try:
        if target == "h21bc":
            res = kt4_h21_bc(b, args.rho, n_max=args.n_max)
        elif target == "h12bc":
            res = kt4_h12_bc(b, args.rho, n_max=args.n_max)
        elif target == "h11bc":
            res = kt4_h11_bc()
        elif target == "h11dbar":
            res = kt4_h11_dbar(args.w)
        elif target == "h11d":
            res = kt4_h11_d(args.w)
        elif target == "h01":
            res = cyclic3_h01_report(box=args.box, K=args.K)
        else:  # pragma: no cover - argparse choices guard this
            return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if args.json:
        _emit_json(res.as_dict())
    else:
        extra = "" if res.heuristic_extra is None else f" (+{res.heuristic_extra} heuristic)"
        print(f"{res.label} = {res.value}{extra}")
        for lbl, dim in res.contributions:
            print(f"  {lbl}: {dim}")
    return EXIT_OK


def _frame_checks(cfg):
    """Yield (check name, pass flag, detail) in a fixed order."""
    frame = cfg.frame
    yield "d_squared", frame.check_d_squared(), "d^2 = 0 on generators"
    metric = cfg.metric()
    ok = True
    detail = "metric is a positive (1,1)-form"
    try:
        metric.validate()
    except ValueError as exc:
        ok, detail = False, str(exc)
    yield "metric_positive", ok, detail
    omega = metric.omega
    gauduchon = fa.check_gauduchon(metric, frame)
    yield "gauduchon", gauduchon, "del delbar omega = 0"
    vol = metric.volume_form()
    r1 = (fa.hodge_star(fa.Form.scalar(frame.m, 1.0), metric) - vol).norm()
    yield "star_one_is_volume", r1 < 1e-10, f"residual {r1:.2e}"
    r2 = (fa.hodge_star(omega, metric) - omega).norm()
    yield "star_omega_fixed", r2 < 1e-10, f"residual {r2:.2e}"
    worst = 0.0
    for key in _all_basis_words(frame.m):
        g = fa.Form.monomial(frame.m, key, 1.0)
        deg = len(key)
        sign = (-1) ** (deg * (2 * frame.m - deg))
        resid = (fa.hodge_star(fa.hodge_star(g, metric), metric) - sign * g).norm()
        worst = max(worst, resid)
    yield "star_involution", worst < 1e-10, f"max residual {worst:.2e}"


def _all_basis_words(m):
    from itertools import combinations

    gens = list(range(1, m + 1)) + list(range(-1, -m - 1, -1))
    # canonical increasing internal codes: 0..m-1 holo, m..2m-1 conj
    codes = list(range(2 * m))
    for deg in range(2 * m + 1):
        for combo in combinations(codes, deg):
            word = tuple(c + 1 if c < m else -(c - m + 1) for c in combo)
            yield word


def cmd_frame_check(args):
    cfg = _load(args)
    if cfg.frame is None:
        print("error: config has no structure constants", file=sys.stderr)
        return EXIT_COMPUTE
    failed = None
    for name, ok, detail in _frame_checks(cfg):
        status = "PASS" if ok else "FAIL"
        print(f"{name}: {status} ({detail})")
        if not ok and failed is None:
            failed = name
    if failed is not None:
        print(f"first failing check: {failed}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


def cmd_modes(args):
    cfg = _load(args)
    jordan = jordan_decompose(cfg.bundle.A)
    pde_ode, pde_rec = _manifold_pde(cfg, args)
    rows = []
    for orbit in sorted(
        orbit_partition(cfg.bundle, args.box), key=lambda o: o.representative
    ):
        label = " ".join(map(str, orbit.representative))
        if orbit.is_finite:
            rec = reduce_to_recurrence(pde_rec, jordan, orbit)
            if rec.is_decoupled:
                hits = decoupled_kernel_scan(rec, range(-args.k_scan, args.k_scan + 1))
                dim = sum(len(basis) for _, basis in hits)
                rows.append([label, "finite/decoupled", dim, ""])
            elif rec.transfer is not None:
                rep = schwartz_recurrence_candidates(rec, K=args.K, decay_threshold=args.threshold)
                exps = ";".join(f"{s:.3f}" for s, _ in rep.forward_exponents + rep.backward_exponents)
                rows.append([label, "finite/transfer (heuristic)", rep.dimension, exps])
            else:
                rows.append([label, "finite/unreduced", "", ""])
        else:
            ode = reduce_to_ode(pde_ode, jordan, orbit.representative)
            rep = schwartz_ode_candidates(ode, T=args.T, steps=args.steps)
            exps = ";".join(f"{x:.3f}" for x in rep.forward_exponents + rep.backward_exponents)
            rows.append([label, "infinite/ode (heuristic)", rep.dimension, exps])
    meta = {
        "manifold": cfg.name,
        "box": args.box,
        "K": args.K,
        "T": args.T,
        "steps": args.steps,
        "decay_threshold": args.threshold,
        "k_scan": args.k_scan,
    }
    if args.json:
        _emit_json(
            {
                "meta": meta,
                "modes": [
                    {"mode": r[0], "classification": r[1], "dimension": r[2], "exponents": r[3]}
                    for r in rows
                ],
            }
        )
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["mode", "classification", "dimension", "exponents"])
        w.writerows(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_pde_params(p):
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=None, help="KT4 parameter b (default 8*pi*d)")
    p.add_argument("--d", type=float, default=1.0, help="d = b/(8 pi); used when --b is absent")


def build_parser():
    parser = argparse.ArgumentParser(prog="torushodge")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbits", help="partition a lattice box into mode orbits")
    p.add_argument("config")
    p.add_argument("--box", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=10000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("decompose", help="reduce the harmonicity PDE at one mode")
    p.add_argument("config")
    p.add_argument("--mode", required=True, help="comma separated integers, e.g. 0,0,1")
    _add_pde_params(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hodge", help="compute a catalog dimension")
    p.add_argument("config")
    p.add_argument(
        "--target",
        required=True,
        choices=["h21bc", "h12bc", "h11bc", "h11dbar", "h11d", "h01"],
    )
    _add_pde_params(p)
    p.add_argument("--w", type=complex, default=0)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--box", type=int, default=2)
    p.add_argument("--K", type=int, default=200)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hodge)

    p = sub.add_parser("frame-check", help="validate frame, metric and star properties")
    p.add_argument("config")
    p.set_defaults(func=cmd_frame_check)

    p = sub.add_parser("modes", help="scan modes: classification and Schwartz candidates")
    p.add_argument("config")
    p.add_argument("--box", type=int, default=1)
    _add_pde_params(p)
    p.add_argument("--K", type=int, default=200)
    p.add_argument("--T", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--threshold", type=float, default=-3.0)
    p.add_argument("--k-scan", type=int, default=12)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_modes)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except Exception as exc:  # surface compute failures as exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
