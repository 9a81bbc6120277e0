"""Command-line entry point.

Subcommands: verify (identity suites), reduce (invariant catalog),
solve (reduced-PDE surface), policy (reconstructed strategy samples),
simulate (Monte Carlo objective).  All reports are JSON with stable key
ordering and the config hash; CSVs have a header row; files are written
atomically (temp + rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, config_hash, load_config
from .errors import ParameterError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: Path, payload: dict, cfg: RunConfig):
    payload = dict(payload)
    payload["config_hash"] = config_hash(cfg)
    _write_atomic(path, json.dumps(payload, indent=2, sort_keys=True,
                                   default=float) + "\n")


def _write_csv(path: Path, header: list, columns: list):
    rows = np.column_stack([np.asarray(c, float).ravel() for c in columns])
    lines = [",".join(header)]
    lines += [",".join(f"{v:.12g}" for v in row) for row in rows]
    _write_atomic(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_brackets(cfg: RunConfig, rng):
    from . import symmetry as sym

    report = {}
    ok = True
    catalogs = [sym.l4_expn(cfg.market, cfg.survival),
                sym.l4_expp(cfg.market, cfg.survival),
                sym.l3_hara1(cfg.market, cfg.survival, 0.4),
                sym.l3_hara2(cfg.market, cfg.survival, 0.4)]
    from .model import Exponential

    if isinstance(cfg.survival, Exponential):
        catalogs.append(sym.l4_hara2_exp(cfg.market, cfg.survival, 0.4))
    for cat in catalogs:
        rep = sym.structure_report(cat, rng)
        report[cat.name] = rep["max_dev"]
        ok = ok and rep["max_dev"] <= 1e-9
    return ok, report


def _verify_covariance(cfg: RunConfig, rng):
    from . import symmetry as sym
    from .hjb import residual_expn
    from .testfunctions import exp_poly

    p, m = cfg.market, cfg.survival
    V = exp_poly(0.7, 0.3, 0.4, 0.2, 0.5, 0.3)
    cat = sym.l4_expn(p, m)
    report = {}
    ok = True
    for i, X in enumerate(cat.fields):
        eps = 0.01 if i == 2 else 0.3
        t_lo = eps / p.r + 0.5 if i == 2 else 0.5
        rep = sym.residual_covariance_check(
            X, lambda j: residual_expn(p, m, j), V, eps, rng=rng,
            t_range=(t_lo, t_lo + 2.0))
        report[X.label] = {"max_dev": rep["max_dev"],
                           "constant": rep["multiplier_constancy"]}
        ok = ok and rep["multiplier_constancy"] and not rep["inconclusive"]
    return ok, report


def _verify_equivalence(cfg: RunConfig, rng):
    from . import hjb, symmetry as sym
    from .testfunctions import random_family

    p, m = cfg.market, cfg.survival
    emap = sym.map_expp_to_expn(p, m)
    hmap = sym.map_hara1_to_hara2(p, m, 0.4)
    worst = 0.0
    for V in random_family(rng, 5):
        Vt = emap.transform(V)
        V2 = hmap.transform(V)
        for _ in range(10):
            l = rng.uniform(-1, 1)
            h = rng.uniform(0.4, 2.5)
            t = rng.uniform(0.3, 2.0)
            lhs = hjb.residual_expp(p, m, V.jet(l, h, t))
            rhs = hjb.residual_expn(p, m, Vt.jet(*emap.point(l, h, t)))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
            lhs = hjb.residual_hara1(p, m, V.jet(l - hmap.s0, h, t), 0.4)
            rhs = hjb.residual_hara2(p, m, V2.jet(l, h, t), 0.4)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return worst <= 1e-9, {"max_rel_dev": worst}


def _verify_reductions(cfg: RunConfig, rng):
    from . import hjb, reduction as red
    from .testfunctions import exp_poly_2d

    p, m = cfg.market, cfg.survival
    W2 = exp_poly_2d(0.7, 0.3, 0.4, 0.2)
    omega = cfg.resolved_omega()
    worst = 0.0
    lifts = [(red.lift_H2(p, m, W2), lambda z, h: red.reduced_residual_H2(p, W2.jet(z, h)), lambda t: 1.0),
             (red.lift_H4(p, m, omega, W2), lambda z, h: red.reduced_residual_H4(p, omega, W2.jet(z, h)), lambda t: red.h4_multiplier(p, omega, t)),
             (red.lift_H7(p, m, 1, W2), lambda z, h: red.reduced_residual_H7(p, 1, W2.jet(z, h)), lambda t: 1.0)]
    for lifted, reduced, mult in lifts:
        for _ in range(20):
            zt = rng.uniform(0.0, 3.0)
            h = rng.uniform(0.4, 2.5)
            t = rng.uniform(0.3, 2.0)
            l = zt - lifted.zoff(t)
            lhs = hjb.residual_expn(p, m, lifted.jet(l, h, t))
            rhs = mult(t) * reduced(zt, h)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ann = {}
    ok = worst <= 1e-9
    for case, kw in (("H2", {}), ("H4", {"omega": omega}), ("H5", {"sign": 1}),
                     ("H7", {"sign": -1}), ("H8", {}), ("H12", {"omega": omega})):
        rep = red.annihilation_report(p, m, case, rng, **kw)
        ann[case] = rep["max_dev"]
        ok = ok and rep["ok"]
    return ok, {"max_lift_dev": worst, "annihilation": ann}


VERIFY_SECTIONS = {
    "brackets": _verify_brackets,
    "covariance": _verify_covariance,
    "equivalence": _verify_equivalence,
    "reductions": _verify_reductions,
}


def cmd_verify(cfg: RunConfig, out_dir: Path, only: str | None) -> int:
    rng = np.random.default_rng(cfg.seed)
    sections = ([only] if only else list(VERIFY_SECTIONS))
    if only and only not in VERIFY_SECTIONS:
        print(f"error: unknown verify section {only!r}; "
              f"choose from {sorted(VERIFY_SECTIONS)}", file=sys.stderr)
        return EXIT_CONFIG
    report, all_ok = {}, True
    for name in sections:
        ok, rep = VERIFY_SECTIONS[name](cfg, rng)
        report[name] = {"ok": ok, "detail": rep}
        all_ok = all_ok and ok
    report["ok"] = all_ok
    _write_json(out_dir / "verify.json", report, cfg)
    print(json.dumps(report, indent=2, sort_keys=True, default=float))
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_reduce(cfg: RunConfig, out_dir: Path, case: str | None) -> int:
    from . import reduction as red

    p, m = cfg.market, cfg.survival
    omega = cfg.resolved_omega()
    cl = red.classify_all(p, m, omega=omega)
    if case is not None:
        cases = [c for c in cl["cases"]
                 if c["case"].upper().startswith(case.upper())]
        if not cases:
            print(f"error: unknown reduction case {case!r}", file=sys.stderr)
            return EXIT_CONFIG
        cl = dict(cl, cases=cases, admissible=[c["case"] for c in cases
                                               if c["admissible"]])
    _write_json(out_dir / "reduction.json", cl, cfg)
    # sample grid of the H4 invariants
    ls = np.linspace(-1.0, 2.0, 7)
    ts = np.linspace(0.0, 2.0, 5)
    L, T = np.meshgrid(ls, ts, indexing="ij")
    Z = L + red.z_offset(p, m, T) - T / (p.a * omega)
    _write_csv(out_dir / "invariants.csv", ["l", "t", "z"],
               [L.ravel(), T.ravel(), Z.ravel()])
    print(json.dumps(cl, indent=2, sort_keys=True, default=float))
    return EXIT_OK


def _solve(cfg: RunConfig):
    from . import solver as S

    sopt = cfg.raw["solver"]
    return S.solve_reduced_H4(cfg.market, cfg.survival, cfg.resolved_omega(),
                              cfg.grid(), tol_rel=sopt["tol_rel"],
                              tol_abs=sopt["tol_abs"],
                              max_iter=sopt["max_iter"])


def cmd_solve(cfg: RunConfig, out_dir: Path) -> int:
    from . import solver as S

    surf = _solve(cfg)
    ps = S.policy_surface(cfg.market, cfg.survival, surf)
    g = surf.grid
    Z, H = np.meshgrid(g.z, g.h, indexing="ij")
    W_z, _, W_zz, _, _ = surf.jets()
    _write_csv(out_dir / "surface.csv",
               ["z", "h", "W", "W_z", "W_zz", "pi", "c0"],
               [Z, H, surf.W, W_z, W_zz, ps.pi, ps.c0])
    _write_json(out_dir / "solve.json",
                {"iterations": surf.iterations,
                 "residual_history": surf.residual_history,
                 "tolerance": surf.tolerance,
                 "certificate": S.residual_certificate(cfg.market, surf),
                 "admissible": surf.interior_admissible(),
                 "omega": surf.omega,
                 "metadata": surf.metadata}, cfg)
    return EXIT_OK


def cmd_policy(cfg: RunConfig, out_dir: Path) -> int:
    from . import solver as S

    surf = _solve(cfg)
    mc = cfg.raw["mc"]
    g = surf.grid
    # query points chosen inside the solved domain for all sampled t
    ts = np.linspace(0.0, min(2.0, mc["t_max"]), 5)
    from .reduction import z_offset

    p, m = cfg.market, cfg.survival
    omega = surf.omega
    zs = np.linspace(g.z_min + 0.5, g.z_max - 0.5, 8)
    hs = np.linspace(g.h_min + 0.1, g.h_max - 0.1, 6)
    rows_l, rows_h, rows_t, rows_pi, rows_c = [], [], [], [], []
    for t in ts:
        zoff = z_offset(p, m, t) - t / (p.a * omega)
        for z in zs:
            for h in hs:
                l = z - zoff
                _, pi, c = S.reconstruct(p, m, omega, surf, l, h, t)
                rows_l.append(l)
                rows_h.append(h)
                rows_t.append(t)
                rows_pi.append(float(pi))
                rows_c.append(float(c))
    _write_csv(out_dir / "policy.csv", ["l", "h", "t", "pi", "c"],
               [rows_l, rows_h, rows_t, rows_pi, rows_c])
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, out_dir: Path) -> int:
    from . import montecarlo as MC

    p, m = cfg.market, cfg.survival
    mc = cfg.raw["mc"]
    surf = _solve(cfg)
    policies = {
        "solver": MC.TablePolicy.from_surface(p, m, surf),
        "zero-invest": MC.ConstantPolicy(pi=0.0, c=mc["baseline_c"],
                                         label="zero-invest"),
        "merton-fraction": MC.MertonConsumptionPolicy.with_merton_pi(
            p, q=mc["baseline_q"]),
    }
    rep = MC.compare_policies(p, m, policies, n_paths=mc["n_paths"],
                              dt=mc["dt"], t_max=mc["t_max"], seed=cfg.seed,
                              l0=mc["l0"], h0=mc["h0"])
    _write_json(out_dir / "simulate.json", rep, cfg)
    print(json.dumps(rep, indent=2, sort_keys=True, default=float))
    return EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="hjb-illiquid",
        description="Portfolio optimization with an illiquid asset: "
                    "symmetry verification, invariant reduction, reduced-PDE "
                    "solver and Monte Carlo validation.")
    ap.add_argument("command", choices=["verify", "reduce", "solve",
                                        "policy", "simulate"])
    ap.add_argument("--config", default=None, help="JSON config file")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--case", default=None, help="reduction case filter")
    ap.add_argument("--omega", type=float, default=None)
    ap.add_argument("--only", default=None, help="verify section filter")
    args = ap.parse_args(argv)

    overrides: dict = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.omega is not None:
        overrides.setdefault("reduction", {})["omega"] = args.omega
    if args.case is not None:
        overrides.setdefault("reduction", {})["case"] = args.case
    if args.out is not None:
        overrides["out_dir"] = args.out
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = cfg.out_dir
    try:
        if args.command == "verify":
            return cmd_verify(cfg, out_dir, args.only)
        if args.command == "reduce":
            return cmd_reduce(cfg, out_dir, args.case)
        if args.command == "solve":
            return cmd_solve(cfg, out_dir)
        if args.command == "policy":
            return cmd_policy(cfg, out_dir)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir)
    except ParameterError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG  # unreachable


if __name__ == "__main__":
    sys.exit(main())
