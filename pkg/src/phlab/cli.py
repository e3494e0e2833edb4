"""Experiment orchestration CLI.

Subcommands: classify, certify, solve, exponents, foliation, run, plotdata.
Exit codes: 0 success, 2 input error, 3 hypothesis-certification failure,
4 numerical non-convergence.  Bundles are plain directories of JSON/CSV with a
"schema" key per file; rerunning a manifest reproduces every byte except
run_meta.json (the only timestamped file).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .conjugacy import (
    ConjugacyField,
    ContractionFailure,
    SolverConfig,
    TestFunction,
    center_partial_sums,
    conjugacy_residual,
    pair_against_test_function,
    solve_stable_component,
    solve_unstable_component,
)
from .foliation import FoliationConfig, LeafError, integrability_score
from .lattice import CertificationError, LatticeAutomorphism, classify, spectral_splitting
from .lyapunov import (
    ContinuationError,
    ExponentConfig,
    dichotomy_classify,
    entropy_chain_report,
    oseledets_qr,
)
from .torus_maps import PerturbedDiffeo, TrigPoly, certify_partial_hyperbolicity, grid_points

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CERTIFICATION = 3
EXIT_NONCONVERGENCE = 4

INT_JSON_CUTOFF = 2**53


def _encode_ints(obj):
    if isinstance(obj, dict):
        return {k: _encode_ints(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode_ints(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int) and abs(obj) > INT_JSON_CUTOFF:
        return str(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def dump_json(obj, path: str | None):
    text = json.dumps(_encode_ints(obj), sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def load_json_file(path: str):
    with open(path) as fh:
        return json.load(fh)


def load_matrix(path_or_obj) -> LatticeAutomorphism:
    obj = load_json_file(path_or_obj) if isinstance(path_or_obj, str) else path_or_obj
    return LatticeAutomorphism.from_json(obj)


def load_perturbation(L: LatticeAutomorphism, path_or_obj) -> PerturbedDiffeo:
    obj = load_json_file(path_or_obj) if isinstance(path_or_obj, str) else path_or_obj
    return PerturbedDiffeo.from_json(L, obj)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    L = load_matrix(args.matrix)
    split = spectral_splitting(L)
    report = classify(L, split)
    dump_json({"classification": report.to_json_obj(), "splitting": split.to_json_obj()}, args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    L = load_matrix(args.matrix)
    f = load_perturbation(L, args.perturbation)
    split = spectral_splitting(L)
    cert = certify_partial_hyperbolicity(f, split, grid_n=args.cert_grid, aperture=args.aperture)
    dump_json(cert.to_json_obj(), args.output)
    return EXIT_OK if cert.verified else EXIT_CERTIFICATION


def _field_csv_rows(split, grid_n, d, hs, hu, hc):
    pts = grid_points(grid_n, d)
    for i in range(pts.shape[0]):
        yield (
            list(pts[i])
            + list(hs[i] if hs.shape[1] else [])
            + list(hc[i] if hc.shape[1] else [])
            + list(hu[i] if hu.shape[1] else [])
        )


def _solve_bundle(f, split, solver_cfg: SolverConfig, leaf_mode: bool, center_terms: int, outdir: str):
    stable = solve_stable_component(f, split, solver_cfg)
    unstable = solve_unstable_component(f, split, solver_cfg)
    center = center_partial_sums(f, split, center_terms, solver_cfg.grid_n) if split.dim_center else None
    field = ConjugacyField(solver_cfg.grid_n, stable, unstable, center, leaf_mode)
    residuals = conjugacy_residual(f, split, field)
    meta = field.to_meta_obj()
    meta["residuals"] = residuals
    dump_json(meta, os.path.join(outdir, "conjugacy_meta.json"))
    hc = field.center_values()
    header = (
        [f"x{i}" for i in range(f.d)]
        + [f"H_s_{i}" for i in range(stable.values.shape[1])]
        + [f"H_c_{i}" for i in range(hc.shape[1])]
        + [f"H_u_{i}" for i in range(unstable.values.shape[1])]
    )
    write_csv(
        os.path.join(outdir, "conjugacy_field.csv"),
        header,
        _field_csv_rows(split, solver_cfg.grid_n, f.d, stable.values, unstable.values, hc),
    )
    return field


def cmd_solve(args) -> int:
    L = load_matrix(args.matrix)
    f = load_perturbation(L, args.perturbation)
    split = spectral_splitting(L)
    os.makedirs(args.outdir, exist_ok=True)
    cfg = SolverConfig(
        grid_n=args.grid if args.grid is not None else 16,
        tol=args.tol if args.tol is not None else 1e-10,
    )
    _solve_bundle(f, split, cfg, args.leaf_conjugacy, args.center_terms, args.outdir)
    return EXIT_OK


def cmd_exponents(args) -> int:
    L = load_matrix(args.matrix)
    f = load_perturbation(L, args.perturbation)
    split = spectral_splitting(L)
    os.makedirs(args.outdir, exist_ok=True)
    cfg = ExponentConfig(n=args.n, seed=args.seed)
    report = oseledets_qr(f, split, config=cfg)
    dump_json(report.to_json_obj(), os.path.join(args.outdir, "exponents.json"))
    dump_json(entropy_chain_report(report, split).to_json_obj(), os.path.join(args.outdir, "entropy_chain.json"))
    write_csv(
        os.path.join(args.outdir, "exponents_series.csv"),
        ["step"] + [f"lambda_{i}" for i in range(f.d)],
        ([step] + list(est) for step, est in report.convergence_history),
    )
    return EXIT_OK


def cmd_foliation(args) -> int:
    L = load_matrix(args.matrix)
    f = load_perturbation(L, args.perturbation)
    split = spectral_splitting(L)
    os.makedirs(args.outdir, exist_ok=True)
    cfg = FoliationConfig(
        r_leaf=args.r_leaf, tol=args.foliation_tol, delta_s=args.delta_s, delta_u=args.delta_u
    )
    report = integrability_score(f, split, n_samples=args.samples, config=cfg, seed=args.seed)
    dump_json(report.to_json_obj(), os.path.join(args.outdir, "foliation.json"))
    write_csv(
        os.path.join(args.outdir, "foliation_samples.csv"),
        [f"x{i}" for i in range(f.d)] + ["delta_s", "delta_u", "center_gap_norm"],
        (row["base"] + [row["delta_s"], row["delta_u"], row["center_gap_norm"]] for row in report.samples),
    )
    return EXIT_OK


def _manifest_test_function(manifest: dict, d: int) -> TestFunction:
    spec = manifest.get("test_function")
    if spec is None:
        k1 = [0] * d
        k1[0] = 1
        k2 = [0] * d
        k2[min(1, d - 1)] = 1
        poly = TrigPoly(d, ((tuple(k1), 1.0, 0.0), (tuple(k2), 0.0, 0.5)))
        return TestFunction(poly, 0.5)
    return TestFunction(TrigPoly.from_modes_json(d, spec["modes"]), float(spec.get("theta", 0.5)))


def cmd_run(args) -> int:
    manifest = load_json_file(args.manifest)
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)

    L = load_matrix(manifest["matrix"])
    f = load_perturbation(L, manifest.get("perturbation", {"epsilon": 0.0, "shears": []}))
    seed = args.seed if args.seed is not None else int(manifest.get("seed", 0))

    split = spectral_splitting(L)
    report = classify(L, split)
    dump_json({"classification": report.to_json_obj(), "splitting": split.to_json_obj()},
              os.path.join(outdir, "classification.json"))

    cert_cfg = manifest.get("certify", {})
    cert = certify_partial_hyperbolicity(
        f, split,
        grid_n=int(cert_cfg.get("grid_n", 6)),
        lipschitz_pad=float(cert_cfg.get("lipschitz_pad", 1.0)),
        aperture=float(cert_cfg.get("aperture", 0.25)),
    )
    dump_json(cert.to_json_obj(), os.path.join(outdir, "cone_certificate.json"))
    if not cert.verified and not args.force:
        sys.stderr.write("partial hyperbolicity not certified (rerun with --force to continue)\n")
        return EXIT_CERTIFICATION

    scfg = manifest.get("solver", {})
    solver_cfg = SolverConfig(
        grid_n=args.grid if args.grid is not None else int(scfg.get("grid_n", 16)),
        tol=args.tol if args.tol is not None else float(scfg.get("tol", 1e-10)),
        k_max=int(scfg.get("k_max", 200)),
        interpolation=str(scfg.get("interpolation", "trigonometric")),
    )
    center_terms = int(scfg.get("center_terms", 12))
    field = _solve_bundle(f, split, solver_cfg, args.leaf_conjugacy, center_terms, outdir)

    if field.center is not None and field.center.terms and field.center.terms[0].shape[1]:
        eta = _manifest_test_function(manifest, f.d)
        term_pairs = pair_against_test_function(
            field.center.terms, eta, solver_cfg.grid_n, f.d, quadrature="lebesgue"
        )
        sum_pairs = np.cumsum(term_pairs, axis=0)
        dump_json(
            {
                "schema": "phlab.center_pairings/1",
                "quadrature": "lebesgue-grid",
                "theta": eta.theta,
                "holder_norm": eta.holder_norm,
                "term_pairings": [[float(v) for v in row] for row in term_pairs],
                "partial_sum_pairings": [[float(v) for v in row] for row in sum_pairs],
                "term_sup_norms": field.center.term_sup_norms,
            },
            os.path.join(outdir, "center_pairings.json"),
        )

    ecfg = manifest.get("exponents", {})
    exp_cfg = ExponentConfig(
        n=int(ecfg.get("n", 100_000)),
        warmup=int(ecfg.get("warmup", 100)),
        checkpoints=int(ecfg.get("checkpoints", 20)),
        seed=seed,
    )
    exp_report = oseledets_qr(f, split, config=exp_cfg)
    dump_json(exp_report.to_json_obj(), os.path.join(outdir, "exponents.json"))
    write_csv(
        os.path.join(outdir, "exponents_series.csv"),
        ["step"] + [f"lambda_{i}" for i in range(f.d)],
        ([step] + list(est) for step, est in exp_report.convergence_history),
    )
    dump_json(entropy_chain_report(exp_report, split).to_json_obj(), os.path.join(outdir, "entropy_chain.json"))

    fcfg = manifest.get("foliation", {})
    fol_cfg = FoliationConfig(
        r_leaf=float(fcfg.get("r_leaf", 0.2)),
        tol=float(fcfg.get("tol", 1e-8)),
        n_param=int(fcfg.get("n_param", 33)),
        max_sweeps=int(fcfg.get("max_sweeps", 80)),
        delta_s=float(fcfg.get("delta_s", 0.05)),
        delta_u=float(fcfg.get("delta_u", 0.05)),
    )
    fol_report = integrability_score(f, split, n_samples=int(fcfg.get("samples", 10)), config=fol_cfg, seed=seed)
    dump_json(fol_report.to_json_obj(), os.path.join(outdir, "foliation.json"))
    write_csv(
        os.path.join(outdir, "foliation_samples.csv"),
        [f"x{i}" for i in range(f.d)] + ["delta_s", "delta_u", "center_gap_norm"],
        (row["base"] + [row["delta_s"], row["delta_u"], row["center_gap_norm"]] for row in fol_report.samples),
    )

    dcfg = manifest.get("dichotomy", {})
    verdict = dichotomy_classify(
        exp_report, split,
        zero_threshold=float(dcfg.get("zero_threshold", 1e-3)),
        nuh_threshold=float(dcfg.get("nuh_threshold", 1e-2)),
    )
    dump_json(verdict.to_json_obj(), os.path.join(outdir, "dichotomy.json"))

    dump_json({"schema": "phlab.manifest_echo/1", "manifest": manifest, "seed": seed, "version": __version__},
              os.path.join(outdir, "manifest_echo.json"))
    # the only timestamped file; excluded from the byte-identity contract
    dump_json({"schema": "phlab.run_meta/1", "timestamp": time.time(), "version": __version__},
              os.path.join(outdir, "run_meta.json"))
    return EXIT_OK


PLOT_KINDS = ("exponents", "pairings", "defects")


def cmd_plotdata(args) -> int:
    if args.kind not in PLOT_KINDS:
        sys.stderr.write(f"unknown plotdata kind {args.kind!r}; choose from {PLOT_KINDS}\n")
        return EXIT_INPUT
    out = sys.stdout if args.output is None else open(args.output, "w")
    try:
        if args.kind == "exponents":
            obj = load_json_file(os.path.join(args.bundle, "exponents.json"))
            hist = obj["convergence_history"]
            d = len(hist[0]["estimates"]) if hist else 0
            out.write(",".join(["step"] + [f"lambda_{i}" for i in range(d)]) + "\n")
            for row in hist:
                out.write(",".join([str(row["step"])] + [_fmt(v) for v in row["estimates"]]) + "\n")
        elif args.kind == "pairings":
            obj = load_json_file(os.path.join(args.bundle, "center_pairings.json"))
            rows = obj["partial_sum_pairings"]
            dim = len(rows[0]) if rows else 0
            out.write(",".join(["j"] + [f"component_{i}" for i in range(dim)]) + "\n")
            for j, row in enumerate(rows, start=1):
                out.write(",".join([str(j)] + [_fmt(v) for v in row]) + "\n")
        else:
            obj = load_json_file(os.path.join(args.bundle, "foliation.json"))
            out.write("delta_s,delta_u,center_gap_norm\n")
            for row in obj["samples"]:
                out.write(",".join(_fmt(v) for v in (row["delta_s"], row["delta_u"], row["center_gap_norm"])) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phlab", description=__doc__)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (PCG64); overrides manifest")
    p.add_argument("--threads", type=int, default=1, help="worker bound for sample-parallel stages (default 1, bit-reproducible)")
    p.add_argument("--tol", type=float, default=None, help="solver tolerance override")
    p.add_argument("--grid", type=int, default=None, help="solver grid points per axis override")
    p.add_argument("--leaf-conjugacy", action="store_true", help="set the center conjugacy component to zero")
    p.add_argument("--force", action="store_true", help="continue after a failed hypothesis certification")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="exact classification flags and spectral splitting")
    c.add_argument("matrix")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=cmd_classify)

    c = sub.add_parser("certify", help="cone certificate of partial hyperbolicity")
    c.add_argument("matrix")
    c.add_argument("perturbation")
    c.add_argument("--cert-grid", type=int, default=6)
    c.add_argument("--aperture", type=float, default=0.25)
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=cmd_certify)

    c = sub.add_parser("solve", help="conjugacy components on the grid")
    c.add_argument("matrix")
    c.add_argument("perturbation")
    c.add_argument("-o", "--outdir", required=True)
    c.add_argument("--center-terms", type=int, default=12)
    c.set_defaults(fn=cmd_solve)

    c = sub.add_parser("exponents", help="QR cocycle exponents and entropy chain")
    c.add_argument("matrix")
    c.add_argument("perturbation")
    c.add_argument("-n", type=int, default=100_000)
    c.add_argument("-o", "--outdir", required=True)
    c.set_defaults(fn=cmd_exponents)

    c = sub.add_parser("foliation", help="su-quadrilateral defect sampling")
    c.add_argument("matrix")
    c.add_argument("perturbation")
    c.add_argument("--samples", type=int, default=10)
    c.add_argument("--r-leaf", type=float, default=0.2)
    c.add_argument("--foliation-tol", type=float, default=1e-8)
    c.add_argument("--delta-s", type=float, default=0.05)
    c.add_argument("--delta-u", type=float, default=0.05)
    c.add_argument("-o", "--outdir", required=True)
    c.set_defaults(fn=cmd_foliation)

    c = sub.add_parser("run", help="full pipeline from a manifest")
    c.add_argument("manifest")
    c.add_argument("-o", "--outdir", required=True)
    c.set_defaults(fn=cmd_run)

    c = sub.add_parser("plotdata", help="tidy CSV extracts from a bundle")
    c.add_argument("bundle")
    c.add_argument("kind")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=cmd_plotdata)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "run" and args.seed is None:
        args.seed = 0
    try:
        return args.fn(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError, CertificationError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (ContractionFailure, LeafError, ContinuationError) as exc:
        sys.stderr.write(f"numerical non-convergence: {exc}\n")
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
