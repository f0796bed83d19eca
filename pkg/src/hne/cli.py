"""Command-line interface: dataset generation, embedding runs, benchmarks.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Every command
writes a JSON sidecar next to its main output carrying the full
parameter set, so results are self-describing.
"""

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .alignment import build_alignment, check_null_vector
from .core import (
    DegenerateSpectrumWarning,
    DataMatrix,
    EmbedConfig,
    HneError,
    Variant,
    WeightSet,
)
from .datasets import cluster_3d, load_matrix, swiss_roll, two_surfaces
from .hne_weights import hierarchic_residuals, solve_bhne, solve_ihne, solve_rhne
from .lle_weights import solve_inner
from .metrics import avg_reconstruction_error, embedding_quality
from .neighbors import build_hierarchic
from .pipeline import embed_data
from .spectral import embed

DATASETS = ("swiss-roll", "swiss-hole", "3d-cluster", "2-surfaces")
METHODS = ("lle", "ihne", "rhne", "bhne")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hne",
        description="Locally linear and hierarchic-neighbors embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic dataset to CSV")
    gen.add_argument("--dataset", required=True, choices=DATASETS)
    gen.add_argument("--n", type=_positive_int, default=300, help="total point count")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--bridge-points", type=_positive_int, default=9,
        help="bridge points per connecting segment (clustered/two-surface sets)",
    )
    gen.add_argument("--out", required=True, type=Path)
    gen.set_defaults(func=cmd_generate)

    emb = sub.add_parser("embed", help="embed a dataset and write coordinates")
    emb.add_argument("--input", required=True, type=Path, help="CSV file or image directory")
    emb.add_argument("--method", required=True, choices=METHODS)
    emb.add_argument("--k", type=_positive_int, required=True)
    emb.add_argument("--d", type=_positive_int, required=True)
    emb.add_argument("--gamma", type=float, default=1.0)
    emb.add_argument("--sigma-reg", type=float, default=1e-3)
    emb.add_argument("--rotations", type=_positive_int, default=2)
    emb.add_argument("--seed", type=int, default=0)
    emb.add_argument(
        "--emit-edges", action="store_true",
        help="also write the inner neighbor edge list as CSV",
    )
    emb.add_argument("--out", required=True, type=Path)
    emb.set_defaults(func=cmd_embed)

    ev = sub.add_parser("evaluate", help="reconstruction-error table over methods and k")
    ev.add_argument("--input", required=True, type=Path, help="CSV file or image directory")
    ev.add_argument("--methods", default="lle,ihne,rhne,bhne",
                    help="comma-separated subset of: " + ",".join(METHODS))
    ev.add_argument("--k-list", default="4,6,8,10,12", help="comma-separated k values")
    ev.add_argument("--gamma", type=float, default=1.0)
    ev.add_argument("--sigma-reg", type=float, default=1e-3)
    ev.add_argument("--rotations", type=_positive_int, default=2)
    ev.add_argument("--d", type=_positive_int, default=2,
                    help="embedding dimension for quality scores")
    ev.add_argument("--k-eval", type=_positive_int, default=10,
                    help="neighborhood size for quality scores")
    ev.add_argument("--intrinsic", type=Path, default=None,
                    help="ground-truth coordinates (CSV, or a generate sidecar JSON); "
                         "adds embedding-quality columns")
    ev.add_argument("--no-pixel-scale", action="store_true",
                    help="keep raw 0-255 intensities when input is an image directory")
    ev.add_argument("--out", required=True, type=Path)
    ev.set_defaults(func=cmd_evaluate)

    return parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def cmd_generate(args) -> int:
    params = {"dataset": args.dataset, "n": args.n, "seed": args.seed, "version": __version__}
    if args.dataset in ("swiss-roll", "swiss-hole"):
        data, intrinsic = swiss_roll(args.n, args.seed, hole=args.dataset == "swiss-hole")
        extra = {"intrinsic": intrinsic.tolist()}
    elif args.dataset == "3d-cluster":
        n_per = (args.n - 4 * args.bridge_points) // 5
        if n_per < 2:
            raise HneError(
                f"--n {args.n} leaves fewer than 2 points per cluster after "
                f"{4 * args.bridge_points} bridge points"
            )
        data, labels = cluster_3d(n_per, args.bridge_points, args.seed)
        params["bridge_points"] = args.bridge_points
        extra = {
            "labels": labels.tolist(),
            "n_per_cluster": n_per,
            "n_blob": 5 * n_per,
            "n_bridge": 4 * args.bridge_points,
            "n_total": data.n,
        }
    else:
        data, labels = two_surfaces(args.n, args.bridge_points, args.seed)
        params["bridge_points"] = args.bridge_points
        extra = {"labels": labels.tolist(), "n_bridge": args.bridge_points, "n_total": data.n}

    np.savetxt(args.out, data.points, delimiter=",", fmt="%.17g")
    _write_json(_sidecar(args.out), {**params, **extra})
    print(f"wrote {data.n}x{data.D} points to {args.out}")
    return 0


def cmd_embed(args) -> int:
    data = load_matrix(args.input)
    cfg = EmbedConfig(
        k=args.k,
        d=args.d,
        variant=Variant(args.method),
        gamma=args.gamma,
        sigma_reg=args.sigma_reg,
        bhne_rotations=args.rotations,
        seed=args.seed,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result, inter = embed_data(data, cfg, return_intermediates=True)
    messages = [
        str(w.message) for w in caught if issubclass(w.category, DegenerateSpectrumWarning)
    ]
    for msg in messages:
        print(f"warning: {msg}", file=sys.stderr)

    np.savetxt(args.out, result.Y.T, delimiter=",", fmt="%.17g")
    diag = result.diagnostics
    _write_json(
        _sidecar(args.out),
        {
            "method": args.method,
            "k": args.k,
            "d": args.d,
            "gamma": inter["matrix"].gamma,
            "sigma_reg": args.sigma_reg,
            "rotations": args.rotations,
            "seed": args.seed,
            "version": __version__,
            "input": str(args.input),
            "eigenvalues": result.eigenvalues.tolist(),
            "max_eigen_residual": float(diag.eigen_residuals.max()),
            "max_constant_overlap": float(diag.constant_overlap.max()),
            "null_vector_gap": diag.null_vector_gap,
            "degenerate_spectrum": diag.degenerate,
            "mean_inner_residual": float(diag.inner_residuals.mean()),
            "mean_hier_residual": float(diag.hier_residuals.mean()),
            "warnings": messages,
        },
    )
    if args.emit_edges:
        idx = inter["idx"]
        edges = np.column_stack(
            [np.repeat(np.arange(data.n), idx.k), idx.inner.reshape(-1)]
        )
        np.savetxt(args.out.with_suffix(".edges.csv"), edges, delimiter=",", fmt="%d")
    print(f"wrote {result.n}x{result.d} embedding to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        print(
            f"error: unknown methods {bad}; valid names: {', '.join(METHODS)}",
            file=sys.stderr,
        )
        return 2
    try:
        k_list = [int(t) for t in args.k_list.split(",") if t.strip()]
    except ValueError:
        print(f"error: --k-list must be comma-separated integers, got {args.k_list!r}",
              file=sys.stderr)
        return 2
    if not k_list or any(k < 1 for k in k_list):
        print(f"error: --k-list values must be >= 1, got {args.k_list!r}", file=sys.stderr)
        return 2

    data = load_matrix(args.input)
    scaled = args.input.is_dir() and not args.no_pixel_scale
    if scaled:
        data = DataMatrix(data.points / 255.0)
    intrinsic = _load_intrinsic(args.intrinsic) if args.intrinsic else None

    cells = []
    for k in k_list:
        idx = build_hierarchic(data, k)
        inner = solve_inner(data, idx, args.sigma_reg)
        for method in methods:
            weights = _weights_for(method, data, idx, inner, args)
            cell = {
                "method": method,
                "k": k,
                "avg_reconstruction_error": avg_reconstruction_error(data, idx, weights),
            }
            if intrinsic is not None:
                matrix = build_alignment(idx, weights, args.gamma)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", DegenerateSpectrumWarning)
                    result = embed(matrix, args.d)
                cell.update(embedding_quality(result, intrinsic, args.k_eval))
            cells.append(cell)

    report = {
        "input": str(args.input),
        "pixel_scaled": scaled,
        "methods": methods,
        "k_list": k_list,
        "gamma": args.gamma,
        "sigma_reg": args.sigma_reg,
        "rotations": args.rotations,
        "version": __version__,
        "cells": cells,
    }
    _write_json(args.out, report)
    print(_format_table(methods, k_list, cells))
    return 0


def _weights_for(method, data, idx, inner, args) -> WeightSet:
    if method == "lle":
        return WeightSet(inner=inner, outer=None, variant=Variant.LLE)
    if method == "ihne":
        return solve_ihne(data, idx, inner, args.sigma_reg)
    if method == "rhne":
        return solve_rhne(data, idx, inner, args.sigma_reg)
    return solve_bhne(data, idx, inner, args.sigma_reg, rotations=args.rotations)


def _load_intrinsic(path: Path) -> np.ndarray:
    if path.suffix == ".json":
        meta = json.loads(path.read_text())
        if "intrinsic" not in meta:
            raise HneError(f"{path} has no intrinsic coordinates")
        return np.asarray(meta["intrinsic"], dtype=np.float64)
    return np.loadtxt(path, delimiter=",", ndmin=2)


def _format_table(methods, k_list, cells) -> str:
    value = {(c["method"], c["k"]): c["avg_reconstruction_error"] for c in cells}
    width = max(8, *(len(m) for m in methods))
    header = "method".ljust(width) + "".join(f"  k={k:<8d}" for k in k_list)
    lines = [header]
    for m in methods:
        row = m.ljust(width)
        for k in k_list:
            row += f"  {value[m, k]:<10.4f}"
        lines.append(row.rstrip())
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
