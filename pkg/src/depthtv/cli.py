"""Command-line front end: synthesise frames, build priors, reconstruct,
evaluate, and compare methods.

Subcommands: synth, prior, upsample, eval, compare. Every config key is
mirrored as a ``--section.key`` flag overriding the config file. Each run
writes a deterministic ``manifest.json`` (config snapshot, inputs, seeds,
metrics, convergence summary) plus a ``timings.json`` sidecar with wall
clock; on error all files written by the command are removed and the exit
code is nonzero.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import io as dio
from .grid import DepthGrid
from .metrics import EvalMask, mae, rmse
from .prior import CannyParams, InformingPrior, build_prior, coarse_upsample, detect_edges
from .simulate import (
    AcquisitionSpec,
    Box,
    SceneSpec,
    Stripe,
    generate_scene,
    random_scene_spec,
    sample_lidar,
)
from .solver import SolverConfig, solve
from .weights import build_weights, identity_weights


def _parse_rects(raw, ctor, n_fields):
    rects = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != n_fields:
            raise ValueError(f"rectangle spec {chunk!r} needs {n_fields} fields")
        ints = [int(v) for v in parts[:4]]
        floats = [float(v) for v in parts[4:]]
        rects.append(ctor(*ints, *floats))
    return tuple(rects)


def scene_spec_from_config(cfg, seed=None):
    seed = cfg["scene.seed"] if seed is None else seed
    rows, cols = cfg["scene.rows"], cfg["scene.cols"]
    boxes = _parse_rects(cfg["scene.boxes"], Box, 6)
    stripes = _parse_rects(cfg["scene.stripes"], Stripe, 5)
    if not boxes and not stripes:
        spec = random_scene_spec(rows, cols, seed, cfg["scene.n_boxes"], cfg["scene.n_stripes"])
        return SceneSpec(
            rows=rows,
            cols=cols,
            ground_plane=(cfg["scene.ground_bottom_depth"], cfg["scene.ground_row_gradient"]),
            background_depth=cfg["scene.background_depth"],
            boxes=spec.boxes,
            texture_stripes=spec.texture_stripes,
            seed=seed,
        )
    return SceneSpec(
        rows=rows,
        cols=cols,
        ground_plane=(cfg["scene.ground_bottom_depth"], cfg["scene.ground_row_gradient"]),
        background_depth=cfg["scene.background_depth"],
        boxes=boxes,
        texture_stripes=stripes,
        seed=seed,
    )


def acquisition_from_config(cfg, rows, seed=None):
    stop = cfg["acquisition.fov_row_stop"]
    fov = None if stop <= 0 else (cfg["acquisition.fov_row_start"], min(stop, rows))
    return AcquisitionSpec(
        sampling_rate=cfg["acquisition.sampling_rate"],
        sigma0=cfg["acquisition.sigma0"],
        sigma1=cfg["acquisition.sigma1"],
        max_range=cfg["acquisition.max_range"],
        fov_rows=fov,
        seed=cfg["acquisition.seed"] if seed is None else seed,
    )


def canny_from_config(cfg):
    return CannyParams(
        gaussian_sigma=cfg["canny.gaussian_sigma"],
        low_threshold=cfg["canny.low_threshold"],
        high_threshold=cfg["canny.high_threshold"],
    )


def solver_from_config(cfg, baseline=False):
    return SolverConfig(
        beta=cfg["solver.beta"],
        gamma=0.0 if baseline else cfg["solver.gamma"],
        rho=cfg["solver.rho"],
        max_iters=cfg["solver.max_iters"],
        tol_primal=cfg["solver.tol_primal"],
        tol_dual=cfg["solver.tol_dual"],
    )


class _RunDir:
    """Tracks files written by one command so failures clean up after
    themselves."""

    def __init__(self, out):
        self.out = Path(out)
        self.written = []

    def path(self, name):
        self.out.mkdir(parents=True, exist_ok=True)
        p = self.out / name
        self.written.append(p)
        return p

    def cleanup(self):
        for p in self.written:
            if p.exists():
                p.unlink()


def _say(args, message):
    if not args.quiet:
        print(message)


def _load_config(args):
    cfg = dict(dio.DEFAULT_CONFIG)
    if args.config:
        cfg = dio.read_config(args.config)
    for key in dio.DEFAULT_CONFIG:
        flag = getattr(args, key.replace(".", "_"), None)
        if flag is not None:
            cfg[key] = flag
    return cfg


def _reconstruct(frame, cfg, baseline):
    """Shared upsampling path; returns (depth, report, prior_support)."""
    if baseline:
        pr = InformingPrior.zero(*frame.intensity.shape)
        w = identity_weights(*frame.intensity.shape)
    else:
        pr = build_prior(
            frame.sparse,
            frame.intensity,
            canny_from_config(cfg),
            cfg["prior.window"],
            cfg["prior.jump_threshold"],
        )
        w = build_weights(pr)
    depth, report = solve(frame.sparse, pr, w, solver_from_config(cfg, baseline))
    return depth, report, int((np.abs(pr.uhat) > 0).sum())


def cmd_synth(args):
    cfg = _load_config(args)
    seed = args.seed if args.seed is not None else cfg["scene.seed"]
    spec = scene_spec_from_config(cfg, seed)
    truth, intensity = generate_scene(spec)
    acq = acquisition_from_config(cfg, spec.rows, seed if args.seed is not None else None)
    sparse = sample_lidar(truth, acq)

    run = _RunDir(args.out)
    try:
        dio.write_depth(run.path("truth.pfm"), truth)
        dio.write_intensity(run.path("intensity.pfm"), intensity)
        dio.write_sparse(run.path("sparse.txt"), sparse)
        dio.export_colorized(truth, run.path("truth_color.png"))
        manifest = {
            "command": "synth",
            "config": cfg,
            "seed": seed,
            "frame_id": Path(args.out).name,
            "samples": sparse.count,
            "rows": spec.rows,
            "cols": spec.cols,
        }
        dio.write_json(run.path("manifest.json"), manifest)
    except BaseException:
        run.cleanup()
        raise
    _say(args, f"wrote frame to {args.out} ({sparse.count} samples)")
    return 0


def cmd_prior(args):
    cfg = _load_config(args)
    frame = dio.load_frame(args.frame)
    edges = detect_edges(frame.intensity, canny_from_config(cfg))
    pr = build_prior(
        frame.sparse,
        frame.intensity,
        canny_from_config(cfg),
        cfg["prior.window"],
        cfg["prior.jump_threshold"],
    )
    run = _RunDir(args.out)
    try:
        dio.write_pfm(run.path("prior_row.pfm"), pr.jump_row)
        dio.write_pfm(run.path("prior_col.pfm"), pr.jump_col)
        from PIL import Image

        Image.fromarray((edges.edge * np.uint8(255))).save(run.path("edges.png"))
        manifest = {
            "command": "prior",
            "config": cfg,
            "frame": str(args.frame),
            "edge_pixels": int(edges.edge.sum()),
            "support": int((np.abs(pr.uhat) > 0).sum()),
        }
        dio.write_json(run.path("manifest.json"), manifest)
    except BaseException:
        run.cleanup()
        raise
    _say(args, f"prior support {int((np.abs(pr.uhat) > 0).sum())} of {2 * pr.rows * pr.cols}")
    return 0


def cmd_upsample(args):
    cfg = _load_config(args)
    frame = dio.load_frame(args.frame)
    t0 = time.perf_counter()
    depth, report, support = _reconstruct(frame, cfg, args.baseline)
    wall = time.perf_counter() - t0

    run = _RunDir(args.out)
    try:
        dio.write_depth(run.path("depth.pfm"), depth)
        dio.export_colorized(depth, run.path("depth_color.png"))
        manifest = {
            "command": "upsample",
            "baseline": bool(args.baseline),
            "config": cfg,
            "frame": str(args.frame),
            "frame_id": frame.frame_id,
            "prior_support": support,
            "convergence": report.to_dict(),
        }
        if frame.truth is not None:
            em = frame.eval_mask or EvalMask.full(*frame.truth.shape)
            manifest["metrics"] = {
                "mae": mae(depth, frame.truth, em),
                "rmse": rmse(depth, frame.truth, em),
                "n_pixels": int(em.mask.sum()),
            }
        dio.write_json(run.path("manifest.json"), manifest)
        dio.write_json(run.path("timings.json"), {"wall_clock_s": wall})
    except BaseException:
        run.cleanup()
        raise
    mode = "baseline" if args.baseline else "full"
    _say(
        args,
        f"{mode} reconstruction: {report.iterations} iterations, "
        f"converged={report.converged}, {wall:.1f}s",
    )
    if frame.truth is not None:
        m = manifest["metrics"]
        _say(args, f"mae={m['mae']:.4f} rmse={m['rmse']:.4f} over {m['n_pixels']} px")
    return 0


def _eval_pair(recon_path, truth_path):
    recon = dio.read_depth(recon_path)
    truth, em = dio.read_depth_with_mask(truth_path)
    return {
        "frame_id": Path(recon_path).stem,
        "mae": mae(recon, truth, em),
        "rmse": rmse(recon, truth, em),
        "n_pixels": int(em.mask.sum()),
    }


def cmd_eval(args):
    recon = Path(args.recon)
    truth = Path(args.truth)
    records = []
    if recon.is_dir():
        pairs = []
        for rp in sorted(recon.glob("*.pfm")) + sorted(recon.glob("*.png")):
            tp = truth / rp.name if truth.is_dir() else truth
            if tp.exists():
                pairs.append((rp, tp))
        if not pairs:
            raise ValueError(f"no reconstruction/truth pairs found under {recon}")
        records = [_eval_pair(rp, tp) for rp, tp in pairs]
    else:
        records = [_eval_pair(recon, truth)]

    payload = {"command": "eval", "frames": records}
    if len(records) > 1:
        payload["mean"] = {
            "mae": float(np.mean([r["mae"] for r in records])),
            "rmse": float(np.mean([r["rmse"] for r in records])),
        }
    run = _RunDir(args.out)
    try:
        dio.write_json(run.path("metrics.json"), payload)
    except BaseException:
        run.cleanup()
        raise
    for r in records:
        _say(args, f"{r['frame_id']}: mae={r['mae']:.4f} rmse={r['rmse']:.4f} n={r['n_pixels']}")
    if "mean" in payload:
        _say(args, f"mean: mae={payload['mean']['mae']:.4f} rmse={payload['mean']['rmse']:.4f}")
    return 0


def cmd_compare(args):
    cfg = _load_config(args)
    frame = dio.load_frame(args.frame)
    if frame.truth is None:
        raise ValueError("compare needs a frame with truth.pfm")
    em = frame.eval_mask or EvalMask.full(*frame.truth.shape)

    rows = {}
    timings = {}
    t0 = time.perf_counter()
    full_depth, full_report, _ = _reconstruct(frame, cfg, baseline=False)
    timings["full"] = time.perf_counter() - t0
    rows["full"] = (mae(full_depth, frame.truth, em), rmse(full_depth, frame.truth, em))
    t0 = time.perf_counter()
    base_depth, base_report, _ = _reconstruct(frame, cfg, baseline=True)
    timings["baseline"] = time.perf_counter() - t0
    rows["baseline"] = (mae(base_depth, frame.truth, em), rmse(base_depth, frame.truth, em))
    nn = coarse_upsample(frame.sparse)
    rows["nearest"] = (mae(nn, frame.truth, em), rmse(nn, frame.truth, em))

    best_mae = min(v[0] for v in rows.values())
    best_rmse = min(v[1] for v in rows.values())
    table = {
        name: {
            "mae": v[0],
            "rmse": v[1],
            "best_mae": v[0] == best_mae,
            "best_rmse": v[1] == best_rmse,
        }
        for name, v in rows.items()
    }
    run = _RunDir(args.out)
    try:
        dio.write_depth(run.path("depth_full.pfm"), full_depth)
        dio.write_depth(run.path("depth_baseline.pfm"), base_depth)
        dio.write_depth(run.path("depth_nearest.pfm"), nn)
        manifest = {
            "command": "compare",
            "config": cfg,
            "frame": str(args.frame),
            "table": table,
            "convergence": {
                "full": full_report.to_dict(),
                "baseline": base_report.to_dict(),
            },
        }
        dio.write_json(run.path("manifest.json"), manifest)
        dio.write_json(run.path("timings.json"), timings)
    except BaseException:
        run.cleanup()
        raise

    _say(args, f"{'method':<10} {'MAE':>9} {'RMSE':>9}")
    for name, v in rows.items():
        m_mark = "*" if v[0] == best_mae else " "
        r_mark = "*" if v[1] == best_rmse else " "
        _say(args, f"{name:<10} {v[0]:>8.4f}{m_mark} {v[1]:>8.4f}{r_mark}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="depthtv",
        description="Edge-guided dense depth reconstruction from sparse range samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_frame=False):
        p.add_argument("--config", default=None, help="config file (section.key = value)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override scene/acquisition seed")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
        if needs_frame:
            p.add_argument("--frame", required=True, help="frame bundle directory")
        for key, default in dio.DEFAULT_CONFIG.items():
            kind = type(default)
            p.add_argument(
                f"--{key}",
                dest=key.replace(".", "_"),
                type=str if kind is str else kind,
                default=None,
                help=argparse.SUPPRESS,
            )

    p = sub.add_parser("synth", help="generate a synthetic frame bundle")
    add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("prior", help="write the jump prior and edge mask for a frame")
    add_common(p, needs_frame=True)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("upsample", help="reconstruct dense depth for a frame")
    add_common(p, needs_frame=True)
    p.add_argument("--baseline", action="store_true",
                   help="curvature-only baseline (no prior, no TV term)")
    p.set_defaults(func=cmd_upsample)

    p = sub.add_parser("eval", help="MAE/RMSE of reconstructions against truth")
    add_common(p)
    p.add_argument("--recon", required=True, help="reconstruction file or directory")
    p.add_argument("--truth", required=True, help="truth file or directory")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="full vs baseline vs nearest-sample table")
    add_common(p, needs_frame=True)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
