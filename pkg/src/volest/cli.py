"""Batch command-line entry points composing the pipeline stages.

Subcommands: run (full pipeline), synth, mask, reconstruct, refine,
volume, evaluate, select-frames. Every command exits 0 on success, 2 on
invalid input (single-line message prefixed ``error:`` on stderr), 3 on a
pipeline failure. Artifacts are deterministic: identical inputs, config,
and seed produce byte-identical outputs regardless of --threads; nothing
partial is left behind on failure. Stage timings go to the stderr log,
never into artifacts.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .alignment import apply_similarity, apply_similarity_to_views, estimate_similarity
from .errors import (
    EmptyInputError,
    ImageTooSmallError,
    MissingExtentError,
    MissingFileError,
    MissingMaskError,
    NoMaskedViewsError,
    NonPositiveGroundTruthError,
    ParseError,
    ValidationError,
    VolestError,
)
from .frames import dhash, frame_skip, select_frame_indices
from .geometry import AABB
from .ingestion import (
    load_image_gray,
    load_manifest,
    load_mesh,
    save_mesh,
    save_point_cloud,
    synthesize_scene,
    write_scene,
)
from .masking import MaskingConfig, mask_point_cloud, masked_bounding_box
from .mesh import euler_characteristic, is_watertight
from .metrics import (
    aggregate_report,
    chamfer_distance,
    error_percentage,
    mesh_volume,
    render_report,
    voxel_volume,
)
from .reconstruction import carve_occupancy, marching_cubes
from .refinement import RefinementConfig, refine
from .solids import make_solid

log = logging.getLogger("volest")

# errors that mean the input (file, manifest, flag value) was bad
_INPUT_ERRORS = (
    ValidationError,
    ParseError,
    MissingFileError,
    MissingMaskError,
    NoMaskedViewsError,
    MissingExtentError,
    ImageTooSmallError,
    EmptyInputError,
    NonPositiveGroundTruthError,
)


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs shared by the full-pipeline run."""

    resolution: int = 512
    quota: float = 1.0
    refinement: RefinementConfig = RefinementConfig()
    chamfer_samples: int = 10000
    seed: int = 0
    threads: int = 1


class _Parser(argparse.ArgumentParser):
    # single-line machine-parsable errors, exit code 2
    def error(self, message):
        self.exit(2, f"error: {message}\n")


@contextmanager
def _stage(name: str):
    t0 = time.perf_counter()
    yield
    log.info("%s: %.2f s", name, time.perf_counter() - t0)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


class _Artifacts:
    """Collects output files so a failed command leaves nothing behind."""

    def __init__(self, out_dir: Path):
        self.out = out_dir
        self.written: list[Path] = []

    def __enter__(self):
        self.out.mkdir(parents=True, exist_ok=True)
        return self

    def add(self, name: str, writer) -> Path:
        path = self.out / name
        writer(path)
        self.written.append(path)
        return path

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for p in self.written:
                p.unlink(missing_ok=True)
        return False


def _refinement_from_args(args) -> RefinementConfig:
    return RefinementConfig(
        smooth_iters=args.smooth_iters,
        smooth_lambda=args.smooth_lambda,
        taubin_mu=args.taubin_mu,
        simplify_cell=args.simplify_cell,
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_run(args) -> int:
    cfg = PipelineConfig(
        resolution=args.resolution,
        quota=args.quota,
        refinement=_refinement_from_args(args),
        chamfer_samples=args.chamfer_samples,
        seed=args.seed,
        threads=args.threads,
    )
    with _stage("load"):
        scene = load_manifest(args.manifest)
    if scene.point_cloud is None:
        raise ValidationError("manifest.point_cloud: required by 'run'")

    cloud, views = scene.point_cloud, scene.views
    src, tgt = scene.metric_center_pairs()
    alignment: dict = {"applied": False, "pairs": int(len(src))}
    if len(src) >= 3:
        with _stage("align"):
            xf, residual = estimate_similarity(src, tgt)
            cloud = apply_similarity(xf, cloud)
            views = apply_similarity_to_views(xf, views)
        alignment.update(applied=True, scale=xf.scale, residual_rms=residual)

    masking = MaskingConfig(quota=cfg.quota)
    with _stage("mask"):
        masked = mask_point_cloud(cloud, views, masking)
        box = masked_bounding_box(masked)
    with _stage("carve"):
        grid = carve_occupancy(
            views, box, resolution=cfg.resolution, cfg=masking, threads=cfg.threads
        )
    with _stage("surface"):
        mesh_raw = marching_cubes(grid)
    with _stage("refine"):
        mesh = refine(mesh_raw, cfg.refinement)
    with _stage("measure"):
        vol_voxel = voxel_volume(grid)
        vol_raw = mesh_volume(mesh_raw)
        vol_mesh = mesh_volume(mesh)
        chamfer = chamfer_distance(mesh, masked, samples=cfg.chamfer_samples, seed=cfg.seed)

    report = {
        "alignment": alignment,
        "chamfer_mesh_vs_cloud_m": chamfer,
        "config": {
            "chamfer_samples": cfg.chamfer_samples,
            "quota": cfg.quota,
            "resolution": cfg.resolution,
            "seed": cfg.seed,
            "simplify_cell": cfg.refinement.simplify_cell,
            "smooth_iters": cfg.refinement.smooth_iters,
            "smooth_lambda": cfg.refinement.smooth_lambda,
            "taubin_mu": cfg.refinement.taubin_mu,
        },
        "counts": {
            "cloud_points": int(scene.point_cloud.points.shape[0]),
            "masked_points": int(masked.points.shape[0]),
            "views": len(views),
        },
        "mesh": {
            "euler_characteristic": euler_characteristic(mesh),
            "triangles": int(mesh.triangles.shape[0]),
            "vertices": int(mesh.vertices.shape[0]),
            "watertight": is_watertight(mesh),
        },
        "scene": scene.scene_name,
        "volumes_ml": {
            "mesh": vol_mesh.volume_ml,
            "mesh_raw": vol_raw.volume_ml,
            "voxel": vol_voxel.volume_ml,
        },
    }
    if scene.gt_volume_ml is not None:
        report["gt"] = {
            "error_pct": error_percentage(vol_mesh.volume_ml, scene.gt_volume_ml),
            "volume_ml": scene.gt_volume_ml,
        }

    with _Artifacts(Path(args.out)) as sink:
        sink.add("aligned_cloud.ply", lambda p: save_point_cloud(cloud, p))
        sink.add("masked_cloud.ply", lambda p: save_point_cloud(masked, p))
        sink.add("mesh_raw.ply", lambda p: save_mesh(mesh_raw, p))
        sink.add("mesh.ply", lambda p: save_mesh(mesh, p))
        sink.add("report.json", lambda p: _write_json(p, report))

    print(f"scene: {scene.scene_name}")
    print(f"volume: {vol_mesh.volume_ml:.6g} ml (voxel {vol_voxel.volume_ml:.6g} ml)")
    if scene.gt_volume_ml is not None:
        print(
            f"ground truth: {scene.gt_volume_ml:.6g} ml "
            f"(error {report['gt']['error_pct']:.2f}%)"
        )
    print(f"artifacts: {args.out}")
    return 0


def cmd_synth(args) -> int:
    solid = make_solid(args.kind, args.size, args.center)
    with _stage("synthesize"):
        scene = synthesize_scene(
            solid,
            n_views=args.views,
            image_size=tuple(args.image_size),
            seed=args.seed,
            n_cloud_points=args.cloud_points,
            name=args.name,
        )
    with _stage("write"):
        write_scene(scene, Path(args.out))
    print(
        f"scene: {scene.scene_name} ({len(scene.views)} views, "
        f"gt {scene.gt_volume_ml:.6g} ml) -> {args.out}"
    )
    return 0


def cmd_mask(args) -> int:
    scene = load_manifest(args.manifest)
    if scene.point_cloud is None:
        raise ValidationError("manifest.point_cloud: required by 'mask'")
    cfg = MaskingConfig(quota=args.quota, min_depth=args.min_depth)
    with _stage("mask"):
        masked = mask_point_cloud(scene.point_cloud, scene.views, cfg)
    report = {
        "cloud_points": int(scene.point_cloud.points.shape[0]),
        "masked_points": int(masked.points.shape[0]),
        "quota": cfg.quota,
        "scene": scene.scene_name,
    }
    with _Artifacts(Path(args.out)) as sink:
        sink.add("masked_cloud.ply", lambda p: save_point_cloud(masked, p))
        sink.add("report.json", lambda p: _write_json(p, report))
    print(f"kept {report['masked_points']} of {report['cloud_points']} points -> {args.out}")
    return 0


def cmd_reconstruct(args) -> int:
    scene = load_manifest(args.manifest)
    cfg = MaskingConfig(quota=args.quota)
    if args.bbox is not None:
        b = np.asarray(args.bbox, dtype=np.float64)
        box = AABB(lo=b[:3], hi=b[3:])
    else:
        if scene.point_cloud is None:
            raise MissingExtentError(
                "reconstruct: manifest has no point cloud; pass --bbox x0 y0 z0 x1 y1 z1"
            )
        with _stage("mask"):
            masked = mask_point_cloud(scene.point_cloud, scene.views, cfg)
            box = masked_bounding_box(masked, args.pad_fraction)
    with _stage("carve"):
        grid = carve_occupancy(
            scene.views, box, resolution=args.resolution, cfg=cfg, threads=args.threads
        )
    with _stage("surface"):
        mesh = marching_cubes(grid)
    report = {
        "dims": list(grid.dims),
        "occupied_voxels": int(grid.occupied_count),
        "resolution": args.resolution,
        "scene": scene.scene_name,
        "spacing_m": grid.spacing,
        "triangles": int(mesh.triangles.shape[0]),
        "voxel_volume_ml": voxel_volume(grid).volume_ml,
    }
    with _Artifacts(Path(args.out)) as sink:
        sink.add("mesh_raw.ply", lambda p: save_mesh(mesh, p))
        sink.add("report.json", lambda p: _write_json(p, report))
    print(
        f"carved {report['occupied_voxels']} voxels "
        f"({report['voxel_volume_ml']:.6g} ml) -> {args.out}"
    )
    return 0


def cmd_refine(args) -> int:
    mesh = load_mesh(args.mesh)
    with _stage("refine"):
        refined = refine(mesh, _refinement_from_args(args))
    with _Artifacts(Path(args.out)) as sink:
        sink.add("mesh.ply", lambda p: save_mesh(refined, p))
    print(
        f"refined {mesh.vertices.shape[0]} -> {refined.vertices.shape[0]} vertices, "
        f"{mesh.triangles.shape[0]} -> {refined.triangles.shape[0]} triangles -> {args.out}"
    )
    return 0


def cmd_volume(args) -> int:
    mesh = load_mesh(args.mesh)
    result = mesh_volume(mesh)
    print(f"{result.volume_ml:.6g} ml")
    return 0


def cmd_evaluate(args) -> int:
    pred_dir = Path(args.pred)
    if not pred_dir.is_dir():
        raise MissingFileError(f"prediction directory not found: {pred_dir}")
    gt_path = Path(args.gt)
    if not gt_path.is_file():
        raise MissingFileError(f"ground-truth file not found: {gt_path}")
    try:
        gt_doc = json.loads(gt_path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{gt_path}: invalid JSON at line {exc.lineno}") from exc
    items = gt_doc.get("items")
    if not isinstance(items, list) or not items:
        raise ValidationError(f"{gt_path}: 'items' must be a non-empty list")

    predictions: dict[str, dict] = {}
    for path in sorted(pred_dir.glob("*.json")):
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
        if "name" not in doc or "predicted_ml" not in doc:
            raise ValidationError(f"{path}: prediction needs 'name' and 'predicted_ml'")
        predictions[str(doc["name"])] = doc
    if not predictions:
        raise EmptyInputError(f"{pred_dir}: no *.json predictions found")

    rows = []
    for i, item in enumerate(items):
        if "name" not in item or "volume_ml" not in item:
            raise ValidationError(f"{gt_path}: items[{i}] needs 'name' and 'volume_ml'")
        name = str(item["name"])
        if name not in predictions:
            raise ValidationError(f"no prediction for item '{name}'")
        doc = predictions.pop(name)
        rows.append((name, doc["predicted_ml"], item["volume_ml"], doc.get("chamfer")))
    if predictions:
        stray = sorted(predictions)[0]
        raise ValidationError(f"prediction '{stray}' has no ground-truth item")

    report = aggregate_report(rows)
    print(render_report(report))
    if args.out is not None:
        with _Artifacts(Path(args.out)) as sink:
            sink.add("report.json", lambda p: _write_json(p, report.to_dict()))
    return 0


def cmd_select_frames(args) -> int:
    path = Path(args.manifest)
    if not path.is_file():
        raise MissingFileError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    images = doc.get("images")
    if not isinstance(images, list):
        raise ValidationError("manifest.images: expected a list")

    if args.skip is not None:
        kept = frame_skip(list(range(len(images))), args.skip)
    else:
        hashes = []
        with _stage("hash"):
            for i, entry in enumerate(images):
                if not isinstance(entry, dict) or "image" not in entry:
                    raise ValidationError(f"manifest.images[{i}].image: missing path")
                hashes.append(dhash(load_image_gray(path.parent / entry["image"])))
        kept = select_frame_indices(hashes, args.hamming)

    doc["images"] = [images[i] for i in kept]
    _rehome_manifest_paths(doc, path.parent, Path(args.out))
    with _Artifacts(Path(args.out)) as sink:
        sink.add("manifest.json", lambda p: _write_json(p, doc))
    print(f"kept {len(kept)} of {len(images)} frames -> {args.out}")
    print(" ".join(str(i) for i in kept))
    return 0


def _rehome_manifest_paths(doc: dict, src_dir: Path, out_dir: Path) -> None:
    """Rewrite relative file references so they still resolve from out_dir."""
    src_dir, out_dir = src_dir.resolve(), out_dir.resolve()
    if src_dir == out_dir:
        return

    def rehome(rel: str) -> str:
        if Path(rel).is_absolute():
            return rel
        return os.path.relpath(src_dir / rel, out_dir)

    for entry in doc["images"]:
        if isinstance(entry, dict):
            for key in ("image", "mask"):
                if isinstance(entry.get(key), str):
                    entry[key] = rehome(entry[key])
    if isinstance(doc.get("point_cloud"), str):
        doc["point_cloud"] = rehome(doc["point_cloud"])


# ---------------------------------------------------------------------------
# parser


def _add_refinement_flags(sub) -> None:
    sub.add_argument("--smooth-iters", type=int, default=5, help="Taubin iterations")
    sub.add_argument("--smooth-lambda", type=float, default=0.5, help="positive smoothing step")
    sub.add_argument("--taubin-mu", type=float, default=-0.53, help="negative smoothing step")
    sub.add_argument(
        "--simplify-cell",
        type=float,
        default=0.0,
        help="vertex-clustering cell size in meters (0 disables)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="volest", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="INFO", help="stderr log level")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("run", help="full pipeline: manifest -> volume report")
    p.add_argument("--manifest", required=True, help="scene manifest JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--resolution", type=int, default=512, help="carving resolution")
    p.add_argument("--quota", type=float, default=1.0, help="fraction of views a point must hit")
    p.add_argument("--chamfer-samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    _add_refinement_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("synth", help="generate an analytic test scene")
    p.add_argument("--kind", required=True, choices=["sphere", "box", "cylinder"])
    p.add_argument(
        "--size",
        required=True,
        type=float,
        nargs="+",
        help="sphere: radius; box: ex ey ez; cylinder: radius height (meters)",
    )
    p.add_argument("--center", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("X", "Y", "Z"))
    p.add_argument("--views", type=int, default=64)
    p.add_argument("--image-size", type=int, nargs=2, default=(800, 800), metavar=("W", "H"))
    p.add_argument("--cloud-points", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("mask", help="project the cloud into every mask and filter it")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--quota", type=float, default=1.0)
    p.add_argument("--min-depth", type=float, default=1e-6)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("reconstruct", help="carve occupancy and extract the raw surface")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--quota", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--pad-fraction", type=float, default=0.05)
    p.add_argument(
        "--bbox",
        type=float,
        nargs=6,
        default=None,
        metavar=("X0", "Y0", "Z0", "X1", "Y1", "Z1"),
        help="explicit carve region; otherwise the masked cloud's padded bounds",
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("refine", help="smooth and optionally simplify a mesh")
    p.add_argument("--mesh", required=True, help="input PLY")
    p.add_argument("--out", required=True)
    _add_refinement_flags(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("volume", help="print a mesh's enclosed volume in ml")
    p.add_argument("--mesh", required=True, help="input PLY")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("evaluate", help="aggregate per-item predictions against ground truth")
    p.add_argument("--pred", required=True, help="directory of per-item prediction JSONs")
    p.add_argument("--gt", required=True, help="ground-truth JSON with an 'items' list")
    p.add_argument("--out", default=None, help="also write report.json here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("select-frames", help="subsample a manifest's image list")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--skip", type=int, default=None, help="keep every k-th frame")
    g.add_argument(
        "--hamming", type=int, default=None, help="greedy dHash threshold (bits, 0..64)"
    )
    p.set_defaults(func=cmd_select_frames)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr, level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="[%(levelname)s] %(message)s",
    )
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VolestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
