"""Batch drivers behind the command-line interface."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import logging
import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .annotation import AnnotationDoc, ImageAnnotation, polygonize, rasterize, read_cvat_xml, write_cvat_xml
from .catalog import Catalog
from .compositor import read_mask, render, save_page
from .errors import EvaluationError, LayerSynthError
from .evaluation import REPORT_COLUMNS, confusion, metrics, report_row
from .labels import ClassLabel, NUM_CLASSES
from .planner import PageSpec, SynthConfig, plan_page

log = logging.getLogger(__name__)

WORKERS_ENV = "LAYERSYNTH_WORKERS"
MANIFEST_FILE = "manifest.json"
ANNOTATIONS_FILE = "annotations.xml"
FAILURES_FILE = "failures.json"
DEFAULT_EPS = 1.5
# manifest fields allowed to differ between otherwise identical runs
VOLATILE_FIELDS = ("tool_version", "created")


class ManifestError(LayerSynthError):
    pass


def worker_count() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", WORKERS_ENV, env)
    return os.cpu_count() or 1


def page_stem(index: int) -> str:
    return f"page_{index:06d}"


def _class_pixels(mask: np.ndarray) -> dict[str, int]:
    counts = np.bincount(mask.ravel(), minlength=NUM_CLASSES)
    return {ClassLabel(i).label_name: int(counts[i]) for i in range(NUM_CLASSES)}


def synth_page(catalog: Catalog, config: SynthConfig, index: int, out_dir: Path, simplify_eps: float = DEFAULT_EPS):
    """Plan, render and export one page; returns (manifest record, annotation image)."""
    spec = plan_page(catalog, config, index)
    page = render(spec, catalog)
    stem = page_stem(index)
    files = save_page(page, out_dir, stem)
    shapes, dropped = polygonize(page.mask, simplify_eps)
    images = spec.image_placements
    record = {
        "page_id": spec.page_id,
        "index": index,
        "seed": spec.seed,
        "raster_path": files["raster"],
        "mask_path": files["mask"],
        "vis_path": files["vis"],
        "annotation_ref": index,
        "relaxed_count": spec.relaxed,
        "placement_count": len(images),
        "text_count": len(spec.text_placements),
        "similarity_evals": spec.similarity_evals,
        "dropped_regions": dropped,
        "class_pixels": _class_pixels(page.mask),
        "placements": [p.to_dict() for p in spec.placements],
    }
    ann = ImageAnnotation(id=index, name=files["raster"], width=spec.width, height=spec.height, shapes=shapes)
    return record, ann


_WORKER: dict = {}


def _init_worker(catalog, config, out_dir, eps):
    _WORKER.update(catalog=catalog, config=config, out_dir=out_dir, eps=eps)


def _run_one(index: int):
    try:
        return index, synth_page(_WORKER["catalog"], _WORKER["config"], index, _WORKER["out_dir"], _WORKER["eps"]), None
    except Exception as exc:  # isolated per page, reported in failures.json
        return index, None, f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"


@dataclass
class SynthResult:
    manifest: dict
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def synth(
    catalog: Catalog,
    config: SynthConfig,
    out_dir,
    num_pages: int,
    workers: int | None = None,
    simplify_eps: float = DEFAULT_EPS,
    catalog_ref: str = "",
) -> SynthResult:
    """Generate ``num_pages`` pages plus one CVAT XML and a manifest in ``out_dir``."""
    if num_pages < 0:
        raise ValueError("num_pages must be >= 0")
    catalog.check_plannable()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = workers or worker_count()

    results: dict[int, tuple] = {}
    failures = []
    _init_worker(catalog, config, out_dir, simplify_eps)
    if workers <= 1 or num_pages <= 1:
        outcomes = map(_run_one, range(num_pages))
        for index, res, err in outcomes:
            _collect(index, res, err, results, failures)
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker,
                                 initargs=(catalog, config, out_dir, simplify_eps)) as pool:
            for index, res, err in pool.map(_run_one, range(num_pages), chunksize=4):
                _collect(index, res, err, results, failures)

    order = sorted(results)
    doc = AnnotationDoc(images=[results[i][1] for i in order])
    (out_dir / ANNOTATIONS_FILE).write_bytes(write_cvat_xml(doc))
    manifest = {
        "tool_version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "catalog": catalog_ref,
        "num_pages": num_pages,
        "simplify_eps": simplify_eps,
        "annotations": ANNOTATIONS_FILE,
        "config_snapshot": config.to_dict(),
        "pages": [results[i][0] for i in order],
        "failed_pages": [f["index"] for f in failures],
    }
    write_manifest(out_dir / MANIFEST_FILE, manifest)
    if failures:
        (out_dir / FAILURES_FILE).write_text(json.dumps(failures, indent=2) + "\n", encoding="utf-8")
    elif (out_dir / FAILURES_FILE).exists():
        (out_dir / FAILURES_FILE).unlink()
    return SynthResult(manifest, failures)


def _collect(index, res, err, results, failures):
    if err is None:
        results[index] = res
    else:
        log.error("page %d failed: %s", index, err.splitlines()[0])
        failures.append({"index": index, "page_id": page_stem(index), "error": err})


def write_manifest(path: Path, manifest: dict) -> None:
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"{path}: corrupt manifest: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("pages"), list):
        raise ManifestError(f"{path}: corrupt manifest: missing 'pages' list")
    for k, rec in enumerate(data["pages"]):
        if not isinstance(rec, dict) or "placement_count" not in rec or "placements" not in rec:
            raise ManifestError(f"{path}: corrupt manifest: page record {k} is incomplete")
    return data


def spec_from_record(record: dict, config: SynthConfig) -> PageSpec:
    from .planner import Placement

    return PageSpec(
        page_id=record["page_id"],
        width=config.page_width,
        height=config.page_height,
        seed=record["seed"],
        placements=tuple(Placement.from_dict(p) for p in record["placements"]),
        config=config,
        relaxed=record["relaxed_count"],
        similarity_evals=record["similarity_evals"],
    )


# -- evaluation ---------------------------------------------------------------


def _page_key(name: str) -> str:
    stem = Path(name).stem
    return stem[: -len("_mask")] if stem.endswith("_mask") else stem


def _mask_files(directory: Path) -> dict[str, Path]:
    pngs = sorted(directory.glob("*.png"))
    masks = [p for p in pngs if p.stem.endswith("_mask")]
    chosen = masks or [p for p in pngs if not p.stem.endswith("_vis")]
    return {_page_key(p.name): p for p in chosen}


def load_truth(truth_source) -> dict:
    """Map page key -> callable returning the truth mask."""
    src = Path(truth_source)
    if src.is_dir():
        return {k: (lambda p=p: read_mask(p)) for k, p in _mask_files(src).items()}
    if src.suffix.lower() == ".xml":
        doc = read_cvat_xml(src.read_bytes())
        return {_page_key(im.name): (lambda i=im.id: rasterize(doc, i)) for im in doc.images}
    raise EvaluationError(f"truth source must be a mask directory or a CVAT XML file: {src}")


@dataclass
class EvaluationRun:
    rows: list[dict]
    corpus: object  # Metrics | None
    unmatched: list[str]
    errors: list[str]


def evaluate(pred_dir, truth_source, report_path, figures: bool = True) -> EvaluationRun:
    pred_dir = Path(pred_dir)
    if not pred_dir.is_dir():
        raise EvaluationError(f"prediction directory not found: {pred_dir}")
    preds = _mask_files(pred_dir)
    truths = load_truth(truth_source)
    common = sorted(set(preds) & set(truths))
    if not common:
        raise EvaluationError(
            f"no page names in common between {pred_dir} ({len(preds)} masks) and {truth_source} ({len(truths)} pages)"
        )
    unmatched = sorted(set(preds) ^ set(truths))

    rows, errors = [], []
    total_cm = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    for key in common:
        try:
            cm = confusion(read_mask(preds[key]), truths[key]())
            m = metrics(cm)
        except (LayerSynthError, ValueError, OSError) as exc:
            errors.append(key)
            rows.append(report_row(key, None, status="error", note=str(exc)))
            continue
        total_cm += cm
        rows.append(report_row(key, m))
    for key in unmatched:
        side = "prediction" if key in preds else "truth"
        rows.append(report_row(key, None, status="unmatched", note=f"only in {side}"))

    corpus = metrics(total_cm) if total_cm.sum() else None
    note = f"{len(common) - len(errors)} pages, {len(errors)} errors, {len(unmatched)} unmatched"
    rows.append(report_row("__corpus__", corpus, status="ok" if corpus else "error", note=note))

    report_path = Path(report_path)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    with open(report_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, delimiter="\t", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    if figures and corpus is not None:
        from .plots import plot_scores

        plot_scores(corpus.per_class, corpus.accuracy, report_path.with_name(report_path.stem + "_scores.png"))
    return EvaluationRun(rows, corpus, unmatched, errors)


# -- inspection ---------------------------------------------------------------

SCALE_BIN = 0.1
SCALE_BINS = 13  # [0, 1.3)


def summarize(manifest: dict) -> dict:
    pages = manifest["pages"]
    count_max = max([8, *(r["placement_count"] for r in pages)])
    count_hist = {str(k): 0 for k in range(1, count_max + 1)}
    scale_hist = {f"{b * SCALE_BIN:.1f}-{(b + 1) * SCALE_BIN:.1f}": 0 for b in range(SCALE_BINS)}
    keys = list(scale_hist)
    pixels = dict.fromkeys((ClassLabel(i).label_name for i in range(NUM_CLASSES)), 0)
    scales = []
    for rec in pages:
        n = rec["placement_count"]
        count_hist[str(n)] = count_hist.get(str(n), 0) + 1
        for p in rec["placements"]:
            if p["class"] == "text":
                continue
            scales.append(p["scale"])
            if p["scale_y"] != p["scale"]:
                scales.append(p["scale_y"])
            b = min(int(p["scale"] / SCALE_BIN), SCALE_BINS - 1)
            scale_hist[keys[b]] += 1
        for name, v in rec["class_pixels"].items():
            pixels[name] += v
    total_px = sum(pixels.values())
    return {
        "pages": len(pages),
        "placements": sum(r["placement_count"] for r in pages),
        "text_blocks": sum(r.get("text_count", 0) for r in pages),
        "relaxed_total": sum(r["relaxed_count"] for r in pages),
        "pages_with_relaxation": sum(1 for r in pages if r["relaxed_count"]),
        "similarity_evals": sum(r.get("similarity_evals", 0) for r in pages),
        "scale_min": min(scales) if scales else 0.0,
        "scale_max": max(scales) if scales else 0.0,
        "class_pixel_share": {k: (v / total_px if total_px else 0.0) for k, v in pixels.items()},
        "image_count_histogram": count_hist,
        "scale_histogram": scale_hist,
    }


def format_summary(summary: dict) -> str:
    lines = [f"{k}\t{summary[k]}" for k in
             ("pages", "placements", "text_blocks", "relaxed_total", "pages_with_relaxation", "similarity_evals")]
    lines.append(f"scale_range\t{summary['scale_min']:.4f}\t{summary['scale_max']:.4f}")
    for k, v in summary["class_pixel_share"].items():
        lines.append(f"pixel_share\t{k}\t{v:.4f}")
    for k, v in summary["image_count_histogram"].items():
        lines.append(f"image_count\t{k}\t{v}")
    for k, v in summary["scale_histogram"].items():
        lines.append(f"scale\t{k}\t{v}")
    return "\n".join(lines) + "\n"
