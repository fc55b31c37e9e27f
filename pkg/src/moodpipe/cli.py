"""Command-line front end: synth, detect, extract, train, predict, eval.

Exit codes are a stable contract: 0 success, 2 I/O or configuration problem,
3 no face found, 4 feature extraction failure, 5 training data degradation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .config import PipelineConfig, apply_overrides, load_config
from .errors import (
    DegenerateLabels,
    EmptyDataset,
    FeatureNotFound,
    InvalidConfig,
    MoodpipeError,
)
from .facedetect import detect_faces
from .featvec import COMPONENT_NAMES
from .imgcore import Rect, draw_circle, draw_rect, load_image, save_image
from .pipeline import NoFaceFound, extract_feature_vector
from .svm import EXPRESSIONS, evaluate, load_model, predict_expression, save_model, train_multiclass
from .synthface import generate_corpus

EXIT_OK = 0
EXIT_IO = 2
EXIT_NO_FACE = 3
EXIT_FEATURE = 4
EXIT_DEGRADED = 5


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise InvalidConfig(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    return apply_overrides(cfg, overrides)


def _read_manifest(path: Path) -> list[tuple[Path, str]]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["path", "label"]:
            raise InvalidConfig(f"manifest {path} must start with a 'path,label' header")
        for row in reader:
            if not row:
                continue
            if len(row) < 2:
                raise InvalidConfig(f"manifest row {row!r} needs path and label")
            label = row[1].strip()
            if label not in EXPRESSIONS:
                raise InvalidConfig(f"unknown label {label!r} in manifest")
            rows.append(((path.parent / row[0]).resolve(), label))
    return rows


def _features_cache_path(manifest: Path) -> Path:
    return manifest.with_name(manifest.stem + ".features.csv")


def _read_features_csv(path: Path) -> dict[str, np.ndarray]:
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header != ["path", *COMPONENT_NAMES]:
            raise InvalidConfig(f"feature file {path} has an unexpected header")
        for row in reader:
            if row:
                out[row[0]] = np.array([float(v) for v in row[1:8]])
    return out


def _write_features_csv(path: Path, rows: list[tuple[str, np.ndarray]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", *COMPONENT_NAMES])
        for name, vec in rows:
            writer.writerow([name, *(format(v, ".12g") for v in vec)])


def _extract_dataset(manifest: Path, cfg: PipelineConfig, features_file: Path | None):
    """Feature matrix + labels for a manifest; failed rows are skipped."""
    rows = _read_manifest(manifest)
    precomputed = _read_features_csv(features_file) if features_file else None
    X, labels, cache_rows, skipped = [], [], [], 0
    for image_path, label in rows:
        key = image_path.name
        if precomputed is not None:
            if key not in precomputed:
                print(f"skip {key}: not in feature file", file=sys.stderr)
                skipped += 1
                continue
            vec = precomputed[key]
        else:
            try:
                img = load_image(image_path)
                result = extract_feature_vector(
                    img, cfg.detect_config(), cfg.anthro, cfg.band
                )
                vec = result.vector.as_array()
            except (MoodpipeError, OSError, ValueError) as exc:
                print(f"skip {key}: {exc}", file=sys.stderr)
                skipped += 1
                continue
        X.append(vec)
        labels.append(label)
        cache_rows.append((key, vec))
    return np.array(X), np.array(labels, dtype=object), cache_rows, skipped, len(rows)


def cmd_synth(args) -> int:
    try:
        manifest = generate_corpus(args.n, args.jitter, args.seed, args.out, size=args.size)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write corpus: {exc}")
    print(manifest)
    return EXIT_OK


def cmd_detect(args) -> int:
    cfg = _load_config(args)
    try:
        img = load_image(args.image)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_IO, f"cannot read image: {exc}")
    detections = detect_faces(img, cfg.detect_config())
    for d in detections:
        print(
            "%d %d %d %d %d %d %d %.6f"
            % (d.circle.cx, d.circle.cy, d.circle.r,
               d.bbox.x1, d.bbox.y1, d.bbox.x2, d.bbox.y2, d.confidence)
        )
    if args.annotate:
        annotated = img.copy()
        for d in detections:
            draw_circle(annotated, d.circle, (255, 0, 0))
            draw_rect(annotated, d.bbox, (255, 0, 0))
        try:
            save_image(args.annotate, annotated)
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write annotated image: {exc}")
    return EXIT_OK


def cmd_extract(args) -> int:
    cfg = _load_config(args)
    try:
        img = load_image(args.image)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_IO, f"cannot read image: {exc}")
    bbox = None
    if args.bbox:
        try:
            x1, y1, x2, y2 = (int(v) for v in args.bbox.split(","))
            bbox = Rect(x1, y1, x2, y2)
        except (ValueError, MoodpipeError) as exc:
            return _fail(EXIT_IO, f"bad --bbox: {exc}")
    try:
        result = extract_feature_vector(
            img, cfg.detect_config(), cfg.anthro, cfg.band, bbox=bbox
        )
    except NoFaceFound:
        return _fail(EXIT_NO_FACE, "no face detected")
    except FeatureNotFound as exc:
        return _fail(EXIT_FEATURE, f"feature failure: {exc.feature}")
    if args.dump_masks:
        out = Path(args.dump_masks)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for name, mask in (
                ("left_eyebrow", result.masks.left_eyebrow),
                ("right_eyebrow", result.masks.right_eyebrow),
                ("lip", result.masks.lip),
            ):
                save_image(out / f"{name}.pgm", mask)
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot dump masks: {exc}")
    print(" ".join(format(v, ".6f") for v in result.vector.as_array()))
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _load_config(args)
    manifest = Path(args.manifest)
    try:
        X, labels, cache_rows, skipped, total = _extract_dataset(
            manifest, cfg, Path(args.features) if args.features else None
        )
    except (OSError, InvalidConfig) as exc:
        return _fail(EXIT_IO, str(exc))
    if total and skipped * 2 > total:
        return _fail(EXIT_DEGRADED, f"{skipped}/{total} rows failed extraction")
    if not args.features and cache_rows:
        _write_features_csv(_features_cache_path(manifest), cache_rows)
    try:
        model = train_multiclass(X, labels, cfg.kernel_spec(), cfg.train_config())
    except DegenerateLabels as exc:
        return _fail(EXIT_DEGRADED, f"DegenerateLabels: {exc}")
    try:
        save_model(model, args.model_out)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write model: {exc}")
    report = evaluate(model, X, labels)
    print(f"trained on {len(X)} samples ({skipped} skipped)")
    for pair, m in model.pairs.items():
        if m is None:
            print(f"pair {pair[0]}/{pair[1]}: absent")
        else:
            flag = "converged" if m.converged else "UNCONVERGED"
            print(f"pair {pair[0]}/{pair[1]}: {len(m.alphas)} SVs, {flag}")
    print(f"training accuracy: {report.average:.4f}")
    return EXIT_OK


def cmd_predict(args) -> int:
    cfg = _load_config(args)
    try:
        model = load_model(args.model)
        img = load_image(args.image)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_IO, str(exc))
    try:
        result = extract_feature_vector(img, cfg.detect_config(), cfg.anthro, cfg.band)
    except NoFaceFound:
        return _fail(EXIT_NO_FACE, "no face detected")
    except FeatureNotFound as exc:
        return _fail(EXIT_FEATURE, f"feature failure: {exc.feature}")
    label, tally = predict_expression(model, result.vector.as_array())
    print(label)
    print(" ".join(f"{cls}={votes}" for cls, votes in tally.items()))
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    manifest = Path(args.manifest)
    try:
        model = load_model(args.model)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_IO, str(exc))
    if args.train_manifest:
        try:
            train_paths = {p for p, _ in _read_manifest(Path(args.train_manifest))}
            overlap = train_paths & {p for p, _ in _read_manifest(manifest)}
            if overlap:
                print(f"warning: {len(overlap)} paths overlap the training manifest", file=sys.stderr)
        except (OSError, InvalidConfig) as exc:
            return _fail(EXIT_IO, str(exc))
    try:
        X, labels, _, skipped, total = _extract_dataset(
            manifest, cfg, Path(args.features) if args.features else None
        )
    except (OSError, InvalidConfig) as exc:
        return _fail(EXIT_IO, str(exc))
    if len(X) == 0:
        return _fail(EXIT_IO, "EmptyDataset: no evaluable rows")
    try:
        report = evaluate(model, X, labels)
    except EmptyDataset as exc:
        return _fail(EXIT_IO, str(exc))

    print("Expression  Percentage")
    csv_rows = []
    for cls in EXPRESSIONS:
        if cls not in report.per_class:
            continue
        correct, count = report.per_class[cls]
        pct = 100.0 * correct / count
        print(f"{cls:<11} {pct:.1f}%")
        csv_rows.append((cls, correct, count, f"{pct:.6f}"))
    print(f"{'Average':<11} {100.0 * report.average:.1f}%")
    csv_rows.append(("Average", "", "", f"{100.0 * report.average:.6f}"))

    present = [c for c in EXPRESSIONS if c in report.per_class]
    print("Confusion (rows = truth):")
    print("            " + " ".join(f"{c[:7]:>8}" for c in EXPRESSIONS))
    for truth_cls in present:
        i = EXPRESSIONS.index(truth_cls)
        counts = " ".join(f"{int(v):>8}" for v in report.confusion[i])
        print(f"{truth_cls:<11} {counts}")
    if skipped:
        print(f"({skipped}/{total} rows skipped)", file=sys.stderr)

    if args.csv:
        try:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["expression", "correct", "total", "percentage"])
                writer.writerows(csv_rows)
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write csv: {exc}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moodpipe",
                                     description="Facial expression recognition pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--config", help="configuration file (flat dotted keys)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one configuration key (repeatable)")

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--n", type=int, required=True, help="images per expression")
    p.add_argument("--jitter", type=float, default=0.15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--size", type=int, default=256)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("detect", help="detect faces in an image")
    p.add_argument("image")
    p.add_argument("--annotate", metavar="OUT.PPM", help="write an annotated copy")
    add_config_args(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("extract", help="print the 7-component feature vector")
    p.add_argument("image")
    p.add_argument("--bbox", metavar="X1,Y1,X2,Y2", help="skip detection, use this face box")
    p.add_argument("--dump-masks", metavar="DIR", help="write feature masks as P5 graymaps")
    add_config_args(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train the expression classifier")
    p.add_argument("manifest")
    p.add_argument("--model-out", required=True)
    p.add_argument("--features", help="precomputed feature CSV instead of extraction")
    add_config_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict the expression of one image")
    p.add_argument("image")
    p.add_argument("--model", required=True)
    add_config_args(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="evaluate a model against a labeled manifest")
    p.add_argument("manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--csv", help="also write the accuracy table as CSV")
    p.add_argument("--features", help="precomputed feature CSV instead of extraction")
    p.add_argument("--train-manifest", help="warn if test paths overlap this manifest")
    add_config_args(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfig as exc:
        return _fail(EXIT_IO, f"configuration: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
