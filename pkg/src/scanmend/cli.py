"""Command-line front end: assess, equalize, enhance, train, bench, synth.

Exit codes: 0 success, 1 usage or configuration error, 2 processing error.
All outputs are deterministic for a fixed seed; the only exception is the
runtime_ms column in reports, which measures wall clock.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .enhance import ClaheParams, UnsharpParams, clahe_fast, unsharp_mask
from .errors import ConfigError
from .exposure import (
    DEFAULT_EXPOSURE_THRESHOLD,
    ExposureClass,
    classify_exposure,
    equalize,
    stretch_minmax,
)
from .image import read_pgm, write_pgm
from .metrics import score
from .neural import Arch, forward_sr, load_weights, make_srcnn, make_vdsr
from .neural import TrainConfig, make_training_pair, save_weights, train
from .resample import ScaleSpec, bicubic_resize, degrade
from .rng import XorShift64
from .synth import PhantomKind, PhantomSpec, generate, make_corpus

METHOD_NAMES = {
    "um": "UM",
    "clahe": "CLAHE",
    "bicubic": "Bicubic",
    "srcnn": "SRCNN",
    "vdsr": "VDSR",
}
CSV_HEADER = "image_id,method,mse,psnr_db,ssim,runtime_ms,params"
_CLASS_LABEL = {
    ExposureClass.UNDER_EXPOSED: "Under",
    ExposureClass.OVER_EXPOSED: "Over",
    ExposureClass.NORMAL: "Normal",
}


@dataclass
class BenchRow:
    image_id: str
    method: str
    mse: float
    psnr_db: float
    ssim: float
    runtime_ms: float
    params: str

    def csv(self) -> str:
        return ",".join(
            [
                self.image_id,
                self.method,
                _num(self.mse),
                _num(self.psnr_db),
                _num(self.ssim),
                f"{self.runtime_ms:.3f}",
                self.params,
            ]
        )

    def json_obj(self) -> dict:
        return {
            "image_id": self.image_id,
            "method": self.method,
            "mse": _jnum(self.mse),
            "psnr_db": _jnum(self.psnr_db),
            "ssim": _jnum(self.ssim),
            "runtime_ms": self.runtime_ms,
            "params": self.params,
        }


def _num(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.6f}"


def _jnum(v: float):
    return "inf" if math.isinf(v) else v


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage by default; this artifact reserves 2
    for processing errors, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_image(path: str) -> np.ndarray:
    return read_pgm(Path(path).read_bytes())


def _write_image(path: str, img: np.ndarray) -> None:
    Path(path).write_bytes(write_pgm(img))


# ---------------------------------------------------------------------------
# assess / equalize
# ---------------------------------------------------------------------------

def cmd_assess(args) -> int:
    failures = 0
    for path in args.inputs:
        try:
            report = classify_exposure(_read_image(path), args.threshold)
        except (OSError, ValueError) as exc:
            print(f"{path} error: {exc}")
            failures += 1
            continue
        print(
            f"{path} class={_CLASS_LABEL[report.category]} "
            f"lower_mass={report.lower_mass:.4f}"
        )
    return 2 if failures == len(args.inputs) else 0


def cmd_equalize(args) -> int:
    img = _read_image(args.input)
    out = stretch_minmax(img) if args.mode == "minmax" else equalize(img)
    _write_image(args.out, out)
    return 0


# ---------------------------------------------------------------------------
# enhance
# ---------------------------------------------------------------------------

def _load_model(path: str, expect_arch: Arch):
    if path is None:
        raise ConfigError(f"{expect_arch.name} needs --weights (or train one first)")
    try:
        model = load_weights(Path(path).read_bytes())
    except OSError as exc:
        raise ConfigError(f"cannot read weights: {exc}") from exc
    if model.arch is not expect_arch:
        raise ConfigError(
            f"weight file holds {model.arch.name}, method wants {expect_arch.name}"
        )
    return model


def _method_runner(method: str, args):
    """Returns (apply(img) -> img, canonical params string)."""
    if method == "um":
        p = UnsharpParams(radius=args.radius, amount=args.amount)
        return lambda im: unsharp_mask(im, p), f"radius={p.radius:g} amount={p.amount:g}"
    if method == "clahe":
        p = ClaheParams(
            window=args.window, clip_limit=args.clip_limit, iterations=args.iterations
        )
        return (
            lambda im: clahe_fast(im, p),
            f"window={p.window} clip_limit={p.clip_limit} iterations={p.iterations}",
        )
    if method == "bicubic":
        factor = args.factor
        return (
            lambda im: bicubic_resize(im, ScaleSpec.from_factor(im.shape, factor)),
            f"factor={factor:g}",
        )
    if method in ("srcnn", "vdsr"):
        arch = Arch.SRCNN if method == "srcnn" else Arch.VDSR
        weights = getattr(args, f"{method}_weights", None) or args.weights
        model = _load_model(weights, arch)
        return (
            lambda im: forward_sr(model, im),
            f"arch={arch.name} weights={Path(weights).name}",
        )
    raise ConfigError(f"unknown method {method!r}")


def cmd_enhance(args) -> int:
    img = _read_image(args.input)
    report = classify_exposure(img, args.threshold)
    stage = img
    if report.category is not ExposureClass.NORMAL or args.force_equalize:
        stage = equalize(stage)
    apply_fn, params = _method_runner(args.method, args)
    t0 = time.perf_counter()
    out = apply_fn(stage)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    _write_image(args.out, out)

    if args.side_by_side:
        if img.shape[0] != out.shape[0]:
            raise ConfigError(
                "side-by-side needs equal heights; not available when the "
                "method changes image dims"
            )
        _write_image(args.side_by_side, np.concatenate([img, out], axis=1))

    if args.reference:
        ref = _read_image(args.reference)
        q = score(ref, out)
        row = BenchRow(
            image_id=Path(args.input).stem,
            method=METHOD_NAMES[args.method],
            mse=q.mse,
            psnr_db=q.psnr_db,
            ssim=q.ssim,
            runtime_ms=runtime_ms,
            params=params,
        )
        print(CSV_HEADER)
        print(row.csv())
    return 0


# ---------------------------------------------------------------------------
# corpora shared by train/bench
# ---------------------------------------------------------------------------

def _load_corpus(args) -> list[tuple[str, np.ndarray]]:
    """(image_id, gray image) pairs from --synthetic or a PGM directory."""
    if args.synthetic is not None:
        if args.synthetic < 1:
            raise ConfigError("--synthetic needs N >= 1")
        base = PhantomSpec(
            width=args.size,
            height=args.size,
            seed=args.seed,
            kind=PhantomKind.ELLIPSES,
            noise_sigma=args.noise,
        )
        images = make_corpus(args.synthetic, base)
        return [(f"phantom_{args.seed + i}", im) for i, im in enumerate(images)]
    if not args.corpus:
        raise ConfigError("give a corpus directory or --synthetic N")
    paths = sorted(Path(args.corpus).glob("*.pgm"))
    if not paths:
        raise ConfigError(f"no .pgm files in {args.corpus}")
    return [(p.stem, read_pgm(p.read_bytes())) for p in paths]


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------

def cmd_train(args) -> int:
    if args.factor < 2:
        raise ConfigError("--factor must be >= 2 (degradation needs a real downscale)")
    corpus = _load_corpus(args)
    pairs = [make_training_pair(hr, args.factor, args.blur) for _, hr in corpus]

    if args.arch == "srcnn":
        cfg = TrainConfig.srcnn_preset(seed=args.seed, epochs=args.epochs)
        model = make_srcnn(XorShift64(args.seed))
    else:
        cfg = TrainConfig.vdsr_preset(seed=args.seed, epochs=args.epochs)
        model = make_vdsr(XorShift64(args.seed))
    overrides = {}
    if args.patch_size is not None:
        overrides["patch_size"] = args.patch_size
    if args.batch_size is not None:
        overrides["batch_size"] = args.batch_size
    if args.steps_per_epoch is not None:
        overrides["steps_per_epoch"] = args.steps_per_epoch
    if args.lr is not None:
        overrides["base_lr"] = args.lr
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)

    state = train(model, pairs, cfg, progress=sys.stdout)
    Path(args.out).write_bytes(save_weights(state.model))
    print(f"wrote {args.out} ({state.model.parameter_count()} parameters)")
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _bench_methods(args) -> list[str]:
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    for m in methods:
        if m not in METHOD_NAMES:
            raise ConfigError(f"unknown method {m!r}")
    neural = [m for m in methods if m in ("srcnn", "vdsr")]
    if len(neural) > 1 and args.weights:
        raise ConfigError(
            "--weights is ambiguous with two neural methods; "
            "use --srcnn-weights / --vdsr-weights"
        )
    return methods


def cmd_bench(args) -> int:
    if args.factor < 2:
        raise ConfigError("--factor must be >= 2 (degradation needs a real downscale)")
    methods = _bench_methods(args)
    corpus = _load_corpus(args)

    runners = {}
    for m in methods:
        if m == "bicubic":
            continue   # the harness's own upscale is the bicubic row
        runners[m] = _method_runner(m, args)

    rows: list[BenchRow] = []
    for image_id, hr in corpus:
        lr = degrade(hr, args.factor, args.blur)
        spec = ScaleSpec(
            factor=float(args.factor), out_width=hr.shape[1], out_height=hr.shape[0]
        )
        t0 = time.perf_counter()
        upscaled = bicubic_resize(lr, spec)
        upscale_ms = (time.perf_counter() - t0) * 1e3
        for m in methods:
            if m == "bicubic":
                out, runtime_ms = upscaled, upscale_ms
                params = f"factor={args.factor:g}"
            else:
                apply_fn, params = runners[m]
                t0 = time.perf_counter()
                out = apply_fn(upscaled)
                runtime_ms = (time.perf_counter() - t0) * 1e3
            q = score(hr, out)
            rows.append(
                BenchRow(image_id, METHOD_NAMES[m], q.mse, q.psnr_db, q.ssim,
                         runtime_ms, params)
            )

    summary = []
    for m in methods:
        name = METHOD_NAMES[m]
        got = [r for r in rows if r.method == name]
        summary.append(
            (
                name,
                sum(r.psnr_db for r in got) / len(got),
                sum(r.ssim for r in got) / len(got),
            )
        )

    if args.format == "json":
        payload = {
            "rows": [r.json_obj() for r in rows],
            "summary": [
                {"method": n, "mean_psnr_db": _jnum(p), "mean_ssim": s}
                for n, p, s in summary
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [CSV_HEADER]
        lines += [r.csv() for r in rows]
        lines += [
            f"# summary method={n} mean_psnr_db={_num(p)} mean_ssim={_num(s)}"
            for n, p, s in summary
        ]
        text = "\n".join(lines) + "\n"

    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

def cmd_synth(args) -> int:
    base = PhantomSpec(
        width=args.size,
        height=args.size,
        seed=args.seed,
        kind=PhantomKind(args.kind),
        count=args.count,
        noise_sigma=args.noise,
        exposure_bias=args.bias,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    images = make_corpus(args.n, base)
    for i, img in enumerate(images):
        (out_dir / f"phantom_{args.seed + i}.pgm").write_bytes(write_pgm(img))
    print(f"wrote {len(images)} phantoms to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def _add_method_flags(p: _Parser) -> None:
    p.add_argument("--window", type=int, default=15, help="CLAHE window (odd)")
    p.add_argument("--clip-limit", type=int, default=None, dest="clip_limit")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--radius", type=float, default=2.0, help="unsharp blur sigma")
    p.add_argument("--amount", type=float, default=1.0, help="unsharp gain")
    p.add_argument("--factor", type=float, default=2.0, help="bicubic scale factor")
    p.add_argument("--weights", help="weight file for the neural method")
    p.add_argument("--srcnn-weights", dest="srcnn_weights")
    p.add_argument("--vdsr-weights", dest="vdsr_weights")


def _add_corpus_flags(p: _Parser) -> None:
    p.add_argument("corpus", nargs="?", help="directory of .pgm images")
    p.add_argument("--synthetic", type=int, metavar="N", help="use N phantoms instead")
    p.add_argument("--size", type=int, default=96, help="phantom dims for --synthetic")
    p.add_argument("--noise", type=float, default=0.0, help="phantom noise sigma")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="scanmend", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("assess", help="classify exposure of PGM images")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--threshold", type=float, default=DEFAULT_EXPOSURE_THRESHOLD)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("equalize", help="histogram-equalize one image")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["histeq", "minmax"], default="histeq")
    p.set_defaults(func=cmd_equalize)

    p = sub.add_parser("enhance", help="exposure-gate then apply one method")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--method", required=True, choices=sorted(METHOD_NAMES), help="enhancement method"
    )
    p.add_argument("--threshold", type=float, default=DEFAULT_EXPOSURE_THRESHOLD)
    p.add_argument("--force-equalize", action="store_true", dest="force_equalize")
    p.add_argument("--reference", help="ground truth for metrics")
    p.add_argument("--side-by-side", dest="side_by_side", metavar="PATH")
    _add_method_flags(p)
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("train", help="train SRCNN or VDSR on a corpus")
    _add_corpus_flags(p)
    p.add_argument("--arch", required=True, choices=["srcnn", "vdsr"])
    p.add_argument("--out", required=True, help="weight file to write")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--factor", type=int, default=2, help="degradation factor")
    p.add_argument("--blur", type=float, default=0.0, help="degradation blur sigma")
    p.add_argument("--patch-size", type=int, default=None, dest="patch_size")
    p.add_argument("--batch-size", type=int, default=None, dest="batch_size")
    p.add_argument("--steps-per-epoch", type=int, default=None, dest="steps_per_epoch")
    p.add_argument("--lr", type=float, default=None, help="override base learning rate")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="degrade-restore benchmark with metrics report")
    _add_corpus_flags(p)
    p.add_argument("--method", default="um,clahe,bicubic", help="comma-separated list")
    p.add_argument("--factor", type=int, default=2)
    p.add_argument("--blur", type=float, default=0.0, help="degradation blur sigma")
    p.add_argument("--report", help="write report here instead of stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_method_flags_bench(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write synthetic phantom PGMs")
    p.add_argument("n", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--kind", choices=[k.value for k in PhantomKind], default="ellipses")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    return parser


def _add_method_flags_bench(p: _Parser) -> None:
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--clip-limit", type=int, default=None, dest="clip_limit")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--amount", type=float, default=1.0)
    p.add_argument("--weights")
    p.add_argument("--srcnn-weights", dest="srcnn_weights")
    p.add_argument("--vdsr-weights", dest="vdsr_weights")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
