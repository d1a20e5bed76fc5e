"""Batch command line: ``generate``, ``acquire``, ``reconstruct``, ``sweep``, ``report``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .acquisition import AcquisitionConfig, SingleBit, acquire
from .config import ConfigError, RunConfig, load_config
from .fileio import read_pgm, read_samples, to_gray8, write_cbim, write_pgm, write_samples
from .imagemodel import BandlimitedImage, bandlimit_image, make_cosine_image, out_of_band_distortion, scale_gray
from .metrics import CSV_HEADER, SweepReport, SweepRow, mse, run_sweep
from .reconstruct import CdfModel, estimate_full_precision, estimate_single_bit

log = logging.getLogger("fctdenoise")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_image(cfg: RunConfig) -> BandlimitedImage:
    path = cfg.image_path
    if path is None:
        return make_cosine_image(cfg.f_m, cfg.grid, cfg.lam, cfg.k_c)
    return bandlimit_image(read_pgm(path), cfg.grid, cfg.f_m, cfg.lam, cfg.k_c)


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _samples_name(tag: str, N: int) -> str:
    return f"samples_{tag}_N{N}.cbss"


def cmd_generate(cfg: RunConfig) -> list[Path]:
    out = _out_dir(cfg)
    img = build_image(cfg)
    write_cbim(out / "truth.cbim", img.pixels)
    write_pgm(out / "truth.pgm", to_gray8(img.pixels))
    if cfg.image_path is not None:
        d = out_of_band_distortion(scale_gray(read_pgm(cfg.image_path)), img)
        print(f"out_of_band_distortion,{d:.9g}")
    print(f"generated {cfg.image_id}: n={cfg.n} k_c={img.k_c}")
    return [out / "truth.cbim", out / "truth.pgm"]


def cmd_acquire(cfg: RunConfig) -> list[Path]:
    out = _out_dir(cfg)
    img = build_image(cfg)
    written = []
    for N in cfg.N:
        acq = AcquisitionConfig(N, cfg.sigma2, cfg.sigma_d2, cfg.quantizer, cfg.seed, cfg.edge)
        s = acquire(img, acq, cfg.kernel)
        path = out / _samples_name(s.quantizer.tag, N)
        write_samples(path, s)
        print(f"acquired N={N} stride={s.stride} m_s={s.m_s} guard={s.guard} -> {path.name}")
        written.append(path)
    return written


def cmd_reconstruct(cfg: RunConfig, sample_paths=None) -> list[Path]:
    out = _out_dir(cfg)
    if not sample_paths:
        sample_paths = [out / _samples_name(cfg.quantizer.tag, N) for N in cfg.N]
    img = build_image(cfg)
    written = []
    for sp in sample_paths:
        s = read_samples(sp)
        problems = []
        if s.quantizer.tag != cfg.quantizer.tag:
            problems.append(f"{sp}: quantizer {s.quantizer.tag} but config says {cfg.quantizer.tag}")
        if abs(s.sigma2 - cfg.sigma2) > 1e-12 or abs(s.sigma_d2 - cfg.sigma_d2) > 1e-12:
            problems.append(
                f"{sp}: recorded variances (sigma2={s.sigma2}, sigma_d2={s.sigma_d2}) "
                f"do not match config (sigma2={cfg.sigma2}, sigma_d2={cfg.sigma_d2})"
            )
        if s.m_s != (cfg.n - 1) // s.stride + 1:
            problems.append(f"{sp}: lattice of {s.m_s} sites does not fit an n={cfg.n} grid")
        if problems:
            raise ConfigError(problems)
        if isinstance(s.quantizer, SingleBit):
            cdf = CdfModel.from_noise(cfg.sigma2, cfg.sigma_d2)
            res = estimate_single_bit(s, cfg.grid, cfg.kernel, img.k_c, cdf, cfg.taper_start)
        else:
            res = estimate_full_precision(s, cfg.grid, cfg.kernel, img.k_c, cfg.taper_start)
        res.mse = mse(res.estimate, img, cfg.margin)
        stem = f"estimate_{s.quantizer.tag}_N{s.N}"
        write_cbim(out / f"{stem}.cbim", res.estimate)
        write_pgm(out / f"{stem}.pgm", to_gray8(res.estimate))
        row = SweepRow(cfg.image_id, s.N, s.quantizer.tag, s.sigma2, s.sigma_d2, 1, res.mse, 0.0)
        (out / f"result_{s.quantizer.tag}_N{s.N}.csv").write_text(CSV_HEADER + "\n" + row.to_csv() + "\n")
        print(row.to_csv())
        written += [out / f"{stem}.cbim", out / f"{stem}.pgm"]
    return written


def cmd_sweep(cfg: RunConfig, threads: int = 1) -> Path:
    out = _out_dir(cfg)
    img = build_image(cfg)
    report = run_sweep(
        img,
        cfg.N,
        cfg.sweep_quantizers,
        cfg.sigma2,
        cfg.sigma_d2,
        cfg.seeds,
        cfg.kernel,
        image_id=cfg.image_id,
        base_seed=cfg.seed,
        edge=cfg.edge,
        interior_margin=cfg.margin,
        taper_start=cfg.taper_start,
        threads=threads,
    )
    path = out / "sweep.csv"
    path.write_text(report.to_csv())
    sys.stdout.write(report.to_csv())
    return path


def cmd_report(cfg: RunConfig, csv_path=None) -> SweepReport:
    path = Path(csv_path) if csv_path else _out_dir(cfg) / "sweep.csv"
    report = SweepReport.from_csv(path.read_text())
    print(f"{'quantizer':>10} {'slope':>9} {'resid':>9}  N: mse_mean")
    for tag, (slope, _, resid) in sorted(report.slopes.items()):
        series = "  ".join(f"{n}:{d:.3e}" for n, d in report.series(tag))
        print(f"{tag:>10} {slope:9.4f} {resid:9.2e}  {series}")
    if report.gap:
        print("gap log10(D_1bit/D_full): " + "  ".join(f"{n}:{g:.4f}" for n, g in report.gap.items()))
        print(f"gap std: {report.gap_std:.4f}")
    return report


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fctdenoise", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("generate", "acquire", "reconstruct", "sweep", "report"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="key = value configuration file")
        sp.add_argument("--out", help="output directory (overrides config)")
        sp.add_argument("--seed", type=int, help="base seed (overrides config)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
        if name == "reconstruct":
            sp.add_argument("--samples", nargs="*", help="CBSS files (default: those acquire wrote)")
        if name == "report":
            sp.add_argument("--csv", help="sweep CSV (default: <out>/sweep.csv)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config).with_overrides(out=args.out, seed=args.seed)
        if args.threads < 1:
            raise ConfigError(["--threads must be >= 1"])
        cfg.validate()
        if args.command == "generate":
            cmd_generate(cfg)
        elif args.command == "acquire":
            cmd_acquire(cfg)
        elif args.command == "reconstruct":
            cmd_reconstruct(cfg, args.samples)
        elif args.command == "sweep":
            cmd_sweep(cfg, args.threads)
        else:
            cmd_report(cfg, args.csv)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
