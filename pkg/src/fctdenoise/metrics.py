"""Distortion, log-log slope fits and the oversampling sweep."""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .acquisition import AcquisitionConfig, FullPrecision, QuantizerSpec, SingleBit, acquire
from .imagemodel import BandlimitedImage
from .kernel import KernelParams
from .reconstruct import estimate

__all__ = [
    "mse",
    "fit_loglog_slope",
    "SweepRow",
    "SweepReport",
    "SweepError",
    "run_sweep",
    "run_cell",
    "CSV_HEADER",
]

CSV_HEADER = "image,N,quantizer,sigma2,sigma_d2,seeds,mse_mean,mse_std"


def mse(estimate, truth, interior_margin: int = 0) -> float:
    """Mean squared error over the grid with ``interior_margin`` points dropped per edge."""
    est = np.asarray(estimate, dtype=float)
    ref = truth.pixels if isinstance(truth, BandlimitedImage) else np.asarray(truth, dtype=float)
    if est.shape != ref.shape:
        raise ValueError(f"shape mismatch {est.shape} vs {ref.shape}")
    m = int(interior_margin)
    if m < 0 or 2 * m >= min(est.shape):
        raise ValueError(f"interior_margin {m} leaves no interior in a {est.shape} image")
    sl = (slice(m, est.shape[0] - m), slice(m, est.shape[1] - m))
    return float(np.mean((est[sl] - ref[sl]) ** 2))


def fit_loglog_slope(points) -> tuple[float, float, float]:
    """Least-squares line through ``(log10 N, log10 D)``.

    Returns ``(slope, intercept, max_abs_residual)``.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError("need at least two (N, D) points")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise ValueError("N and D must be positive and finite")
    x, y = np.log10(pts[:, 0]), np.log10(pts[:, 1])
    if np.ptp(x) == 0:
        raise ValueError("need at least two distinct N values")
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), float(intercept), resid


@dataclass(frozen=True)
class SweepRow:
    image: str
    N: int
    quantizer: str
    sigma2: float
    sigma_d2: float
    seeds: int
    mse_mean: float
    mse_std: float

    def to_csv(self) -> str:
        return ",".join(
            [
                self.image,
                str(self.N),
                self.quantizer,
                _fmt(self.sigma2),
                _fmt(self.sigma_d2),
                str(self.seeds),
                _fmt(self.mse_mean),
                _fmt(self.mse_std),
            ]
        )


def _fmt(x: float) -> str:
    return f"{x:.9g}"


@dataclass
class SweepReport:
    rows: list[SweepRow]
    slopes: dict[str, tuple[float, float, float]] = field(default_factory=dict)
    gap: dict[int, float] = field(default_factory=dict)
    min_fit_N: int = 2

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.image, r.quantizer, r.N))
        if not self.slopes:
            self.slopes = self._fit_slopes()
        if not self.gap:
            self.gap = self._gap_series()

    def series(self, quantizer: str, image: str | None = None) -> list[tuple[int, float]]:
        return [(r.N, r.mse_mean) for r in self.rows if r.quantizer == quantizer and (image is None or r.image == image)]

    def _fit_slopes(self):
        out = {}
        for tag in sorted({r.quantizer for r in self.rows}):
            pts = [(n, d) for n, d in self.series(tag) if n >= self.min_fit_N and d > 0]
            if len({n for n, _ in pts}) >= 2:
                out[tag] = fit_loglog_slope(pts)
        return out

    def _gap_series(self):
        one = dict(self.series(SingleBit.tag))
        full = dict(self.series(FullPrecision.tag))
        return {
            n: math.log10(one[n]) - math.log10(full[n])
            for n in sorted(set(one) & set(full))
            if n >= self.min_fit_N and one[n] > 0 and full[n] > 0
        }

    @property
    def gap_std(self) -> float:
        """Population standard deviation of the gap series (log10 units)."""
        return float(np.std(list(self.gap.values()))) if self.gap else float("nan")

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines += [r.to_csv() for r in self.rows]
        for tag, (slope, _, _) in sorted(self.slopes.items()):
            lines.append(f"# slope,{tag},{_fmt(slope)}")
        for n, g in sorted(self.gap.items()):
            lines.append(f"# gap,{n},{_fmt(g)}")
        if self.gap:
            lines.append(f"# gap_std,{_fmt(self.gap_std)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, min_fit_N: int = 2) -> "SweepReport":
        """Parse rows back; comment lines are ignored and the summary is refitted."""
        import csv

        body = [ln for ln in io.StringIO(text) if ln.strip() and not ln.startswith("#")]
        reader = csv.DictReader(body)
        if reader.fieldnames is None or ",".join(reader.fieldnames) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = [
            SweepRow(
                rec["image"],
                int(rec["N"]),
                rec["quantizer"],
                float(rec["sigma2"]),
                float(rec["sigma_d2"]),
                int(rec["seeds"]),
                float(rec["mse_mean"]),
                float(rec["mse_std"]),
            )
            for rec in reader
        ]
        return cls(rows, min_fit_N=min_fit_N)


class SweepError(RuntimeError):
    def __init__(self, cell: tuple, cause: Exception):
        super().__init__(f"sweep cell (N={cell[0]}, quantizer={cell[1]}, seed={cell[2]}) failed: {cause}")
        self.cell = cell


def run_cell(
    image: BandlimitedImage,
    N: int,
    quantizer: QuantizerSpec,
    sigma2: float,
    sigma_d2: float,
    seed: int,
    params: KernelParams,
    edge: str = "symmetric",
    interior_margin: int = 0,
    taper_start: int | None = None,
) -> float:
    """Acquire, estimate and score one realization."""
    # the full-precision chain has no dither stage
    cfg = AcquisitionConfig(N, sigma2, sigma_d2, quantizer, seed, edge)
    samples = acquire(image, cfg, params)
    result = estimate(samples, image.grid, params, image.k_c, taper_start)
    return mse(result.estimate, image, interior_margin)


def run_sweep(
    image: BandlimitedImage,
    N_list,
    quantizers,
    sigma2: float,
    sigma_d2: float,
    seeds: int = 5,
    params: KernelParams = KernelParams(),
    *,
    image_id: str = "image",
    base_seed: int = 0,
    edge: str = "symmetric",
    interior_margin: int = 0,
    taper_start: int | None = None,
    min_fit_N: int = 2,
    threads: int = 1,
) -> SweepReport:
    """MSE for every ``(N, quantizer)`` cell averaged over ``seeds`` realizations.

    Realization ``i`` of every cell uses seed ``base_seed + i``, so cells
    share their noise draws.  Slopes are fitted over ``N >= min_fit_N``.
    """
    N_list = [int(n) for n in N_list]
    quantizers = list(quantizers)
    if not N_list:
        raise ValueError("N list is empty")
    if not quantizers:
        raise ValueError("quantizer list is empty")
    if seeds < 1:
        raise ValueError("seeds per cell must be >= 1")

    cells = [(n, q, base_seed + s) for n in N_list for q in quantizers for s in range(seeds)]

    def work(cell):
        n, q, seed = cell
        try:
            return run_cell(image, n, q, sigma2, sigma_d2, seed, params, edge, interior_margin, taper_start)
        except Exception as exc:
            raise SweepError((n, getattr(q, "tag", q), seed), exc) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(c) for c in cells]

    by_cell: dict[tuple[int, str], list[float]] = {}
    for (n, q, _), d in zip(cells, results):
        by_cell.setdefault((n, q.tag), []).append(d)

    rows = []
    for (n, tag), ds in by_cell.items():
        arr = np.asarray(ds)
        std = float(np.std(arr, ddof=1)) if len(arr) > 1 else 0.0
        rows.append(SweepRow(image_id, n, tag, sigma2, sigma_d2, len(arr), float(arr.mean()), std))
    return SweepReport(rows, min_fit_N=min_fit_N)
