"""Flat ``key = value`` run configuration.

Lines starting with ``#`` and blank lines are ignored.  Recognised keys::

    image               cosine | path/to/image.pgm   (default cosine)
    x0, dx, n           grid origin, step and points per axis
                        (default -1.275, 0.005, 512)
    f_m                 band edge in cycles per unit (default 2)
    lambda              kernel steepness (default 2)
    truncation_epsilon  kernel tail bound (default 1e-6)
    cutoff_index        override the retained cosine indices per axis
    sigma2, sigma_d2    noise and dither variances (default 0.1, 2.9)
    quantizer           full | 1bit | uniform:<bits>[:<range>]  (acquire/reconstruct)
    quantizers          comma list of quantizers for sweep (default: quantizer)
    N                   comma list of oversampling factors (default 2,5,10,25)
    seed                base seed, unsigned 64-bit (default 0)
    seeds               realizations per sweep cell (default 5)
    edge                symmetric | available (default symmetric)
    margin              grid points excluded per edge from the MSE (default 0)
    lowpass             sharp | tapered (default sharp)
    out                 output directory (default out)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .acquisition import FullPrecision, QuantizerSpec, SingleBit, StrideError, Uniform, sample_positions
from .kernel import KernelParams
from .transform import GridSpec, cutoff_index_for

__all__ = ["RunConfig", "ConfigError", "parse_config", "load_config", "parse_quantizer"]


class ConfigError(ValueError):
    """One or more configuration problems, reported together."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


def parse_quantizer(text: str) -> QuantizerSpec:
    t = text.strip().lower()
    if t in ("full", "fullprecision", "full_precision"):
        return FullPrecision()
    if t in ("1bit", "single", "singlebit", "single_bit"):
        return SingleBit()
    if t.startswith("uniform"):
        rest = t[len("uniform"):].lstrip(":")
        parts = rest.split(":") if rest else []
        if not parts:
            raise ValueError(f"uniform quantizer needs a bit count: {text!r}")
        bits = int(parts[0])
        amp = float(parts[1]) if len(parts) > 1 else None
        return Uniform(bits, amp)
    raise ValueError(f"unknown quantizer {text!r}")


@dataclass(frozen=True)
class RunConfig:
    image: str = "cosine"
    x0: float = -1.275
    dx: float = 0.005
    n: int = 512
    f_m: float = 2.0
    lam: float = 2.0
    truncation_epsilon: float = 1e-6
    cutoff_index: int | None = None
    sigma2: float = 0.1
    sigma_d2: float = 2.9
    quantizer: QuantizerSpec = field(default_factory=SingleBit)
    quantizers: tuple = ()
    N: tuple = (2, 5, 10, 25)
    seed: int = 0
    seeds: int = 5
    edge: str = "symmetric"
    margin: int = 0
    lowpass: str = "sharp"
    out: str = "out"
    base_dir: str = "."

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.x0, self.dx, self.n)

    @property
    def kernel(self) -> KernelParams:
        return KernelParams(self.lam, self.truncation_epsilon)

    @property
    def k_c(self) -> int:
        if self.cutoff_index is not None:
            return self.cutoff_index
        return cutoff_index_for(self.f_m, self.grid, self.lam)

    @property
    def taper_start(self) -> int | None:
        if self.lowpass == "sharp":
            return None
        return min(self.k_c - 1, math.ceil(2 * self.grid.length * self.f_m - 1e-9))

    @property
    def sweep_quantizers(self) -> tuple:
        return self.quantizers or (self.quantizer,)

    @property
    def image_path(self) -> Path | None:
        if self.image == "cosine":
            return None
        p = Path(self.image)
        return p if p.is_absolute() else Path(self.base_dir) / p

    @property
    def image_id(self) -> str:
        p = self.image_path
        return "cosine" if p is None else p.stem

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def validate(self) -> None:
        """Check every module precondition; raise one :class:`ConfigError` listing all failures."""
        problems = []
        grid = None
        try:
            grid = self.grid
        except ValueError as exc:
            problems.append(f"grid: {exc}")
        try:
            self.kernel
        except ValueError as exc:
            problems.append(f"kernel: {exc}")
        if not self.f_m > 0:
            problems.append(f"f_m must be positive, got {self.f_m}")
        elif grid is not None:
            try:
                k_c = self.k_c
                if not 1 <= k_c <= grid.n:
                    problems.append(f"cutoff_index {k_c} outside [1, {grid.n}]")
            except ValueError as exc:
                problems.append(f"cutoff: {exc}")
        if self.sigma2 < 0 or self.sigma_d2 < 0:
            problems.append("sigma2 and sigma_d2 must be non-negative")
        if any(isinstance(q, SingleBit) for q in (self.quantizer, *self.quantizers)) and not self.sigma_d2 > 0:
            problems.append("single-bit quantization requires sigma_d2 > 0")
        if not self.N:
            problems.append("N list is empty")
        elif grid is not None and self.f_m > 0:
            for n_ in self.N:
                if n_ < 1:
                    problems.append(f"N={n_} must be a positive integer")
                    continue
                try:
                    sample_positions(grid, self.f_m, n_)
                except StrideError as exc:
                    problems.append(str(exc))
        if self.seeds < 1:
            problems.append("seeds must be >= 1")
        if not 0 <= self.seed < 2**64:
            problems.append("seed must fit in 64 unsigned bits")
        if self.edge not in ("symmetric", "available"):
            problems.append(f"edge must be symmetric or available, got {self.edge!r}")
        if self.lowpass not in ("sharp", "tapered"):
            problems.append(f"lowpass must be sharp or tapered, got {self.lowpass!r}")
        if grid is not None and not 0 <= self.margin < grid.n / 2:
            problems.append(f"margin must be in [0, n/2), got {self.margin}")
        path = self.image_path
        if path is not None:
            if not path.exists():
                problems.append(f"image file {path} not found")
            elif grid is not None:
                from .fileio import FormatError, read_pgm

                try:
                    shape = read_pgm(path).shape
                    if shape != (grid.n, grid.n):
                        problems.append(f"image {path} is {shape[1]}x{shape[0]}, grid needs {grid.n}x{grid.n}")
                except (OSError, FormatError) as exc:
                    problems.append(f"image {path}: {exc}")
        if problems:
            raise ConfigError(problems)


_FLOAT_KEYS = {"x0", "dx", "f_m", "truncation_epsilon", "sigma2", "sigma_d2"}
_INT_KEYS = {"n", "seed", "seeds", "margin", "cutoff_index"}
_STR_KEYS = {"image", "edge", "lowpass", "out"}


def parse_config(text: str, base_dir: str = ".") -> RunConfig:
    values: dict = {"base_dir": str(base_dir)}
    problems = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected key = value, got {raw.strip()!r}")
            continue
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _STR_KEYS:
                values[key] = val
            elif key == "lambda":
                values["lam"] = float(val)
            elif key == "quantizer":
                values["quantizer"] = parse_quantizer(val)
            elif key == "quantizers":
                values["quantizers"] = tuple(parse_quantizer(v) for v in val.split(",") if v.strip())
            elif key == "N":
                values["N"] = tuple(int(v) for v in val.split(",") if v.strip())
            else:
                problems.append(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            problems.append(f"line {lineno}: bad value for {key}: {exc}")
    if problems:
        raise ConfigError(problems)
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read config {p}: {exc}"]) from exc
    return parse_config(text, base_dir=str(p.parent))
