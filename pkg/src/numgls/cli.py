"""Command line driver: sweeps, comparisons and figure data as CSV (and SVG).

Examples
--------
    numgls variance-curve --out results --svg
    numgls compare --input quotes.csv --column close --out results
    numgls asymptotics --model white-noise --ladder 2,4,8

Settings are read from built-in defaults, then ``--config FILE`` (flat
``key = value`` lines, keys named like the long flags), then the flags.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asymptotics, corr, estimators
from .kriging import KrigingSystem
from .series import Series, demo_series, ingest

log = logging.getLogger("numgls")

MODELS = (corr.NEGATIVE_POWER, corr.WHITE_NOISE)


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 182
    t_start: float = 183.0
    t_end: float = 321.0
    t_step: float = 1.0
    t: float | None = None
    beta: float = corr.BETA
    j_max: float = 600.0
    sigma2: float = 1.0
    integer_j: bool = False
    model: str = corr.NEGATIVE_POWER
    ladder: tuple[int, ...] = (10, 20, 40, 80, 160)
    output_dir: Path = Path(".")
    workers: int = 1

    # not part of the numerical setup, so left out of the hash
    _UNHASHED = ("output_dir", "workers")

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.t_start > self.t_end:
            raise ValueError(f"t_start={self.t_start} exceeds t_end={self.t_end}")
        if self.t_step <= 0:
            raise ValueError("t_step must be positive")
        if self.j_max < self.n + 1:
            raise ValueError(f"j_max={self.j_max} must be >= n+1={self.n + 1}")
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")

    @property
    def t_values(self) -> list[float]:
        count = int(math.floor((self.t_end - self.t_start) / self.t_step + 1e-9)) + 1
        return [self.t_start + k * self.t_step for k in range(count)]

    @property
    def single_t(self) -> float:
        return self.t_end if self.t is None else self.t

    @property
    def j_range(self) -> tuple[float, float]:
        return (self.n + 1, self.j_max)

    def model_at(self, t: float) -> corr.CorrelationModel:
        if self.model == corr.WHITE_NOISE:
            return corr.white_noise()
        return corr.negative_power(t, self.beta)

    def digest(self) -> str:
        items = []
        for f in dataclasses.fields(self):
            if f.name not in self._UNHASHED:
                items.append(f"{f.name}={_fmt(getattr(self, f.name))}")
        return hashlib.sha256("\n".join(items).encode()).hexdigest()[:12]


# ---------------------------------------------------------------- config I/O

_CASTS = {
    "n": int,
    "t_start": float,
    "t_end": float,
    "t_step": float,
    "t": float,
    "beta": float,
    "j_max": float,
    "sigma2": float,
    "integer_j": lambda s: s if isinstance(s, bool) else str(s).strip().lower() in ("1", "true", "yes", "on"),
    "model": str,
    "ladder": lambda s: tuple(int(x) for x in str(s).replace(" ", "").split(",") if x) if not isinstance(s, tuple) else s,
    "output_dir": Path,
    "workers": int,
}

_ALIASES = {"out": "output_dir"}


def read_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    settings = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        key = _ALIASES.get(key, key)
        if key not in _CASTS:
            raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
        settings[key] = value
    return settings


def make_config(file_settings: dict | None = None, **overrides) -> ExperimentConfig:
    merged = dict(file_settings or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**{k: _CASTS[k](v) for k, v in merged.items()})


# ------------------------------------------------------------------- output


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        # repr-exact binary value rounded half-even to 12 significant digits
        return format(x, ".12g")
    if isinstance(x, (tuple, list)):
        return ",".join(_fmt(e) for e in x)
    return str(x)


def write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


# ----------------------------------------------------------------- commands


def variance_curve_rows(config: ExperimentConfig, series: Series):
    v = series.sample(config.n)
    results = estimators.sweep(
        config.n,
        v,
        config.t_values,
        config.j_range,
        family=config.model_at,
        integer_only=config.integer_j,
        workers=config.workers,
    )
    h = config.digest()
    header = [
        "t", "j_star", "statistic_variance", "variance", "residual", "bracketed", "sign_case", "error", "config_hash",
    ]
    rows = [
        (r.t, r.j_star, r.statistic_variance, config.sigma2 * r.statistic_variance, r.residual, r.bracketed,
         r.sign_case, r.error, h)
        for r in results
    ]
    return header, rows, results


def cmd_variance_curve(config: ExperimentConfig, series: Series, svg: bool = False) -> list[Path]:
    header, rows, results = variance_curve_rows(config, series)
    out = [write_csv(config.output_dir / "variance_curve.csv", header, rows)]
    if svg:
        from .plotting import variance_curve_svg

        out.append(variance_curve_svg(config.output_dir / "variance_curve.svg", results, config))
    return out


def _classic(config: ExperimentConfig, series: Series, t: float):
    lam = corr.build_matrix(config.model_at(t), config.n)
    return estimators.classic(KrigingSystem(lam), series.sample(config.n))


def compare_rows(config: ExperimentConfig, series: Series):
    _, _, results = variance_curve_rows(config, series)
    t_ref = config.t_end
    ref = _classic(config, series, t_ref)
    h = config.digest()
    header = ["kind", "t", "j_star", "estimate", "abs_diff", "statistic_variance", "bracketed", "config_hash"]
    rows = [("classic", t_ref, None, ref.estimate, 0.0, ref.statistic_variance, None, h)]
    for r in results:
        rows.append(
            ("numerical", r.t, r.j_star, r.estimate, abs(r.estimate - ref.estimate), r.statistic_variance, r.bracketed, h)
        )
    return header, rows, results, ref


def cmd_compare(config: ExperimentConfig, series: Series, svg: bool = False) -> list[Path]:
    header, rows, results, ref = compare_rows(config, series)
    out = [write_csv(config.output_dir / "compare.csv", header, rows)]
    if svg:
        from .plotting import compare_svg

        out.append(compare_svg(config.output_dir / "compare.svg", results, ref, series, config))
    return out


def cmd_classic(config: ExperimentConfig, series: Series) -> list[Path]:
    t = config.single_t
    sol = _classic(config, series, t)
    header = ["n", "t", "fxf", "xi", "estimate", "statistic_variance", "variance", "config_hash"]
    row = (config.n, t, sol.fxf, sol.xi, sol.estimate, sol.statistic_variance, config.sigma2 * sol.statistic_variance, config.digest())
    return [write_csv(config.output_dir / "classic.csv", header, [row])]


def asymptotics_rows(config: ExperimentConfig):
    rep = asymptotics.decay_study(config.model_at(config.single_t), config.ladder)
    h = config.digest()
    header = [
        "n", "fxf_inv", "xi", "mu_limit", "statistic_variance_limit",
        "prediction_variance_limit", "decreasing", "config_hash",
    ]
    return header, [(*row, rep.decreasing, h) for row in rep.rows()], rep


def cmd_asymptotics(config: ExperimentConfig) -> list[Path]:
    header, rows, _ = asymptotics_rows(config)
    return [write_csv(config.output_dir / "asymptotics.csv", header, rows)]


def cmd_scan(config: ExperimentConfig, series: Series) -> list[Path]:
    t = config.single_t
    lo, hi = config.j_range
    grid = lo + np.arange(math.floor(hi - lo) + 1)
    points = estimators.scan_residual(config.model_at(t), config.n, series.sample(config.n), grid)
    h = config.digest()
    header = ["t", "j", "residual", "estimate", "statistic_variance", "config_hash"]
    rows = [(t, p.j, p.residual, p.estimate, p.statistic_variance, h) for p in points]
    return [write_csv(config.output_dir / "scan.csv", header, rows)]


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    common.add_argument("--input", help="CSV file with the observed series (default: bundled demo series)")
    common.add_argument("--column", default=None, help="column name or 0-based index (default 0)")
    common.add_argument("--n", type=int, help="sample size (default 182)")
    common.add_argument("--t-start", type=float, help="first correlation parameter (default 183)")
    common.add_argument("--t-end", type=float, help="last correlation parameter (default 321)")
    common.add_argument("--t-step", type=float, help="parameter step (default 1)")
    common.add_argument("--t", type=float, help="parameter for single-t commands (default: t-end)")
    common.add_argument("--beta", type=float, help=f"correlation exponent (default {corr.BETA})")
    common.add_argument("--j-max", type=float, help="upper end of the j scan (default 600)")
    common.add_argument("--sigma2", type=float, help="field variance used to scale reported variances (default 1)")
    common.add_argument("--integer-j", action="store_const", const=True, help="restrict roots to integer j")
    common.add_argument("--model", choices=MODELS, help="correlation model (default negative-power)")
    common.add_argument("--ladder", help="comma separated sample sizes for 'asymptotics'")
    common.add_argument("--workers", type=int, help="threads for the t sweep (default 1)")
    common.add_argument("--out", dest="output_dir", help="output directory (default .)")
    common.add_argument("--svg", action="store_true", help="also write an SVG figure")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="numgls", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("variance-curve", parents=[common], help="estimator variance at the root j*(t) for each t")
    sub.add_parser("compare", parents=[common], help="numerical estimates versus the classic GLS estimate")
    sub.add_parser("classic", parents=[common], help="classic GLS estimate for one t")
    sub.add_parser("asymptotics", parents=[common], help="j -> infinity limits over a ladder of n")
    sub.add_parser("scan", parents=[common], help="raw constraint residual over j for one t")
    return parser


def _load_series(args) -> Series:
    if args.input is None:
        return demo_series()
    return ingest(args.input, args.column if args.column is not None else 0)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    file_settings = read_config_file(args.config) if args.config else {}
    names = [f.name for f in dataclasses.fields(ExperimentConfig)]
    try:
        config = make_config(file_settings, **{k: getattr(args, k, None) for k in names})
        if args.command == "asymptotics":
            written = cmd_asymptotics(config)
        else:
            series = _load_series(args)
            log.info("series %s: %d values", series.source, len(series))
            if args.command == "variance-curve":
                written = cmd_variance_curve(config, series, svg=args.svg)
            elif args.command == "compare":
                written = cmd_compare(config, series, svg=args.svg)
            elif args.command == "classic":
                written = cmd_classic(config, series)
            else:
                written = cmd_scan(config, series)
    except (ValueError, KeyError, ArithmeticError, OSError, np.linalg.LinAlgError) as exc:
        print(f"numgls: error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
