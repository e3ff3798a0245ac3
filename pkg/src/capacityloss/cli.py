"""Command-line front end.

    capacityloss loss --region square:1 --power uniform
    capacityloss lambda --region disk:1 --power 0.25
    capacityloss figure1 --output fig1.csv
    capacityloss qam-mi --m 2 --snr-db 20
    capacityloss discretize --region square:1 --n 32

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bounds import EPS_GRID_POINTS, EPS_HI_FACTOR, EPS_LO_FACTOR, EPS_RTOL, loss_lower_bound
from .constellations import discretize_fstar, qam
from .errors import CapacityLossError, InvalidRegion, NoBracket, QuadratureFailure
from .maxent import capacity_loss, solve_lambda
from .mi import GhConfig, gauss_hermite_mi, gaussian_capacity, monte_carlo_mi, sigma_from_db
from .noise import circular_gaussian
from .regions import Disk, Polygon, Region, Square, region_from_dict

DEFAULT_FIGURE_REGION = Square(math.sqrt(1.5))  # uniform power 1
HEAVY_ORDER = 22


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    region: Region
    power: Optional[float] = None  # None means the uniform power of the region
    snr_grid: list = field(default_factory=lambda: [float(x) for x in range(0, 81, 2)])
    qam_orders: list = field(default_factory=lambda: [10, 16])
    gh_nodes: int = 20
    output: Optional[str] = None
    seed: int = 0
    tail: str = "exact"
    jobs: int = 1

    def __post_init__(self):
        if not self.snr_grid:
            raise ConfigError("snr grid is empty")
        if any(b <= a for a, b in zip(self.snr_grid, self.snr_grid[1:])):
            raise ConfigError("snr grid must be strictly increasing")
        if any(m % 2 or not 2 <= m <= 24 for m in self.qam_orders):
            raise ConfigError("qam orders must be even and in [2, 24]")
        if self.gh_nodes < 2 or self.jobs < 1:
            raise ConfigError("gh_nodes must be >= 2 and jobs >= 1")
        if self.power is not None and not self.power > 0:
            raise ConfigError("power must be positive")

    @property
    def P(self) -> float:
        return self.region.uniform_power() if self.power is None else self.power


def parse_region(text: str) -> Region:
    """``square:A``, ``disk:R``, ``polygon:x,y;x,y;...``, inline JSON or a JSON file."""
    try:
        if text.lstrip().startswith("{"):
            return region_from_dict(json.loads(text))
        if ":" in text:
            kind, _, arg = text.partition(":")
            kind = kind.strip().lower()
            if kind == "square":
                return Square(float(arg))
            if kind == "disk":
                return Disk(float(arg))
            if kind == "polygon":
                pts = [p.split(",") for p in arg.split(";") if p.strip()]
                return Polygon(tuple(complex(float(x), float(y)) for x, y in pts))
        path = Path(text)
        if path.is_file():
            return region_from_dict(json.loads(path.read_text()))
    except (ValueError, InvalidRegion, json.JSONDecodeError) as exc:
        raise ConfigError(f"bad region {text!r}: {exc}") from None
    raise ConfigError(f"cannot parse region {text!r}")


def parse_power(text: str) -> Optional[float]:
    if text.strip().lower() in ("uniform", "pu"):
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"bad power {text!r}") from None


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    return format(v, ".15g")


def _emit(text: str, output: Optional[str]):
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_loss(cfg: RunConfig, as_json: bool = False) -> str:
    sol = capacity_loss(cfg.region, cfg.P)
    report = {
        "region": cfg.region.to_dict(),
        "power": cfg.P,
        "uniform_power": sol.uniform_power,
        "lambda": sol.lam,
        "z0": sol.z0,
        "entropy_nats": sol.entropy,
        "loss_nats": sol.loss,
        "loss_bits": sol.loss_bits,
        "loss_db": sol.loss_db,
    }
    if as_json:
        return json.dumps(report, indent=2) + "\n"
    return "".join(f"{k:14s} {json.dumps(v) if isinstance(v, dict) else _fmt(v)}\n" for k, v in report.items())


def cmd_lambda(cfg: RunConfig, as_json: bool = False) -> str:
    P = cfg.P
    lam = solve_lambda(cfg.region, P)
    tilted = cfg.region.moments(lam).power
    report = {"region": cfg.region.to_dict(), "power": P, "lambda": lam,
              "tilted_power": tilted, "relative_residual": abs(tilted - P) / P}
    if as_json:
        return json.dumps(report, indent=2) + "\n"
    return "".join(f"{k:18s} {json.dumps(v) if isinstance(v, dict) else _fmt(v)}\n" for k, v in report.items())


def _guard(fn, what):
    try:
        return fn()
    except (QuadratureFailure, NoBracket, FloatingPointError) as exc:
        warnings.warn(f"{what} failed: {exc}")
        return None


def cmd_figure1(cfg: RunConfig) -> str:
    if not isinstance(cfg.region, Square):
        raise ConfigError("figure1 needs a square region")
    P = cfg.P
    noise = circular_gaussian()
    gh = GhConfig(cfg.gh_nodes)
    asym = capacity_loss(cfg.region, P).loss
    sigmas = [sigma_from_db(db) for db in cfg.snr_grid]

    def bound_at(s):
        pt = _guard(lambda: loss_lower_bound(cfg.region, P, s, noise, tail=cfg.tail), f"bound at sigma={s:g}")
        return None if pt is None else pt.loss_lower

    tasks = [(None, s) for s in sigmas] + [(m, s) for m in cfg.qam_orders for s in sigmas]
    consts = {m: qam(m, P) for m in cfg.qam_orders}

    def run(task):
        m, s = task
        if m is None:
            return bound_at(s)
        rate = _guard(lambda: gauss_hermite_mi(consts[m], s, gh), f"{2**m}-QAM at sigma={s:g}")
        return None if rate is None else gaussian_capacity(P, s) - rate

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]

    n = len(sigmas)
    cols = ["inv_sigma2_db", "loss_lower_bound_nats", "asymptotic_L_nats"]
    cols += [f"qam_loss_m{m}_nats" for m in cfg.qam_orders]
    lines = [
        f"# capacityloss {__version__} figure1",
        f"# region={json.dumps(cfg.region.to_dict())}",
        f"# power={_fmt(P)}",
        "# noise=CircularGaussian",
        f"# gh_nodes={cfg.gh_nodes}",
        f"# eps_search=log-grid {EPS_GRID_POINTS} points on [{EPS_LO_FACTOR:g}*sigma, {EPS_HI_FACTOR:g}*diam] "
        f"+ golden section rtol {EPS_RTOL:g}",
        f"# tail={cfg.tail}",
        f"# seed={cfg.seed}",
        ",".join(cols),
    ]
    for i, db in enumerate(cfg.snr_grid):
        row = [db, results[i], asym] + [results[n * (k + 1) + i] for k in range(len(cfg.qam_orders))]
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cmd_qam_mi(m: int, power: float, snr_db: list, gh_nodes: int, mc_samples: int, seed: int,
               as_json: bool = False) -> str:
    c = qam(m, power)
    gh = GhConfig(gh_nodes)
    noise = circular_gaussian()
    rows = []
    for db in snr_db:
        s = sigma_from_db(db)
        row = {"inv_sigma2_db": db, "gh_mi_nats": gauss_hermite_mi(c, s, gh),
               "gaussian_capacity_nats": gaussian_capacity(power, s)}
        if mc_samples:
            est, se = monte_carlo_mi(c, s, noise, mc_samples, seed)
            row["mc_mi_nats"], row["mc_stderr_nats"] = est, se
        rows.append(row)
    if as_json:
        return json.dumps({"m": m, "power": power, "gh_nodes": gh_nodes, "points": rows}, indent=2) + "\n"
    head = list(rows[0])
    out = [f"# m={m} power={_fmt(power)} gh_nodes={gh_nodes} mc_samples={mc_samples} seed={seed}",
           ",".join(head)]
    out += [",".join(_fmt(r[k]) for k in head) for r in rows]
    return "\n".join(out) + "\n"


def cmd_discretize(cfg: RunConfig, n: int) -> str:
    sol = capacity_loss(cfg.region, cfg.P)
    return discretize_fstar(cfg.region, sol, n).to_csv()


def _snr_grid(args) -> list:
    if args.snr_db:
        return [float(x) for x in args.snr_db]
    grid = np.arange(args.snr_start, args.snr_stop + 0.5 * args.snr_step, args.snr_step)
    return [float(round(x, 10)) for x in grid]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="capacityloss", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def region_args(sp, default=None):
        sp.add_argument("--region", default=default, required=default is None,
                        help="square:A | disk:R | polygon:x,y;x,y;... | JSON text | JSON file")
        sp.add_argument("--power", default="uniform", help="average power P or 'uniform' for P_U")

    sp = sub.add_parser("loss", help="asymptotic capacity loss")
    region_args(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("lambda", help="solve for the power tilt")
    region_args(sp)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("figure1", help="CSV of the loss lower bound and QAM losses versus SNR")
    region_args(sp, default="square:" + repr(DEFAULT_FIGURE_REGION.half_side))
    sp.add_argument("--snr-start", type=float, default=0.0)
    sp.add_argument("--snr-stop", type=float, default=80.0)
    sp.add_argument("--snr-step", type=float, default=2.0)
    sp.add_argument("--snr-db", type=float, nargs="+", help="explicit 1/sigma^2 grid in dB")
    sp.add_argument("--qam", type=int, nargs="*", default=None, help="even QAM orders m (default 10 16)")
    sp.add_argument("--heavy", action="store_true", help="also run 2^22-QAM (slow)")
    sp.add_argument("--gh-nodes", type=int, default=20)
    sp.add_argument("--tail", choices=["exact", "chebyshev"], default="exact")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", "-o", default=None)

    sp = sub.add_parser("qam-mi", help="mutual information of square QAM")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--power", type=float, default=1.0)
    sp.add_argument("--snr-db", type=float, nargs="+", required=True)
    sp.add_argument("--gh-nodes", type=int, default=20)
    sp.add_argument("--mc-samples", type=int, default=1_000_000, help="0 disables the Monte Carlo check")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("discretize", help="step-function discretisation of the max-entropy input")
    region_args(sp)
    sp.add_argument("--n", type=int, required=True, help="cells per axis")
    sp.add_argument("--output", "-o", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    stage = "config"
    try:
        if args.command == "qam-mi":
            if args.m % 2 or not 2 <= args.m <= 24:
                raise ConfigError("--m must be even and in [2, 24]")
            if not args.power > 0:
                raise ConfigError("--power must be positive")
            stage = "qam-mi"
            _emit(cmd_qam_mi(args.m, args.power, args.snr_db, args.gh_nodes, args.mc_samples,
                             args.seed, args.json), None)
            return 0
        region = parse_region(args.region)
        power = parse_power(args.power)
        if args.command == "figure1":
            orders = [10, 16] if args.qam is None else list(args.qam)
            if HEAVY_ORDER in orders and not args.heavy:
                raise ConfigError(f"m={HEAVY_ORDER} needs --heavy")
            if args.heavy:
                if HEAVY_ORDER not in orders:
                    orders.append(HEAVY_ORDER)
                warnings.warn(f"2^{HEAVY_ORDER}-QAM requested; expect minutes of runtime")
            cfg = RunConfig(region, power, _snr_grid(args), orders, args.gh_nodes,
                            args.output, args.seed, args.tail, args.jobs)
            stage = "figure1"
            _emit(cmd_figure1(cfg), cfg.output)
            return 0
        cfg = RunConfig(region, power)
        stage = args.command
        if args.command == "loss":
            _emit(cmd_loss(cfg, args.json), None)
        elif args.command == "lambda":
            _emit(cmd_lambda(cfg, args.json), None)
        elif args.command == "discretize":
            if args.n < 2:
                raise ConfigError("--n must be >= 2")
            _emit(cmd_discretize(cfg, args.n), args.output)
        return 0
    except ConfigError as exc:
        print(f"capacityloss: error [{stage}]: {exc}", file=sys.stderr)
        return 2
    except (CapacityLossError, FloatingPointError) as exc:
        print(f"capacityloss: error [{stage}]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if stage == "config" else 3


if __name__ == "__main__":
    sys.exit(main())
