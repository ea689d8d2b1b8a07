"""Command-line front end: one subcommand per experiment, CSV or JSON output.

Ranges are written ``start:stop:count`` (inclusive linspace) or as a single
value, and range flags may be repeated to concatenate grids. Every output
begins with a ``#`` line recording the subcommand and its parameter grid,
followed by a header row. Rows come out in parameter order regardless of
the thread count, so identical arguments give identical bytes.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import geoment, protocols, relclassical, relquantum, thermal
from .qstate import PureState, ValidationError


class RangeError(ValueError):
    pass


def parse_range(text: str) -> list[float]:
    """``"a:b:n"`` -> n points from a to b inclusive; ``"x"`` -> [x]."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            vals = [float(parts[0])]
        elif len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise RangeError(f"range count must be >= 1 in {text!r}")
            vals = [start] if count == 1 else np.linspace(start, stop, count).tolist()
        else:
            raise RangeError(f"expected start:stop:count or a number, got {text!r}")
    except ValueError as exc:
        if isinstance(exc, RangeError):
            raise
        raise RangeError(f"invalid range {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise RangeError(f"range values must be finite in {text!r}")
    return vals


def _range_arg(text: str) -> list[float]:
    try:
        return parse_range(text)
    except RangeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        # shortest string that round-trips exactly
        s = repr(float(x))
        return s[:-2] if s.endswith(".0") else s
    return str(x)


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, its parameter grid and output options."""

    command: str
    grid: dict[str, list] = field(default_factory=dict)
    seed: int = 0
    fmt: str = "csv"
    output: str | None = None
    threads: int = 1
    options: dict = field(default_factory=dict)


def _grid_values(ns: argparse.Namespace, name: str, default: Sequence) -> list:
    vals = getattr(ns, name)
    if not vals:
        return list(default)
    return [v for chunk in vals for v in chunk]


@dataclass(frozen=True)
class Sweep:
    """A CSV-producing subcommand: parameter names, output columns and a point function."""

    params: tuple[str, ...]
    columns: tuple[str, ...]
    point: Callable[..., tuple]


def _dimer(J, beta):
    p = thermal.DimerParams(J, beta)
    return (
        thermal.dimer_partition(p),
        thermal.dimer_energy(p),
        thermal.dimer_joint_entropy(p),
        thermal.dimer_mutual_entropy(p),
    )


def _blackhole(M, dm_fraction):
    b = thermal.BlackHoleState(M)
    ds_bh, ds_rad, ratio = thermal.evaporation_step(b, dm_fraction * M)
    return thermal.bh_entropy(b), thermal.hawking_temperature(b), ds_bh, ds_rad, ratio


def _capacity(W, snr, alpha):
    return (relclassical.awng_capacity(W, snr, alpha),)


def _temperature(T, beta, theta):
    return (relclassical.moving_temperature(T, beta, theta),)


def _boost_single(ratio, xi, n_grid):
    return (relquantum.boosted_spin_entropy(ratio, xi, n_grid=int(n_grid)),)


def _boost_pair(ratio, xi, n_grid):
    return (relquantum.boosted_pair_concurrence(ratio, xi, n_grid=int(n_grid)),)


def _momentum_pair(p, xi, n_grid):
    return (
        relquantum.momentum_entangled_concurrence_simulated(p, xi, n_grid=int(n_grid)),
        relquantum.momentum_entangled_concurrence_closed_form(p, xi),
    )


SWEEPS: dict[str, Sweep] = {
    "dimer": Sweep(("J", "beta"), ("Z", "E", "S_joint_bits", "S_mutual_bits"), _dimer),
    "blackhole": Sweep(
        ("M", "dM_over_M"), ("S_BH", "T_H", "dS_BH", "dS_rad", "ratio"), _blackhole
    ),
    "capacity": Sweep(("W", "snr", "alpha"), ("capacity_bits_per_s",), _capacity),
    "temperature": Sweep(("T", "beta", "theta"), ("T_prime",), _temperature),
    "boost-single": Sweep(("ratio", "xi", "n_grid"), ("S_spin_bits",), _boost_single),
    "boost-pair": Sweep(("ratio", "xi", "n_grid"), ("concurrence",), _boost_pair),
    "fig2-concurrence": Sweep(("p", "xi", "n_grid"), ("C_simulated", "C_closed_form"), _momentum_pair),
}

HELP = {
    "dimer": "Thermal Heisenberg dimer: partition function, energy, joint and mutual entropy versus temperature.",
    "blackhole": "Black-hole evaporation step: entropy lost by the hole against entropy carried by radiation.",
    "capacity": "Gaussian channel capacity W log2(1 + alpha SNR) with Doppler factor alpha.",
    "temperature": "Apparent blackbody temperature for a detector moving at beta, seen at angle theta.",
    "maxwell-mi": "Mutual information between v_x and v_y of a bounded planar velocity ensemble under a boost.",
    "boost-single": "Spin entropy of a boosted Gaussian spin-1/2 packet versus rapidity and width sigma/m.",
    "boost-pair": "Spin concurrence of a boosted Bell pair with Gaussian momenta versus rapidity.",
    "fig2-concurrence": "Concurrence of the boosted momentum-entangled pair, simulated and closed form.",
    "teleport": "Teleportation of a qubit given by Bloch angles; emits the JSON transcript.",
    "superdense": "Superdense coding of 2-bit messages; emits the JSON transcripts.",
    "geoment": "Geometric entropy and Renyi-2/3 entropies of a region of a harmonic chain.",
}


def _geoment(N, size, mu, coupling, boundary):
    c = geoment.HarmonicChain(int(N), coupling, mu, boundary)
    r = geoment.RegionSplit(range(int(size)))
    return (
        geoment.geometric_entropy(c, r),
        geoment.renyi_entropy(c, r, 2),
        geoment.renyi_entropy(c, r, 3),
    )


def _maxwell_point(beta, n, seed, k):
    e = relclassical.sample_bounded_planar_ensemble(int(n), int(seed))
    if beta != 0:
        e = relclassical.boost_ensemble(e, beta)
    est = relclassical.planar_mutual_information(e, k=int(k))
    return est.value, est.stderr, est.histogram_value, est.histogram_stderr


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rqit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, **ranges):
        p = sub.add_parser(name, help=HELP[name], description=HELP[name])
        for flag, (default, text) in ranges.items():
            p.add_argument(
                f"--{flag.replace('_', '-')}",
                dest=flag,
                type=_range_arg,
                action="append",
                metavar="RANGE",
                help=f"{text} (default {default})",
            )
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker threads (default: RQIT_THREADS or the CPU count)",
        )
        return p

    add("dimer", J=("1", "exchange coupling"), beta=("0:10:11", "inverse temperature"))
    add("blackhole", M=("1", "black-hole mass"), dM_over_M=("1e-6", "mass shed as a fraction of M"))
    add("capacity", W=("1", "bandwidth"), snr=("1", "signal-to-noise ratio"), alpha=("1", "Doppler factor"))
    add("temperature", T=("1", "rest-frame temperature"), beta=("0.6", "detector speed"), theta=("0", "angle"))
    add("maxwell-mi", beta=("0", "boost speed along x"), n=("1000000", "ensemble size"), k=("4", "kNN order"))
    add("boost-single", ratio=("1", "packet width sigma/m"), xi=("0:4:5", "rapidity"), n_grid=("33", "grid points per axis"))
    add("boost-pair", ratio=("1", "packet width sigma/m"), xi=("0:4:5", "rapidity"), n_grid=("33", "grid points per axis"))
    add("fig2-concurrence", p=("1", "momentum p/m"), xi=("0:3:7", "rapidity"), n_grid=("15", "grid points per axis"))
    t = add("teleport", theta=("0", "Bloch polar angle"), phi=("0", "Bloch azimuth"))
    t.add_argument("--pair", choices=[k.value for k in protocols.BellKind], default="psi-")
    s = add("superdense")
    s.add_argument("--bits", action="append", choices=sorted(protocols._ENCODE), help="message (repeatable; default all four)")
    s.add_argument("--pair", choices=[k.value for k in protocols.BellKind], default="psi-")
    g = add(
        "geoment",
        N=("16 32 64", "chain length"),
        mu=("1e-3", "on-site mass"),
        coupling=("1", "nearest-neighbour coupling"),
    )
    g.add_argument("--fraction", type=float, default=0.5, help="region size as a fraction of N (default 0.5)")
    g.add_argument("--boundary", choices=("open", "periodic"), default="open")
    return ap


DEFAULTS = {
    "dimer": {"J": [1.0], "beta": parse_range("0:10:11")},
    "blackhole": {"M": [1.0], "dM_over_M": [1e-6]},
    "capacity": {"W": [1.0], "snr": [1.0], "alpha": [1.0]},
    "temperature": {"T": [1.0], "beta": [0.6], "theta": [0.0]},
    "maxwell-mi": {"beta": [0.0], "n": [1e6], "k": [4.0]},
    "boost-single": {"ratio": [1.0], "xi": parse_range("0:4:5"), "n_grid": [33.0]},
    "boost-pair": {"ratio": [1.0], "xi": parse_range("0:4:5"), "n_grid": [33.0]},
    "fig2-concurrence": {"p": [1.0], "xi": parse_range("0:3:7"), "n_grid": [15.0]},
    "teleport": {"theta": [0.0], "phi": [0.0]},
    "superdense": {},
    "geoment": {"N": [16.0, 32.0, 64.0], "mu": [1e-3], "coupling": [1.0]},
}


def _threads(ns) -> int:
    if ns.threads is not None:
        return max(1, ns.threads)
    env = os.environ.get("RQIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    grid = {k: _grid_values(ns, k, v) for k, v in DEFAULTS[ns.command].items()}
    opts = {}
    for k in ("fraction", "boundary", "pair", "bits"):
        if hasattr(ns, k):
            opts[k] = getattr(ns, k)
    return RunConfig(ns.command, grid, ns.seed, ns.format, ns.output, _threads(ns), opts)


def _preamble(cfg: RunConfig) -> str:
    parts = [cfg.command]
    for k, vals in cfg.grid.items():
        parts.append(f"{k}=[{' '.join(fmt(v) for v in vals)}]")
    for k, v in cfg.options.items():
        if v is not None:
            parts.append(f"{k}={v if not isinstance(v, list) else ' '.join(v)}")
    parts.append(f"seed={cfg.seed}")
    return "# rqit " + " ".join(parts)


def _run_points(fn, points, threads):
    if threads <= 1 or len(points) <= 1:
        return [fn(*p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda p: fn(*p), points))


def _table(cfg: RunConfig) -> tuple[list[str], list[list]]:
    if cfg.command == "maxwell-mi":
        params = ("beta", "n", "k")
        columns = ("mi_nats", "stderr_nats", "hist_mi_nats", "hist_stderr_nats")
        points = list(itertools.product(*(cfg.grid[p] for p in params)))
        fn = lambda beta, n, k: _maxwell_point(beta, n, cfg.seed, k)
        header = ["beta", "n", "k", "seed", *columns]
        rows = _run_points(fn, points, cfg.threads)
        return header, [[b, int(n), int(k), cfg.seed, *r] for (b, n, k), r in zip(points, rows)]
    if cfg.command == "geoment":
        frac, boundary = cfg.options["fraction"], cfg.options["boundary"]
        if not 0 < frac < 1:
            raise RangeError(f"--fraction must lie in (0, 1), got {frac}")
        points = []
        for N, mu, cp in itertools.product(cfg.grid["N"], cfg.grid["mu"], cfg.grid["coupling"]):
            if N != int(N):
                raise RangeError(f"chain length must be an integer, got {N}")
            size = min(int(N) - 1, max(1, round(frac * N)))
            points.append((int(N), size, mu, cp, boundary))
        rows = _run_points(_geoment, points, cfg.threads)
        header = ["N", "region_size", "mu", "coupling", "S_nats", "renyi2_nats", "renyi3_nats"]
        return header, [[N, size, mu, cp, *r] for (N, size, mu, cp, _), r in zip(points, rows)]
    sw = SWEEPS[cfg.command]
    points = list(itertools.product(*(cfg.grid[p] for p in sw.params)))
    rows = _run_points(sw.point, points, cfg.threads)
    return [*sw.params, *sw.columns], [[*p, *r] for p, r in zip(points, rows)]


def _check_finite(header, rows) -> None:
    for row in rows:
        for name, v in zip(header, row):
            if isinstance(v, float) and not math.isfinite(v):
                raise FloatingPointError(f"non-finite {name} at {dict(zip(header, row))}")


def _bloch(theta, phi) -> PureState:
    return PureState(np.array([math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)]))


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def render(cfg: RunConfig) -> str:
    """Produce the complete output text for ``cfg``."""
    if cfg.command == "teleport":
        runs = []
        for th, ph in itertools.product(cfg.grid["theta"], cfg.grid["phi"]):
            tr = protocols.teleport(_bloch(th, ph), seed=cfg.seed, pair=cfg.options["pair"])
            runs.append({"theta": th, "phi": ph, "transcript": tr.to_dict()})
        return _json_dump({"command": _preamble(cfg)[2:], "runs": runs})
    if cfg.command == "superdense":
        msgs = cfg.options.get("bits") or ["00", "01", "10", "11"]
        runs = [{"bits": b, "transcript": protocols.superdense(b, cfg.options["pair"]).to_dict()} for b in msgs]
        return _json_dump({"command": _preamble(cfg)[2:], "runs": runs})
    header, rows = _table(cfg)
    _check_finite(header, rows)
    if cfg.fmt == "json":
        return _json_dump({"command": _preamble(cfg)[2:], "columns": header, "rows": rows})
    lines = [_preamble(cfg), ",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> int:
    """Render ``cfg`` and write it out; returns the process exit status."""
    try:
        text = render(cfg)
    except RangeError as exc:
        print(f"rqit {cfg.command}: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, FloatingPointError, np.linalg.LinAlgError, OverflowError) as exc:
        print(f"rqit {cfg.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
