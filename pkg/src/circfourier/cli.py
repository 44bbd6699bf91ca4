"""Experiment command line: deterministic CSV artifacts from the library.

Commands: sample, convergence, refinement, cost.  Every output is a pure
function of the config (flat key=value file plus flag overrides); rows are
headerless comma-separated values, with manifests in '#' comment lines.
Exit codes: 0 success, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .batch import SampleBatch
from .kernels import BSplineKernel, compound_pdf, grid_ancestral_sample
from .ancestor import build_ancestor
from .metrics import (
    empirical_w1,
    inverse_transform_sample,
    kl_monte_carlo,
    rejection_sample,
)
from .model import EvalCounter, load_density, random_density
from .refine import LangevinConfig, mala_refine, ula_refine

METHODS = ("daas", "daas+ula", "daas+mala", "rejection", "inverse")


class ConfigError(ValueError):
    pass


class NumericalError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    seed: int = 0
    n: int = 10          # frequency terms
    k: int = 50          # grid points
    d: int = 1           # kernel degree
    s: int = 100000      # samples
    t: int = 0           # refinement steps
    eps_ula: float = 1e-5
    eps_mala: float = 8e-5
    schedule: str = "constant"
    method: str = "daas"
    trials: int = 1
    k_sweep: tuple = ()
    t_sweep: tuple = (0, 1, 5, 20, 100, 500)
    degrees: tuple = (1,)
    tol: float = 1e-10
    model_file: str = ""

    def validate(self, require_k: bool = True) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.n < 0:
            raise ConfigError("n must be >= 0")
        if require_k and self.k < 2 * self.n + 1:
            raise ConfigError(f"k={self.k} below minimum 2n+1={2 * self.n + 1}")
        if self.d not in (0, 1, 2):
            raise ConfigError("d must be 0, 1 or 2")
        if self.s < 1:
            raise ConfigError("s must be >= 1")
        if self.t < 0:
            raise ConfigError("t must be >= 0")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.schedule not in ("constant", "decay"):
            raise ConfigError("schedule must be 'constant' or 'decay'")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.k_sweep and any(
            b <= a for a, b in zip(self.k_sweep, self.k_sweep[1:])
        ):
            raise ConfigError("k_sweep must be strictly increasing")
        if any(d not in (0, 1, 2) for d in self.degrees):
            raise ConfigError("degrees entries must be 0, 1 or 2")


def _parse_value(name: str, raw: str, current):
    if isinstance(current, tuple):
        return tuple(int(v) for v in raw.split(",") if v != "")
    if isinstance(current, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def load_config(path: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    names = {f.name for f in fields(ExperimentConfig)}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, raw = (s.strip() for s in line.split("=", 1))
            if key not in names:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                cfg = replace(
                    cfg, **{key: _parse_value(key, raw, getattr(cfg, key))}
                )
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return cfg


def _get_model(cfg: ExperimentConfig, rng):
    if cfg.model_file:
        return load_density(cfg.model_file)
    return random_density(cfg.n, rng)


def run_sample(cfg: ExperimentConfig) -> SampleBatch:
    cfg.validate()
    model_rng, draw_rng = np.random.default_rng(cfg.seed).spawn(2)
    model = _get_model(cfg, model_rng)
    counter = EvalCounter()
    if cfg.method == "rejection":
        batch = rejection_sample(model, cfg.s, draw_rng, counter)
    elif cfg.method == "inverse":
        batch = inverse_transform_sample(model, cfg.s, draw_rng, tol=cfg.tol)
    else:
        kernel = BSplineKernel(cfg.d)
        batch = grid_ancestral_sample(
            model, cfg.k, kernel, cfg.s, draw_rng, counter
        )
        if cfg.method != "daas":
            step = cfg.eps_ula if cfg.method == "daas+ula" else cfg.eps_mala
            lcfg = LangevinConfig(
                step_size=step, schedule=cfg.schedule, steps=cfg.t
            )
            refine = ula_refine if cfg.method == "daas+ula" else mala_refine
            batch = refine(model, batch, lcfg, draw_rng, counter)
    batch.seed = cfg.seed
    batch.meta["method"] = cfg.method
    if not np.all(np.isfinite(batch.samples)):
        raise NumericalError("non-finite samples produced")
    return batch


def run_convergence(cfg: ExperimentConfig) -> list[tuple[int, int, int, float]]:
    """Rows (K, trial, D, kl): Monte Carlo KL of the grid approximation."""
    cfg = replace(cfg, k_sweep=cfg.k_sweep or (128, 256, 512, 1024, 2048))
    cfg.validate(require_k=False)
    if min(cfg.k_sweep) < 2 * cfg.n + 1:
        raise ConfigError("k_sweep entries must satisfy K >= 2n+1")
    rows = []
    for trial in range(cfg.trials):
        trng = np.random.default_rng(cfg.seed + trial)
        model = random_density(cfg.n, trng)
        ref = rejection_sample(model, cfg.s, trng)
        p_vals = model.pdf(ref.samples)
        for k_grid in cfg.k_sweep:
            pmf = build_ancestor(model, k_grid)
            for deg in cfg.degrees:
                kernel = BSplineKernel(deg)
                rep = kl_monte_carlo(
                    ref, lambda x: p_vals, lambda x: compound_pdf(pmf, kernel, x)
                )
                if not np.isfinite(rep.estimate):
                    raise NumericalError("non-finite KL estimate")
                rows.append((k_grid, trial, deg, rep.estimate))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows


def run_refinement(cfg: ExperimentConfig) -> list[tuple[int, str, float]]:
    """Rows (T, method, W1) against a rejection-sampled reference.

    Chains advance incrementally through the sorted T sweep, so the row at
    each T is the state of one continuous chain after T steps.
    """
    cfg.validate()
    t_sweep = sorted(set(cfg.t_sweep) | {0})
    rng = np.random.default_rng(cfg.seed)
    model_rng, ref_rng, daas_rng, ula_rng, mala_rng = rng.spawn(5)
    model = _get_model(cfg, model_rng)
    ref = rejection_sample(model, cfg.s, ref_rng).samples
    base = grid_ancestral_sample(
        model, cfg.k, BSplineKernel(cfg.d), cfg.s, daas_rng
    )
    w1_zero = empirical_w1(base.samples, ref).estimate
    rows = [(0, "daas", w1_zero)]
    chains = [
        ("ula", ula_refine, cfg.eps_ula, ula_rng),
        ("mala", mala_refine, cfg.eps_mala, mala_rng),
    ]
    for name, refine, eps, crng in chains:
        batch = base
        done = 0
        for t_steps in t_sweep:
            if t_steps > done:
                lcfg = LangevinConfig(
                    step_size=eps, schedule=cfg.schedule, steps=t_steps - done
                )
                batch = refine(model, batch, lcfg, crng)
                done = t_steps
            if t_steps == 0:
                continue
            w1 = empirical_w1(batch.samples, ref).estimate
            if not np.isfinite(w1):
                raise NumericalError("non-finite W1 estimate")
            rows.append((t_steps, name, w1))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def run_cost(cfg: ExperimentConfig) -> list[tuple[str, int]]:
    """Rows (method, model evaluations) for drawing S samples.

    Grid methods are closed-form in S, K, T; the rejection row is measured
    by actually running the sampler.
    """
    cfg.validate()
    model_rng, draw_rng = np.random.default_rng(cfg.seed).spawn(2)
    model = _get_model(cfg, model_rng)
    counter = EvalCounter()
    rejection_sample(model, cfg.s, draw_rng, counter)
    return [
        ("rejection", counter.total_evals),
        ("ula", 2 * cfg.s * cfg.t + cfg.k),
        ("mala", 4 * cfg.s * cfg.t + cfg.k),
        ("triangular", cfg.k),
    ]


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default="", help="key=value config file")
    p.add_argument("--output", default="", help="output path (default stdout)")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, help="frequency terms")
    p.add_argument("--k", type=int, help="grid points")
    p.add_argument("--d", type=int, help="kernel degree")
    p.add_argument("--s", type=int, help="number of samples")
    p.add_argument("--t", type=int, help="refinement steps")
    p.add_argument("--eps-ula", dest="eps_ula", type=float)
    p.add_argument("--eps-mala", dest="eps_mala", type=float)
    p.add_argument("--schedule", choices=("constant", "decay"))
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--trials", type=int)
    p.add_argument("--k-sweep", dest="k_sweep", help="comma-separated K values")
    p.add_argument("--t-sweep", dest="t_sweep", help="comma-separated T values")
    p.add_argument("--degrees", help="comma-separated kernel degrees")
    p.add_argument("--tol", type=float)
    p.add_argument("--model-file", dest="model_file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circfourier",
        description="Circular Fourier density sampling experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("sample", "draw samples, one per output line"),
        ("convergence", "KL of the grid approximation over a K sweep"),
        ("refinement", "W1 of Langevin-refined samples over a T sweep"),
        ("cost", "model-evaluation totals per method"),
    ):
        _add_common_flags(sub.add_parser(name, help=doc))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    for f in fields(ExperimentConfig):
        val = getattr(args, f.name, None)
        if val is None:
            continue
        if isinstance(getattr(cfg, f.name), tuple) and isinstance(val, str):
            val = _parse_value(f.name, val, getattr(cfg, f.name))
        cfg = replace(cfg, **{f.name: val})
    return cfg


def _emit(lines: list[str], output: str) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_command(command: str, cfg: ExperimentConfig, output: str) -> None:
    if command == "sample":
        batch = run_sample(cfg)
        lines = batch.manifest_lines() + [f"{x:.17g}" for x in batch.samples]
    elif command == "convergence":
        rows = run_convergence(cfg)
        lines = [f"{k},{tr},{d},{kl:.17g}" for k, tr, d, kl in rows]
    elif command == "refinement":
        rows = run_refinement(cfg)
        lines = [f"{t},{m},{w1:.17g}" for t, m, w1 in rows]
    else:
        rows = run_cost(cfg)
        lines = [f"{m},{e}" for m, e in rows]
    _emit(lines, output)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        run_command(args.command, cfg, args.output)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
