"""End-to-end experiment harness: generate data, learn graphs, select
sampling sets, reconstruct, and tabulate average MSE per cell.

A cell is one (method, budget, sigma, seed) combination.  Within a seed all
methods share the same training draws, learned models, and noisy test
signals, so comparisons are paired; the random selector also reuses the
same subset for the L and L+Q reconstruction variants.  Results are fully
deterministic given the configuration (wall-clock timings are reported
separately from the deterministic MSE table).
"""

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .errors import ShapeMismatchError, ValidationError
from .graphlearn import learn_cgl, learn_ddgl
from .reconstruct import gamma_from_mu
from .rng import derive_seed
from .sampler import (
    greedy_doptimal,
    random_select_bernoulli,
    random_select_fixed,
    vis_select,
    visr_select,
)
from .synthdata import (
    add_noise,
    empirical_covariance,
    generate_layout,
    gp_covariance,
    sample_gaussian_signals,
)

__all__ = [
    "ExperimentConfig",
    "CellResult",
    "ExperimentResult",
    "average_mse",
    "overlap_report",
    "run_experiment",
    "write_results_csv",
    "write_timings_csv",
    "write_summary_csv",
    "write_series_csvs",
    "write_svg_charts",
]

# method tag -> (selector family, reconstruct with importance?)
_METHODS = {
    "greedy": ("greedy", True),
    "greedy-cgl": ("greedy", False),
    "vis": ("vis", True),
    "visr": ("visr", True),
    "random": ("random", True),
    "random-cgl": ("random", False),
    "bernoulli": ("bernoulli", True),
    "bernoulli-cgl": ("bernoulli", False),
}

# sub-seed stream ids (mixed with the cell seed via derive_seed)
_TRAIN, _TEST, _NOISE, _SUBSET, _BERNOULLI = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameterization of a benchmark run."""

    n: int = 100
    r: float = 0.02
    variance: float = 10.0
    train_count: int = 1000
    test_count: int = 100
    budgets: tuple[int, ...] = (5, 10, 15, 20, 30, 40, 50)
    sigma_levels: tuple[float, ...] = (0.1, 0.5, 1.0)
    mu: float = 0.01
    methods: tuple[str, ...] = ("greedy", "vis", "visr", "random", "random-cgl")
    seeds: tuple[int, ...] = tuple(range(10))
    layout_seed: int = 12345

    def __post_init__(self):
        object.__setattr__(self, "budgets", tuple(int(b) for b in self.budgets))
        object.__setattr__(self, "sigma_levels", tuple(float(s) for s in self.sigma_levels))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if min(self.n, self.train_count, self.test_count) < 1 or self.n < 2:
            raise ValidationError("counts must be >= 1 and n >= 2")
        if not self.budgets or any(not 1 <= b <= self.n for b in self.budgets):
            raise ValidationError("budgets must be a nonempty subset of [1, n]")
        if not self.sigma_levels or any(s < 0 for s in self.sigma_levels):
            raise ValidationError("sigma levels must be >= 0")
        if self.mu <= 0:
            raise ValidationError("mu must be > 0")
        if not self.seeds:
            raise ValidationError("at least one seed is required")
        unknown = [m for m in self.methods if m not in _METHODS]
        if unknown:
            raise ValidationError(f"unknown methods: {unknown} (known: {sorted(_METHODS)})")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(payload) - known
        if extra:
            raise ValidationError(f"unknown config keys: {sorted(extra)}")
        return cls(**payload)

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()


@dataclass(frozen=True)
class CellResult:
    method: str
    budget: int
    sigma: float
    seed: int
    mse: float
    wall_time: float

    def key(self):
        return (self.method, self.budget, self.sigma, self.seed)


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[CellResult, ...]
    metadata: dict = field(default_factory=dict)


def average_mse(reconstructed, originals) -> float:
    """Mean over signals of the per-coordinate mean squared error."""
    rec = [np.asarray(v, dtype=float).ravel() for v in reconstructed]
    orig = [np.asarray(v, dtype=float).ravel() for v in originals]
    if len(rec) != len(orig) or not rec:
        raise ShapeMismatchError("reconstructed/original counts differ or are empty")
    if any(a.size != b.size for a, b in zip(rec, orig)):
        raise ShapeMismatchError("reconstructed/original lengths differ")
    return float(np.mean([np.mean((a - b) ** 2) for a, b in zip(rec, orig)]))


def overlap_report(a, b) -> tuple[int, float]:
    """Intersection size and Jaccard index of two sampling sets."""
    sa = set(int(i) for i in a.indices)
    sb = set(int(i) for i in b.indices)
    inter = len(sa & sb)
    union = len(sa | sb)
    return inter, (inter / union if union else 1.0)


def _select(family, method_uses_q, cfg, seed, budget, cgl_model, ddgl_model):
    gamma = gamma_from_mu(cfg.mu)
    if family == "greedy":
        model = ddgl_model if method_uses_q else cgl_model
        return greedy_doptimal(model.operator(method_uses_q), budget, gamma)
    if family == "vis":
        return vis_select(ddgl_model, budget)
    if family == "visr":
        return visr_select(ddgl_model, budget)
    if family == "random":
        # same subset for every method variant at this (seed, budget): paired
        return random_select_fixed(cfg.n, budget, derive_seed(seed, _SUBSET, budget))
    if family == "bernoulli":
        return random_select_bernoulli(cfg.n, 1.0 / cfg.n, derive_seed(seed, _BERNOULLI))
    raise ValidationError(f"unknown selector family {family}")


def _batch_reconstruct(operator, indices, mu, noisy_signals):
    b = mu * operator
    b[indices, indices] += 1.0
    from ._linalg import cho_factor_pd, chol_solve

    factor = cho_factor_pd(b)
    rhs = np.zeros((operator.shape[0], noisy_signals.shape[0]))
    rhs[indices, :] = noisy_signals[:, indices].T
    return chol_solve(factor, rhs)


def _run_seed(cfg: ExperimentConfig, cov: np.ndarray, seed: int) -> list[CellResult]:
    train = sample_gaussian_signals(cov, cfg.train_count, derive_seed(seed, _TRAIN))
    semp = empirical_covariance(train)
    families = {m: _METHODS[m] for m in cfg.methods}
    needs_q = any(uses_q or fam in ("vis", "visr") for fam, uses_q in families.values())
    needs_cgl = any(not uses_q for _, uses_q in families.values())
    cgl_model = learn_cgl(semp)[0] if needs_cgl else None
    ddgl_model = learn_ddgl(semp)[0] if needs_q else None

    test = sample_gaussian_signals(cov, cfg.test_count, derive_seed(seed, _TEST))
    noisy = {
        si: add_noise(test, sigma, derive_seed(seed, _NOISE, si)).signals
        for si, sigma in enumerate(cfg.sigma_levels)
    }

    rows = []
    for method in cfg.methods:
        family, uses_q = families[method]
        budgets = (0,) if family == "bernoulli" else cfg.budgets
        for budget in budgets:
            t0 = time.perf_counter()
            sset = _select(family, uses_q, cfg, seed, budget, cgl_model, ddgl_model)
            select_time = time.perf_counter() - t0
            model = ddgl_model if uses_q else cgl_model
            operator = model.operator(uses_q)
            for si, sigma in enumerate(cfg.sigma_levels):
                t1 = time.perf_counter()
                fh = _batch_reconstruct(operator, sset.indices, cfg.mu, noisy[si])
                mse = float(np.mean((fh - test.signals.T) ** 2))
                cell_time = select_time + (time.perf_counter() - t1)
                rows.append(
                    CellResult(
                        method=method,
                        budget=budget,
                        sigma=sigma,
                        seed=seed,
                        mse=mse,
                        wall_time=cell_time,
                    )
                )
    return rows


def _seed_worker(args):
    cfg, cov, seed = args
    return _run_seed(cfg, cov, seed)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Run every requested cell; deterministic given the configuration."""
    layout = generate_layout(cfg.n, cfg.layout_seed)
    cov = gp_covariance(layout, cfg.r, cfg.variance)
    tasks = [(cfg, cov, seed) for seed in cfg.seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            per_seed = list(pool.map(_seed_worker, tasks))
    else:
        per_seed = [_seed_worker(t) for t in tasks]
    rows = sorted((r for rows in per_seed for r in rows), key=CellResult.key)
    meta = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "code_version": __version__,
        "kernel_backend": BACKEND,
    }
    return ExperimentResult(rows=tuple(rows), metadata=meta)


# -- output files ----------------------------------------------------------


def _fmt(x) -> str:
    return repr(float(x))


def write_results_csv(result: ExperimentResult, path) -> None:
    """Deterministic MSE table; timings live in a separate file."""
    from .io import atomic_write_text

    lines = ["method,budget,sigma,seed,mse"]
    for row in result.rows:
        lines.append(f"{row.method},{row.budget},{_fmt(row.sigma)},{row.seed},{_fmt(row.mse)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_timings_csv(result: ExperimentResult, path) -> None:
    from .io import atomic_write_text

    lines = ["method,budget,sigma,seed,wall_time_s"]
    for row in result.rows:
        lines.append(
            f"{row.method},{row.budget},{_fmt(row.sigma)},{row.seed},{_fmt(row.wall_time)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def _grouped(result):
    groups = {}
    for row in result.rows:
        groups.setdefault((row.method, row.budget, row.sigma), []).append(row.mse)
    return groups


def write_summary_csv(result: ExperimentResult, path) -> None:
    """Per (method, budget, sigma): seed count, mean MSE, standard error."""
    from .io import atomic_write_text

    lines = ["method,budget,sigma,n_seeds,mse_mean,mse_stderr"]
    for (method, budget, sigma), vals in sorted(_grouped(result).items()):
        arr = np.asarray(vals)
        stderr = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
        lines.append(
            f"{method},{budget},{_fmt(sigma)},{arr.size},{_fmt(arr.mean())},{_fmt(stderr)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_series_csvs(result: ExperimentResult, out_dir) -> list:
    """One plot-ready CSV per sigma: budget column plus one mean-MSE column
    per method (bernoulli methods have no budget axis and are skipped)."""
    from pathlib import Path

    from .io import atomic_write_text

    groups = _grouped(result)
    methods = sorted({m for m, b, s in groups if b > 0})
    sigmas = sorted({s for _, b, s in groups if b > 0})
    budgets = sorted({b for _, b, s in groups if b > 0})
    paths = []
    for sigma in sigmas:
        lines = ["budget," + ",".join(methods)]
        for budget in budgets:
            cells = []
            for m in methods:
                vals = groups.get((m, budget, sigma))
                cells.append(_fmt(np.mean(vals)) if vals else "")
            lines.append(f"{budget}," + ",".join(cells))
        path = Path(out_dir) / f"mse_vs_budget_sigma_{sigma:g}.csv"
        atomic_write_text(path, "\n".join(lines) + "\n")
        paths.append(path)
    return paths


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def write_svg_charts(result: ExperimentResult, out_dir) -> list:
    """Minimal line charts of mean MSE vs budget, one SVG per sigma."""
    from pathlib import Path

    from .io import atomic_write_text

    groups = _grouped(result)
    methods = sorted({m for m, b, s in groups if b > 0})
    sigmas = sorted({s for _, b, s in groups if b > 0})
    budgets = sorted({b for _, b, s in groups if b > 0})
    if not methods or not budgets:
        return []
    width, height, margin = 640, 420, 60
    paths = []
    for sigma in sigmas:
        series = {
            m: [float(np.mean(groups[(m, b, sigma)])) for b in budgets if (m, b, sigma) in groups]
            for m in methods
        }
        ys = [v for vals in series.values() for v in vals]
        y_lo, y_hi = min(ys), max(ys)
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
        x_lo, x_hi = min(budgets), max(budgets)

        def sx(b):
            return margin + (width - 2 * margin) * (b - x_lo) / max(x_hi - x_lo, 1)

        def sy(v):
            return height - margin - (height - 2 * margin) * (v - y_lo) / (y_hi - y_lo)

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
            f'y2="{height - margin}" stroke="black"/>',
            f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
            f'<text x="{width / 2:.0f}" y="{height - 15}" text-anchor="middle">sampling budget</text>',
            f'<text x="15" y="{height / 2:.0f}" transform="rotate(-90 15 {height / 2:.0f})" '
            f'text-anchor="middle">mean MSE (sigma={sigma:g})</text>',
        ]
        for b in budgets:
            parts.append(
                f'<text x="{sx(b):.1f}" y="{height - margin + 18}" text-anchor="middle" '
                f'font-size="11">{b}</text>'
            )
        for frac in (0.0, 0.5, 1.0):
            v = y_lo + frac * (y_hi - y_lo)
            parts.append(
                f'<text x="{margin - 6}" y="{sy(v) + 4:.1f}" text-anchor="end" '
                f'font-size="11">{v:.3g}</text>'
            )
        for ci, m in enumerate(methods):
            color = _SVG_COLORS[ci % len(_SVG_COLORS)]
            pts = " ".join(f"{sx(b):.1f},{sy(v):.1f}" for b, v in zip(budgets, series[m]))
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
            parts.append(
                f'<text x="{width - margin + 4}" y="{margin + 16 * ci}" fill="{color}" '
                f'font-size="12">{m}</text>'
            )
        parts.append("</svg>")
        path = Path(out_dir) / f"mse_vs_budget_sigma_{sigma:g}.svg"
        atomic_write_text(path, "\n".join(parts) + "\n")
        paths.append(path)
    return paths
