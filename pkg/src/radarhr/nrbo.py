"""Population-based Newton-Raphson-style optimizer over the (K, alpha) plane.

Each iteration applies three moves to every individual, in order, each with
greedy replacement:

  global search   X + r1*(Xg - X) + r2*(Xj - Xk), distinct random j, k
  local search    X + delta*(Xg - X) when X is within proximity_eps of Xg
  cooperation     Xleader + r3*(X - Xleader) when X is worse than its
                  group's leader

Xg (the global best) and the random group leaders are frozen at the start
of each iteration; out-of-bounds proposals are clamped. The run is fully
deterministic for a fixed seed.
"""
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from ._search import (Bounds, Candidate, FIT_MAX_ITERATIONS, make_cms_fitness,
                      to_candidate)
from .errors import InvalidArgumentError
from .objective import SampEnConfig
from .reconstruction import BandSpec, Reconstruction, reconstruct, select_cardiac_modes
from .signal_model import PhaseSeries
from .vmd import ImfSet, VmdParams, decompose


@dataclass(frozen=True)
class NrboConfig:
    population_n: int = 20
    max_iterations: int = 100
    seed: int = 0
    proximity_eps: float = 0.05
    local_delta_range: Tuple[float, float] = (-0.1, 0.1)
    stall_limit: int = 20

    def __post_init__(self):
        if self.population_n < 4:
            raise InvalidArgumentError(
                "population must be >= 4 (the global step draws three distinct indices)")
        if self.max_iterations < 0:
            raise InvalidArgumentError("max_iterations must be >= 0")
        if self.stall_limit < 1:
            raise InvalidArgumentError("stall_limit must be >= 1")


@dataclass
class OptResult:
    """Best candidate found, per-iteration best-fitness trace, eval count.

    trace holds one (k_modes, alpha, fitness) triple per history entry,
    ready for the JSONL trace export.
    """

    best: Candidate
    history: np.ndarray
    evaluations: int
    trace: list = field(default_factory=list)


@dataclass
class FitResult:
    """Best candidate with its full decomposition and reconstructed signal.

    opt carries the optimizer run (history, trace, eval count) when the
    fit came from a search; None for fixed-parameter decompositions.
    """

    best: Candidate
    imfs: ImfSet
    cms: np.ndarray
    opt: "OptResult" = None


def _trace_entry(pos: np.ndarray, bounds: Bounds, fitness: float) -> tuple:
    cand = to_candidate(pos, bounds)
    return (cand.k_modes, cand.alpha, float(fitness))


def _group_leaders(fitnesses: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random partition into ceil(N/5) groups; per-member leader index."""
    n = fitnesses.size
    n_groups = -(-n // 5)
    perm = rng.permutation(n)
    leader_of = np.empty(n, dtype=np.int64)
    for group in np.array_split(perm, n_groups):
        leader = group[np.argmin(fitnesses[group])]
        leader_of[group] = leader
    return leader_of


def optimize(fitness: Callable[[Candidate], float], bounds: Bounds,
             cfg: NrboConfig) -> OptResult:
    """Minimize `fitness` over `bounds`; see the module docstring for the moves."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.population_n

    pos = rng.uniform(0.0, 1.0, size=(n, 2))
    evals = 0

    def evaluate(p: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return float(fitness(to_candidate(p, bounds)))

    fit = np.array([evaluate(pos[i]) for i in range(n)])
    g_idx = int(np.argmin(fit))
    history = [float(fit[g_idx])]
    trace = [_trace_entry(pos[g_idx], bounds, fit[g_idx])]
    stall = 0

    for _ in range(cfg.max_iterations):
        x_g = pos[g_idx].copy()
        f_g_start = history[-1]
        leader_of = _group_leaders(fit, rng)

        for i in range(n):
            # global search
            others = [j for j in range(n) if j != i]
            j, k = rng.choice(others, size=2, replace=False)
            r1, r2 = rng.uniform(0.0, 1.0, size=2)
            proposal = np.clip(pos[i] + r1 * (x_g - pos[i]) + r2 * (pos[j] - pos[k]),
                               0.0, 1.0)
            f_new = evaluate(proposal)
            if f_new < fit[i]:
                pos[i], fit[i] = proposal, f_new

            # local search near the global best
            if np.linalg.norm(pos[i] - x_g) < cfg.proximity_eps:
                delta = rng.uniform(*cfg.local_delta_range)
                proposal = np.clip(pos[i] + delta * (x_g - pos[i]), 0.0, 1.0)
                f_new = evaluate(proposal)
                if f_new < fit[i]:
                    pos[i], fit[i] = proposal, f_new

            # cooperation pull toward the local leader
            leader = leader_of[i]
            if fit[i] > fit[leader]:
                r3 = rng.uniform(0.0, 1.0)
                proposal = np.clip(pos[leader] + r3 * (pos[i] - pos[leader]),
                                   0.0, 1.0)
                f_new = evaluate(proposal)
                if f_new < fit[i]:
                    pos[i], fit[i] = proposal, f_new

        g_idx = int(np.argmin(fit))
        history.append(float(fit[g_idx]))
        trace.append(_trace_entry(pos[g_idx], bounds, fit[g_idx]))
        stall = stall + 1 if history[-1] >= f_g_start else 0
        if stall >= cfg.stall_limit:
            break

    best = to_candidate(pos[g_idx], bounds)
    best.fitness = float(fit[g_idx])
    return OptResult(best=best, history=np.asarray(history), evaluations=evals,
                     trace=trace)


def nrbo_vmd_fit(phase: PhaseSeries, bounds: Bounds = Bounds(),
                 cfg: NrboConfig = NrboConfig(),
                 sampen: SampEnConfig = SampEnConfig(),
                 band: BandSpec = BandSpec(),
                 fit_max_iterations: int = FIT_MAX_ITERATIONS) -> FitResult:
    """Search (K, alpha) minimizing the SampEn of the cardiac reconstruction.

    Returns the best candidate together with its decomposition (re-run at
    the full solver budget) and the reconstructed cardiac signal.
    """
    if phase.phase.size < 16:
        raise InvalidArgumentError("phase series too short for decomposition")
    fitness = make_cms_fitness(phase.phase, phase.rate_hz, band, sampen,
                               fit_max_iterations)
    result = optimize(fitness, bounds, cfg)
    params = VmdParams(k_modes=result.best.k_modes, alpha=result.best.alpha)
    imfs = decompose(phase.phase, phase.rate_hz, params)
    rec = reconstruct(imfs, select_cardiac_modes(imfs, band))
    return FitResult(best=result.best, imfs=imfs, cms=rec.samples, opt=result)
