"""Finite-shot emulation of the engine's energy bookkeeping.

Each shot draws a measurement outcome, then samples the medium's energy
once before and once after feedback (projective reads in the energy basis);
the work sample is their difference.  Streams come from a counter-based
Philox generator keyed on (seed, setting, stage), so estimates are
reproducible independent of evaluation order or thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine, states
from .errors import InvalidConfigError

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ShotConfig:
    shots_per_setting: int
    rng_seed: int
    readout_fidelity: float = 1.0

    def __post_init__(self):
        if not isinstance(self.shots_per_setting, (int, np.integer)) or self.shots_per_setting < 1:
            raise InvalidConfigError(
                f"shots_per_setting must be a positive integer, got {self.shots_per_setting}")
        if not isinstance(self.rng_seed, (int, np.integer)):
            raise InvalidConfigError(f"rng_seed must be an integer, got {self.rng_seed!r}")
        if not 0.5 < self.readout_fidelity <= 1.0:
            raise InvalidConfigError(
                f"readout_fidelity must lie in (0.5, 1], got {self.readout_fidelity}")


@dataclass(frozen=True)
class WorkEstimate:
    mean: float
    stderr: float
    shots: int


def _stream(seed, *tags):
    entropy = [int(seed) & _SEED_MASK] + [int(t) for t in tags]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _flip(bits, rng, fidelity):
    if fidelity >= 1.0:
        return bits
    wrong = rng.random(bits.shape) < (1.0 - fidelity)
    return np.where(wrong, 1.0 - bits, bits)


def sample_run(rho, decomposition, config):
    """Monte Carlo estimate of the average work for one measurement setting."""
    run = engine.run_protocol(rho, decomposition)
    n = config.shots_per_setting
    fidelity = config.readout_fidelity

    # Excited-state populations conditioned on the outcome; zero-probability
    # branches carry a placeholder that no shot selects.
    pop_plus = engine.energy(run.post_plus) if run.post_plus is not None else 0.0
    pop_minus = engine.energy(run.post_minus) if run.post_minus is not None else 0.0
    pop_start = engine.energy(engine.reduce_medium(rho))

    rng_start = _stream(config.rng_seed, decomposition.index, 0)
    e_start = (rng_start.random(n) < pop_start).astype(float)
    e_start = _flip(e_start, rng_start, fidelity)

    rng_final = _stream(config.rng_seed, decomposition.index, 1)
    picked_plus = rng_final.random(n) < run.p_plus
    pop = np.where(picked_plus, pop_plus, pop_minus)
    e_final = (rng_final.random(n) < pop).astype(float)
    e_final = _flip(e_final, rng_final, fidelity)

    work = e_start - e_final
    mean = float(work.mean())
    stderr = float(work.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return WorkEstimate(mean=mean, stderr=stderr, shots=n)


def allocate_shots(strategy, total):
    """Integer shot counts per setting, proportional to the strategy weights.

    Rounding remainders go to the largest weight so the counts sum to
    ``total`` exactly.
    """
    counts = np.array([int(round(w * total)) for w in strategy])
    counts[int(np.argmax(strategy))] += total - counts.sum()
    if counts.min() < 0:
        raise InvalidConfigError(f"cannot allocate {total} shots across strategy {strategy}")
    return counts


def sample_average_work(rho, strategy, config):
    """Monte Carlo estimate of the strategy-averaged work.

    The shot budget is split across settings in proportion to the strategy;
    settings whose share rounds to zero contribute nothing.  Per-setting
    estimates are independent, so the combined standard error adds their
    variances with the realized shot weights.
    """
    strategy = engine.check_strategy(strategy)
    counts = allocate_shots(strategy, config.shots_per_setting)
    eta = states.effective_eta(rho)
    total = int(counts.sum())
    mean = 0.0
    var = 0.0
    for index, n_shots in zip((1, 2, 3), counts):
        if n_shots <= 0:
            continue
        sub = ShotConfig(shots_per_setting=int(n_shots), rng_seed=config.rng_seed,
                         readout_fidelity=config.readout_fidelity)
        est = sample_run(rho, engine.make_decomposition(index, eta), sub)
        share = n_shots / total
        mean += share * est.mean
        var += (share * est.stderr) ** 2
    return WorkEstimate(mean=float(mean), stderr=float(np.sqrt(var)), shots=total)
