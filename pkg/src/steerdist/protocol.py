"""Seeded Monte Carlo of the three-step filter-and-communicate protocol.

Per trial, Charlie filters copies 1..N-1; outcome c_n = 0 flags success.
He then sets c_N = 1 if any earlier copy succeeded (the unmeasured Nth copy
is discarded) and c_N = 0 otherwise, and broadcasts the bit string; every
copy with c_n = 1 is discarded.  Note the deliberate asymmetry: c_N = 1
marks a *successful* run even though c_n = 1 marks filter failure on the
measured copies.

Only the filter outcomes are sampled; the conditional states of the two
branches are attached analytically, so the empirical assemblage is the
observed-frequency mixture of the filtered and unfiltered assemblages.

Randomness comes from the counter-based Philox 4x64 generator keyed by the
seed, giving bit-for-bit reproducible output for a given NumPy version.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assemblage import Assemblage, Scenario, convex_mix, gghz_assemblage_1sdi
from .distillation import P_SUCC_FLOOR, apply_filter, check_kappa, make_filter
from .states import check_theta


def single_copy_success_probability(theta, kappa) -> float:
    """kappa^2 cos^2(theta) + sin^2(theta): one filter attempt on one copy."""
    t = check_theta(theta)
    k = check_kappa(kappa)
    return k * k * math.cos(t) ** 2 + math.sin(t) ** 2


def success_probability(theta, kappa, n_copies: int) -> float:
    """Probability that at least one of the N-1 filtered copies succeeds."""
    n = int(n_copies)
    if n < 2:
        raise ValueError(f"n_copies must be >= 2, got {n_copies}")
    p = single_copy_success_probability(theta, kappa)
    return 1.0 - (1.0 - p) ** (n - 1)


@dataclass(frozen=True)
class SimOutcome:
    """Record of one Monte Carlo run."""

    theta: float
    kappa: float
    n_copies: int
    trials: int
    seed: int
    success_count: int
    bitstring_histogram: dict[str, int]
    empirical_assemblage: Assemblage

    @property
    def success_fraction(self) -> float:
        return self.success_count / self.trials

    def to_json_dict(self) -> dict:
        return {
            "theta": self.theta,
            "kappa": self.kappa,
            "n_copies": self.n_copies,
            "trials": self.trials,
            "seed": self.seed,
            "success_count": self.success_count,
            "success_fraction": self.success_fraction,
            "bitstring_histogram": dict(sorted(self.bitstring_histogram.items())),
            "empirical_assemblage": self.empirical_assemblage.to_json_dict(),
        }


def run_protocol(theta, kappa, n_copies: int, trials: int, seed: int) -> SimOutcome:
    """Simulate ``trials`` independent runs of the N-copy protocol.

    Identical arguments reproduce identical outcomes bit for bit.  The
    one-sided GGHZ assemblage is the simulated resource.
    """
    t = check_theta(theta)
    k = check_kappa(kappa)
    n = int(n_copies)
    if n < 2:
        raise ValueError(f"n_copies must be >= 2, got {n_copies}")
    trials = int(trials)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p = single_copy_success_probability(t, k)

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    draws = rng.random((trials, n - 1))
    early_fail = draws >= p                       # c_n = 1 on filter failure
    run_success = ~early_fail.all(axis=1)
    success_count = int(run_success.sum())

    bits = np.concatenate(
        [early_fail.astype(np.uint8), run_success.astype(np.uint8)[:, None]], axis=1
    )
    rows, counts = np.unique(bits, axis=0, return_counts=True)
    histogram = {
        "".join(str(int(b)) for b in row): int(cnt) for row, cnt in zip(rows, counts)
    }

    base = gghz_assemblage_1sdi(t)
    if success_count == 0 or p < P_SUCC_FLOOR:
        empirical = Assemblage(Scenario.ONE_SIDED, dict(base.elements), theta=t)
    else:
        _, filtered = apply_filter(base, make_filter(k))
        frac = success_count / trials
        empirical = convex_mix([frac, 1.0 - frac], [filtered, base])
    return SimOutcome(
        theta=t,
        kappa=k,
        n_copies=n,
        trials=trials,
        seed=int(seed),
        success_count=success_count,
        bitstring_histogram=histogram,
        empirical_assemblage=empirical,
    )
