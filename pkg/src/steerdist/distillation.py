"""Local filtering distillation: filter POVM, N-copy mixing, closed-form
optima and the bounded one-dimensional fidelity maximizer.

The filter acts on Charlie's qubit only.  Success on at least one of the
first N-1 copies leaves the filtered assemblage; failure on all of them
keeps an unfiltered copy, so the distilled output is the convex mixture of
the two branches with weights 1 - (1-p)**(N-1) and (1-p)**(N-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assemblage import (
    Assemblage,
    Scenario,
    element_keys,
    ghz_assemblage,
    gghz_assemblage_1sdi,
    gghz_assemblage_2sdi,
    require_valid,
    setting_groups,
)
from .errors import (
    KappaOutOfRangeError,
    NonFiniteObjectiveError,
    ScenarioMismatchError,
    ZeroSuccessProbabilityError,
)
from .linalg import REL_EIG_ZERO, psd_sqrt
from .metrics import assemblage_fidelity
from .states import check_theta

# Success probabilities below this are treated as certain failure.
P_SUCC_FLOOR = 1e-12

# Optimizer knobs: dense pre-scan guards against multimodality of
# arbitrary input assemblages, golden section refines the best cell.
PRE_SCAN_POINTS = 1001
BRACKET_TOL = 1e-8
# Fidelity differences below this are ties; well above eigensolver noise
# (~1e-15) and well below the optimizer's accuracy budget.
F_TIE_TOL = 1e-12
_INVPHI = (math.sqrt(5) - 1) / 2


def check_kappa(kappa) -> float:
    k = float(kappa)
    if not (0.0 <= k <= 1.0):
        raise KappaOutOfRangeError(f"kappa = {k} outside [0, 1]")
    return k


@dataclass(frozen=True)
class FilterOp:
    """Dichotomic filter POVM on one qubit: success branch C0, failure C1.

    C0 = kappa|0><0| + |1><1| and C1 = sqrt(1 - kappa^2)|0><0| satisfy
    C0^dag C0 + C1^dag C1 = identity.
    """

    kappa: float
    c0: np.ndarray
    c1: np.ndarray


def make_filter(kappa) -> FilterOp:
    k = check_kappa(kappa)
    c0 = np.array([[k, 0], [0, 1]], dtype=complex)
    c1 = np.array([[math.sqrt(1 - k * k), 0], [0, 0]], dtype=complex)
    return FilterOp(k, c0, c1)


def _success_diagonal(kappa: float, scenario: Scenario) -> np.ndarray:
    """Diagonal of the success operator on the element space.

    One-sided elements live on B (x) C, so the filter is 1 (x) C0; two-sided
    elements are Charlie's qubit, acted on by C0 directly.
    """
    if scenario is Scenario.ONE_SIDED:
        return np.array([kappa, 1.0, kappa, 1.0])
    return np.array([kappa, 1.0])


def _conjugate_by_filter(asm: Assemblage, kappa: float):
    """Unnormalized filtered elements and the per-copy success probability."""
    d = _success_diagonal(kappa, asm.scenario)
    scale = np.outer(d, d)
    un = {k: scale * m for k, m in asm.elements.items()}
    first_group = setting_groups(asm.scenario)[0]
    p = float(sum(np.trace(un[k]).real for k in first_group))
    return un, p


def apply_filter(asm: Assemblage, filt: FilterOp | float):
    """Post-selected single-copy filtering.

    Returns (p_succ, filtered) where p_succ is the success probability of
    the filter on one copy and ``filtered`` is the renormalized assemblage
    conditioned on success.
    """
    if not isinstance(filt, FilterOp):
        filt = make_filter(filt)
    un, p = _conjugate_by_filter(asm, filt.kappa)
    if p < P_SUCC_FLOOR:
        raise ZeroSuccessProbabilityError(f"p_succ = {p:.3e} below {P_SUCC_FLOOR:.0e}")
    filtered = Assemblage(asm.scenario, {k: m / p for k, m in un.items()})
    return p, filtered


def distill(asm: Assemblage, kappa, n_copies: int) -> Assemblage:
    """N-copy distilled mixture of the filtered and unfiltered branches.

    For inputs whose success probability is numerically zero the failure
    branch carries all the weight and the input is returned unchanged.
    """
    k = check_kappa(kappa)
    n = int(n_copies)
    if n < 2:
        raise ValueError(f"n_copies must be >= 2, got {n_copies}")
    un, p = _conjugate_by_filter(asm, k)
    if p < P_SUCC_FLOOR:
        return Assemblage(asm.scenario, dict(asm.elements), theta=asm.theta)
    p_fail = (1.0 - p) ** (n - 1)
    p_succ = 1.0 - p_fail
    mixed = {
        key: (p_succ / p) * un[key] + p_fail * asm.elements[key]
        for key in element_keys(asm.scenario)
    }
    return Assemblage(asm.scenario, mixed, theta=asm.theta)


@dataclass(frozen=True)
class DistillationConfig:
    """One distillation instance: source angle, copy count, filter, scenario."""

    theta: float
    n_copies: int
    kappa: float
    scenario: Scenario = Scenario.ONE_SIDED

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))
        object.__setattr__(self, "kappa", check_kappa(self.kappa))
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if int(self.n_copies) < 2:
            raise ValueError(f"n_copies must be >= 2, got {self.n_copies}")
        object.__setattr__(self, "n_copies", int(self.n_copies))


def distilled_assemblage(config: DistillationConfig) -> Assemblage:
    """Distilled GGHZ assemblage for the given configuration."""
    if config.scenario is Scenario.ONE_SIDED:
        base = gghz_assemblage_1sdi(config.theta)
    else:
        base = gghz_assemblage_2sdi(config.theta)
    return distill(base, config.kappa, config.n_copies)


def two_copy_optimal_kappa(theta) -> float:
    """Closed-form two-copy optimum 1 / (2 cos^2 theta), in [1/2, 1]."""
    t = check_theta(theta)
    return 1.0 / (2.0 * math.cos(t) ** 2)


def asymptotic_kappa(theta) -> float:
    """tan(theta): the optimal filter in the infinite-copy limit."""
    t = check_theta(theta)
    return math.tan(t)


def two_copy_fidelity_closed_form(theta, kappa) -> float:
    """Two-copy distilled fidelity against the GHZ target, pre-maximization."""
    t = check_theta(theta)
    k = check_kappa(kappa)
    c, s = math.cos(t), math.sin(t)
    return math.sqrt(0.5 + c * s * (c * c - k * k * c * c + k))


def kappa_prime_ncopy_fidelity(theta, n_copies: int) -> float:
    """N-copy distilled fidelity with the asymptotic filter kappa = tan(theta)."""
    t = check_theta(theta)
    n = int(n_copies)
    if n < 2:
        raise ValueError(f"n_copies must be >= 2, got {n_copies}")
    return math.sqrt(1.0 - 0.5 * (1.0 - math.sin(2 * t)) * math.cos(2 * t) ** (n - 1))


@dataclass(frozen=True)
class OptimizationResult:
    kappa_star: float
    f_star: float
    evaluations: int
    bracket_width: float


class _DistillFidelityObjective:
    """kappa -> assemblage fidelity of the N-copy distilled mixture.

    Precomputes the element stack and the target element roots once, then
    evaluates whole kappa batches with vectorized eigensolves.  Root
    fidelity is symmetric in its arguments, so rooting the fixed target
    keeps the per-evaluation cost at one eigensolve per element.
    """

    def __init__(self, asm: Assemblage, target: Assemblage, n_copies: int):
        self.scenario = asm.scenario
        self.n = int(n_copies)
        keys = element_keys(self.scenario)
        self.sig = np.stack([asm.elements[k] for k in keys])
        self.target_roots = np.stack([psd_sqrt(target.elements[k]) for k in keys])
        groups = setting_groups(self.scenario)
        key_index = {k: i for i, k in enumerate(keys)}
        self.group_idx = np.array([[key_index[k] for k in g] for g in groups])
        self.first_group = self.group_idx[0]
        self.evaluations = 0

    def batch(self, kappas: np.ndarray) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(kappas, dtype=float))
        self.evaluations += ks.size
        if self.scenario is Scenario.ONE_SIDED:
            dvec = np.stack([ks, np.ones_like(ks), ks, np.ones_like(ks)], axis=1)
        else:
            dvec = np.stack([ks, np.ones_like(ks)], axis=1)
        scale = dvec[:, :, None] * dvec[:, None, :]          # (K, d, d)
        un = scale[:, None, :, :] * self.sig[None, :, :, :]  # (K, E, d, d)

        diag = np.einsum("keii->ke", un).real
        p = diag[:, self.first_group].sum(axis=1)
        p_fail = np.where(p > P_SUCC_FLOOR, (1.0 - p) ** (self.n - 1), 1.0)
        w_succ = np.where(p > P_SUCC_FLOOR, (1.0 - p_fail) / np.maximum(p, P_SUCC_FLOOR), 0.0)
        dist = w_succ[:, None, None, None] * un + p_fail[:, None, None, None] * self.sig

        r = self.target_roots[None, :, :, :]
        m = r @ dist @ r
        m = (m + np.conj(np.swapaxes(m, -1, -2))) / 2
        ev = np.linalg.eigvalsh(m)                           # (K, E, d)
        cut = REL_EIG_ZERO * np.clip(ev[..., -1:], 0.0, None)
        ev = np.where(ev < cut, 0.0, ev)
        f = np.sqrt(ev).sum(axis=-1)                         # (K, E)
        per_setting = f[:, self.group_idx].sum(axis=2)       # (K, G)
        return per_setting.min(axis=1)

    def __call__(self, kappa: float) -> float:
        return float(self.batch(np.array([kappa]))[0])


def _golden_section_max(f, lo: float, hi: float, tol: float):
    """Golden-section maximization; returns (argmax, bracket_width)."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
    return (a + b) / 2, b - a


def optimize_kappa(
    source,
    n_copies: int,
    target: Assemblage | None = None,
    scenario: Scenario | None = None,
) -> OptimizationResult:
    """Maximize the distilled-assemblage fidelity over kappa in [0, 1].

    ``source`` is either a GGHZ angle (an assemblage is built for the given
    scenario, one-sided by default) or an arbitrary valid assemblage.
    ``target`` defaults to the perfectly steerable GHZ assemblage of the
    matching scenario.  A dense pre-scan locates the best cell, golden
    section refines it to a bracket of width <= 1e-8, and exact fidelity
    ties resolve to the larger kappa (higher success probability).
    """
    n = int(n_copies)
    if n < 2:
        raise ValueError(f"n_copies must be >= 2, got {n_copies}")
    if isinstance(source, Assemblage):
        asm = source
        if scenario is not None and Scenario(scenario) is not asm.scenario:
            raise ScenarioMismatchError(
                f"assemblage is {asm.scenario.value}, requested {Scenario(scenario).value}"
            )
    else:
        sc = Scenario(scenario) if scenario is not None else Scenario.ONE_SIDED
        theta = check_theta(source)
        asm = (
            gghz_assemblage_1sdi(theta)
            if sc is Scenario.ONE_SIDED
            else gghz_assemblage_2sdi(theta)
        )
    require_valid(asm)
    if target is None:
        target = ghz_assemblage(asm.scenario)
    elif target.scenario is not asm.scenario:
        raise ScenarioMismatchError(
            f"target is {target.scenario.value}, source is {asm.scenario.value}"
        )

    objective = _DistillFidelityObjective(asm, target, n)
    grid = np.linspace(0.0, 1.0, PRE_SCAN_POINTS)
    values = objective.batch(grid)
    if not np.all(np.isfinite(values)):
        raise NonFiniteObjectiveError("objective produced NaN or Inf during pre-scan")
    # argmax with exact ties resolved to the larger kappa
    best = len(values) - 1 - int(np.argmax(values[::-1]))

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    kappa_star, width = _golden_section_max(objective, lo, hi, BRACKET_TOL)

    # Domain endpoints never fall strictly inside a golden bracket; compare
    # them explicitly so a boundary maximum reports kappa exactly 0 or 1.
    candidates = [kappa_star]
    if hi >= 1.0 - BRACKET_TOL:
        candidates.append(1.0)
    if lo <= BRACKET_TOL:
        candidates.append(0.0)
    scored = [(objective(k), k) for k in candidates]
    best_f = max(s[0] for s in scored)
    kappa_star = max(k for f_val, k in scored if f_val >= best_f - F_TIE_TOL)

    f_star = assemblage_fidelity(distill(asm, kappa_star, n), target)
    if not math.isfinite(f_star):
        raise NonFiniteObjectiveError(f"fidelity at kappa = {kappa_star} is not finite")
    return OptimizationResult(
        kappa_star=float(kappa_star),
        f_star=float(f_star),
        evaluations=objective.evaluations,
        bracket_width=float(width),
    )
