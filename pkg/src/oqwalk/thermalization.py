"""Nonequilibrium analysis: trajectories, thermalization window, entropy approximation.

A walker released at node 0 with omega > 1/2 first spreads as a drifting
Gaussian (velocity v = 2*omega - 1, dispersion rate 1/2), then piles up at the
far boundary and deforms into the geometric steady state.  This module
simulates exact trajectories, locates the deformation window, evaluates the
two-piece (Gaussian + Boltzmann) entropy approximation, and produces the
error metrics, time-dependent temperature, entropy production, and step-count
estimates for dissipative computation runs.

All analytic forms assume rightward drift (omega > 1/2).  For omega < 1/2
mirror the node indices (omega -> 1-omega), which leaves every thermodynamic
quantity unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erfc, xlogy

from . import equilibrium
from .equilibrium import EnsemblePoint
from .linear import LinearWalkSpec, markov_step, steady_state

__all__ = [
    "GaussianProfile",
    "ThermalizationWindow",
    "ApproxEntropyParams",
    "ApproxEntropyComponents",
    "TrajectoryRecord",
    "ErrorMetricsReport",
    "DqcEstimates",
    "gaussian_probability",
    "thermalization_window",
    "entropy_gaussian_regime",
    "approx_entropy_params",
    "tail_weight",
    "approx_probability",
    "approx_entropy",
    "approx_entropy_components",
    "simulate_trajectory",
    "shannon_entropy",
    "error_metrics",
    "noneq_temperature_analytic",
    "entropy_production",
    "dqc_step_estimates",
]

# |dS| below this is treated as a vanishing denominator in dE/dS estimates.
_FLAT_ENTROPY_TOL = 1e-12


@dataclass(frozen=True)
class GaussianProfile:
    """Drift-diffusion profile of the pre-boundary regime.

    velocity = 2*omega - 1 nodes/step; the dispersion rate is fixed at 1/2,
    so the profile at time t has mean velocity*t and variance t.
    """

    velocity: float
    diffusion: float = 0.5

    def __post_init__(self) -> None:
        if not -1.0 < self.velocity < 1.0:
            raise ValueError(f"velocity must lie in (-1, 1), got {self.velocity}")

    @classmethod
    def for_omega(cls, omega: float) -> "GaussianProfile":
        return cls(velocity=2.0 * omega - 1.0)

    def mean(self, t: float) -> float:
        return self.velocity * t

    def std(self, t: float) -> float:
        return math.sqrt(2.0 * self.diffusion * t)


def gaussian_probability(profile: GaussianProfile, x, t: float):
    """Drifting Gaussian density exp(-(x - v t)^2 / (2 t)) / sqrt(2 pi t)."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    var = 2.0 * profile.diffusion * t
    x = np.asarray(x, dtype=float)
    out = np.exp(-((x - profile.velocity * t) ** 2) / (2.0 * var)) / np.sqrt(2 * np.pi * var)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ThermalizationWindow:
    """Times (in steps) bracketing the Gaussian-to-Boltzmann deformation."""

    t_start: float
    t_end: float

    def __post_init__(self) -> None:
        if not (0 <= self.t_start < self.t_end):
            raise ValueError(f"need 0 <= t_start < t_end, got ({self.t_start}, {self.t_end})")

    @property
    def t_therm(self) -> float:
        return self.t_end - self.t_start


def thermalization_window(n_nodes: int, omega: float) -> ThermalizationWindow:
    """Window during which the drifting packet deforms at the boundary.

    t_start solves v t + 2 sqrt(t) = N (leading packet edge arrives),
    t_end solves v t - 2 sqrt(t) = N (trailing edge arrives), giving
    t_therm = t_end - t_start = 4 sqrt(1 + v N)/v^2.

    Requires omega > 1/2 (rightward drift); for omega < 1/2 apply the mirror
    map omega -> 1-omega first.  The drift-free point omega = 1/2 has no
    finite window and raises.
    """
    if n_nodes < 2:
        raise ValueError(f"n_nodes must be >= 2, got {n_nodes}")
    v = 2.0 * omega - 1.0
    if v <= 0.0:
        raise ValueError(
            f"window formulas need omega > 1/2 (drift toward the far boundary); "
            f"got omega = {omega}.  Use the mirror map for omega < 1/2."
        )
    root = math.sqrt(1.0 + v * n_nodes)
    return ThermalizationWindow(
        t_start=((root - 1.0) / v) ** 2,
        t_end=((root + 1.0) / v) ** 2,
    )


def entropy_gaussian_regime(t: float) -> float:
    """Entropy of the free drifting packet, (1/2) log(2 pi e t); valid t < t_start."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    return 0.5 * math.log(2.0 * math.pi * math.e * t)


@dataclass(frozen=True)
class ApproxEntropyParams:
    """Split line and cached steady-state sums for the two-piece approximation.

    The lattice is divided at n_prime = N - k_upper * sigma_ss: the Gaussian
    piece lives at x <= n_prime, the Boltzmann piece on lattice sites
    x > n_prime (optionally clipped from below at mean - k_lower * sigma_ss).
    sigma_ss is the steady-state standard deviation (the large-N energy spread
    with epsilon = 1).
    """

    n_nodes: int
    omega: float
    sigma_ss: float
    n_prime: float
    tail_start: int
    tail_mass: float
    tail_entropy: float
    equilibrium_entropy: float

    def __post_init__(self) -> None:
        if not (0.0 < self.n_prime < self.n_nodes):
            raise ValueError(
                f"n_prime = {self.n_prime} outside (0, {self.n_nodes}); "
                "the cutoff only makes sense well away from omega = 1/2"
            )


def approx_entropy_params(
    n_nodes: int,
    omega: float,
    k_upper: float = 2.0,
    k_lower: float = math.inf,
) -> ApproxEntropyParams:
    """Build the split parameters; defaults reproduce n_prime = N - 2*sigma_ss."""
    if not 0.5 < omega < 1.0:
        raise ValueError(f"approximation needs omega in (1/2, 1), got {omega}")
    point = EnsemblePoint.from_omega(n_nodes, omega, 1.0)
    sigma_ss = equilibrium.energy_std_large_n(point)
    n_prime = n_nodes - k_upper * sigma_ss
    tail_start = int(math.floor(n_prime)) + 1
    if math.isfinite(k_lower):
        floor_site = int(math.ceil(equilibrium.mean_energy(point) - k_lower * sigma_ss))
        tail_start = max(tail_start, floor_site)
    pi = steady_state(LinearWalkSpec(n_nodes, omega))
    tail = pi[tail_start:] if tail_start < n_nodes else pi[:0]
    return ApproxEntropyParams(
        n_nodes=n_nodes,
        omega=omega,
        sigma_ss=sigma_ss,
        n_prime=n_prime,
        tail_start=tail_start,
        tail_mass=float(tail.sum()),
        tail_entropy=float(-xlogy(tail, tail).sum()),
        equilibrium_entropy=equilibrium.entropy(point),
    )


def tail_weight(params: ApproxEntropyParams, profile: GaussianProfile, t: float) -> float:
    """Gaussian mass above the split line: w(t) = erfc((n' - v t)/sqrt(2 t))/2.

    Monotone nondecreasing in t for positive drift; 0 as t -> 0+, 1 once the
    packet has fully crossed the line.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    sd = profile.std(t)
    return 0.5 * float(erfc((params.n_prime - profile.velocity * t) / (math.sqrt(2.0) * sd)))


def approx_probability(
    spec: LinearWalkSpec,
    t: float,
    x,
    params: ApproxEntropyParams | None = None,
):
    """Two-piece probability: Gaussian density below n_prime, weighted steady tail above.

    For x <= n_prime this is the drifting Gaussian density; for x > n_prime it
    is w(t) * pi_m at the nearest lattice site m (zero beyond the lattice).
    The pieces have disjoint support; total mass is 1 - w(t)*(1 - tail_mass),
    i.e. only approximately normalized.
    """
    if params is None:
        params = approx_entropy_params(spec.n_nodes, spec.omega)
    profile = GaussianProfile.for_omega(spec.omega)
    w = tail_weight(params, profile, t)
    pi = steady_state(spec)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    below = xs <= params.n_prime
    out[below] = gaussian_probability(profile, xs[below], t)
    sites = np.rint(xs[~below]).astype(int)
    vals = np.zeros(sites.shape)
    ok = (sites >= params.tail_start) & (sites < spec.n_nodes)
    vals[ok] = w * pi[sites[ok]]
    out[~below] = vals
    return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class ApproxEntropyComponents:
    """Pieces of the two-part entropy approximation at one time."""

    gaussian: float
    boltzmann: float
    weight: float

    @property
    def total(self) -> float:
        return self.gaussian + self.boltzmann


def approx_entropy_components(
    spec: LinearWalkSpec,
    t: float,
    params: ApproxEntropyParams | None = None,
    boltzmann: str = "tail-sum",
) -> ApproxEntropyComponents:
    """S_G, S_B and the tail weight w at time t (see approx_entropy)."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if params is None:
        params = approx_entropy_params(spec.n_nodes, spec.omega)
    profile = GaussianProfile.for_omega(spec.omega)
    u = params.n_prime - profile.velocity * t
    z = u / math.sqrt(2.0 * t)
    # erfc(-z) = 1 + erf(z), kept in complementary form for tiny tails.
    s_g = 0.25 * (1.0 + math.log(2.0 * math.pi * t)) * float(erfc(-z)) \
        - u * math.exp(-u * u / (2.0 * t)) / (2.0 * math.sqrt(2.0 * math.pi * t))
    w = 0.5 * float(erfc(z))
    if boltzmann == "tail-sum":
        s_b = -float(xlogy(w, w)) * params.tail_mass + w * params.tail_entropy
    elif boltzmann == "weighted-equilibrium":
        s_b = w * params.equilibrium_entropy
    else:
        raise ValueError(f"unknown boltzmann convention {boltzmann!r}")
    return ApproxEntropyComponents(gaussian=s_g, boltzmann=s_b, weight=w)


def approx_entropy(
    spec: LinearWalkSpec,
    t: float,
    params: ApproxEntropyParams | None = None,
    boltzmann: str = "tail-sum",
) -> float:
    """Closed-form entropy S_a(t) = S_G(t) + S_B(t) of the two-piece profile.

    S_G is the exact differential entropy of the Gaussian piece truncated at
    n_prime.  S_B is the Boltzmann-piece contribution, with two conventions:

    - "tail-sum" (default): the exact discrete sum over lattice sites above
      the split, -sum (w pi_x) log(w pi_x) = -w log(w) * tail_mass
      + w * tail_entropy.  Reproducible and self-consistent with
      approx_probability; saturates at the tail entropy for t >> t_end.
    - "weighted-equilibrium": w(t) times the full closed-form equilibrium
      entropy; saturates at the exact steady-state entropy.

    For t well below t_start both reduce to (1/2) log(2 pi e t).
    """
    return approx_entropy_components(spec, t, params=params, boltzmann=boltzmann).total


def shannon_entropy(p: np.ndarray) -> float:
    """Entropy -sum p log p in nats (0 log 0 = 0).

    For the linear walk from a pure localized start this equals the von
    Neumann entropy of the full quantum state: every occupied block stays a
    rank-one projector, so the position marginal carries all the mixedness.
    """
    return float(-xlogy(p, p).sum())


@dataclass(frozen=True)
class TrajectoryRecord:
    """Per-step series of an exact walk simulation.

    Arrays are indexed by step 0..steps.  temperature_estimate holds the
    smoothed finite-difference dE/dS, with +-inf where the entropy is flat
    (divergence sentinel) and nan where both increments vanish.
    """

    spec: LinearWalkSpec
    entropy: np.ndarray
    energy: np.ndarray
    temperature_estimate: np.ndarray
    entropy_generated: np.ndarray
    equilibrium_temperature: float
    final_distribution: np.ndarray
    distributions: np.ndarray | None = None

    @property
    def steps(self) -> int:
        return len(self.entropy) - 1


def _temperature_estimate(energy: np.ndarray, ent: np.ndarray, half_width: int) -> np.ndarray:
    n = len(ent)
    out = np.empty(n)
    for i in range(n):
        lo = max(0, i - half_width)
        hi = min(n - 1, i + half_width)
        d_e = energy[hi] - energy[lo]
        d_s = ent[hi] - ent[lo]
        if abs(d_s) < _FLAT_ENTROPY_TOL:
            out[i] = math.nan if abs(d_e) < _FLAT_ENTROPY_TOL else math.copysign(math.inf, d_e)
        else:
            out[i] = d_e / d_s
    return out


def simulate_trajectory(
    spec: LinearWalkSpec,
    steps: int,
    p0: np.ndarray | None = None,
    t_est_half_width: int = 5,
    keep_distributions: bool = False,
) -> TrajectoryRecord:
    """Run the exact chain and record S(n), E(n), T_est(n), S_gen(n).

    p0 defaults to the walker localized at node 0, for which S(0) = E(0) = 0.
    S_gen(n) = S(n) - E(n)/T_eq; at omega = 1/2 (infinite T_eq) the heat term
    drops and S_gen = S.  The temperature estimate uses centered differences
    over +-t_est_half_width steps: the raw pointwise dE/dS is too noisy near
    the entropy maximum where dS crosses zero.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    n = spec.n_nodes
    if p0 is None:
        p = np.zeros(n)
        p[0] = 1.0
    else:
        p = np.asarray(p0, dtype=float).copy()
        if p.shape != (n,):
            raise ValueError(f"p0 has shape {p.shape}, expected ({n},)")
        if p.min() < 0 or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("p0 is not a probability distribution")

    sites = np.arange(n)
    ent = np.empty(steps + 1)
    energy = np.empty(steps + 1)
    dists = np.empty((steps + 1, n)) if keep_distributions else None
    for i in range(steps + 1):
        ent[i] = shannon_entropy(p)
        energy[i] = spec.epsilon * float(p @ sites)
        if dists is not None:
            dists[i] = p
        if i < steps:
            p = markov_step(p, spec.omega)

    t_eq = equilibrium.equilibrium_temperature(spec.omega, spec.epsilon)
    s_gen = ent.copy() if math.isinf(t_eq) else ent - energy / t_eq
    return TrajectoryRecord(
        spec=spec,
        entropy=ent,
        energy=energy,
        temperature_estimate=_temperature_estimate(energy, ent, t_est_half_width),
        entropy_generated=s_gen,
        equilibrium_temperature=t_eq,
        final_distribution=p,
        distributions=dists,
    )


@dataclass(frozen=True)
class ErrorMetricsReport:
    """Window error metrics between the approximate and exact entropy curves."""

    delta_max: float
    delta_rel_max: float
    mean_rel: float
    delta_logn_max: float
    mean_logn: float
    t_start: float
    t_end: float
    n_nodes: int
    omega: float


def error_metrics(
    spec: LinearWalkSpec,
    trajectory: TrajectoryRecord,
    approx: Callable[[int], float] | None = None,
    params: ApproxEntropyParams | None = None,
    boltzmann: str = "tail-sum",
) -> ErrorMetricsReport:
    """Compare S_a(t) against the exact S(t) over the thermalization window.

    Evaluated at integer steps t in [ceil(t_start), floor(t_end)].  `approx`
    may override the entropy approximation (any callable step -> value); by
    default approx_entropy with the given params/convention is used.
    delta = |S_a - S|, reported as max and mean, relative to S(t) and to the
    maximum possible entropy log N.
    """
    window = thermalization_window(spec.n_nodes, spec.omega)
    lo = math.ceil(window.t_start)
    hi = math.floor(window.t_end)
    if hi < lo:
        raise ValueError(f"empty metrics window [{lo}, {hi}]")
    if trajectory.steps < hi:
        raise ValueError(
            f"trajectory covers {trajectory.steps} steps but the window ends at {hi}"
        )
    if approx is None:
        if params is None:
            params = approx_entropy_params(spec.n_nodes, spec.omega)
        approx = lambda t: approx_entropy(spec, t, params=params, boltzmann=boltzmann)

    ts = np.arange(lo, hi + 1)
    s_exact = trajectory.entropy[ts]
    s_approx = np.array([approx(int(t)) for t in ts])
    delta = np.abs(s_approx - s_exact)
    rel = delta / s_exact
    log_n = math.log(spec.n_nodes)
    return ErrorMetricsReport(
        delta_max=float(delta.max()),
        delta_rel_max=float(rel.max()),
        mean_rel=float(rel.mean()),
        delta_logn_max=float(delta.max() / log_n),
        mean_logn=float(delta.mean() / log_n),
        t_start=window.t_start,
        t_end=window.t_end,
        n_nodes=spec.n_nodes,
        omega=spec.omega,
    )


def noneq_temperature_analytic(profile: GaussianProfile, epsilon: float, t: float) -> float:
    """Temperature dE/dS = 2 v epsilon t of the free drifting packet.

    Valid while the packet is clear of the boundary (t < t_start); beyond
    that use the trajectory's finite-difference estimate.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    return 2.0 * profile.velocity * epsilon * t


def entropy_production(trajectory: TrajectoryRecord, t_eq: float | None = None) -> np.ndarray:
    """Generated entropy S_gen(t) = S(t) - E(t)/T_eq along a trajectory.

    Nonnegative and nondecreasing for any start (the chain contracts
    relative entropy to the steady state).  When T_eq is infinite
    (omega = 1/2) the heat term vanishes and S_gen = S.
    """
    if t_eq is None:
        t_eq = trajectory.equilibrium_temperature
    if math.isinf(t_eq):
        return trajectory.entropy.copy()
    return trajectory.entropy - trajectory.energy / t_eq


@dataclass(frozen=True)
class DqcEstimates:
    """Step-count estimates for reading a result out of the steady state."""

    n_start: float
    n_steps: float
    n_end: float

    def __post_init__(self) -> None:
        if not self.n_start <= self.n_steps <= self.n_end:
            raise ValueError(
                f"expected n_start <= n_steps <= n_end, got "
                f"({self.n_start}, {self.n_steps}, {self.n_end})"
            )


def dqc_step_estimates(n_nodes: int, omega: float) -> DqcEstimates:
    """Bracketed run length for dissipative computation: N/(2 omega - 1) steps.

    n_steps is when the last-node occupation becomes usable; it always falls
    inside the thermalization window [n_start, n_end].
    """
    if not omega > 0.5:
        raise ValueError(f"step estimates need omega > 1/2, got {omega}")
    window = thermalization_window(n_nodes, omega)
    return DqcEstimates(
        n_start=window.t_start,
        n_steps=n_nodes / (2.0 * omega - 1.0),
        n_end=window.t_end,
    )
