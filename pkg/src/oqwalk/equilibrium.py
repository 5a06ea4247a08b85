"""Closed-form equilibrium statistical mechanics of the thermalized linear walk.

The steady state of the linear walk is a truncated geometric distribution over
node indices, which is a Boltzmann distribution for equally spaced energy
levels E_m = m * epsilon (ground level set to zero).  All quantities below use
k_B = 1 and natural logarithms (entropy in nats).

Sign convention: the walk parameter omega and the inverse temperature beta are
tied by a = omega/(1-omega) = exp(-beta*epsilon).  Hence omega < 1/2 means
beta > 0 (ordinary positive temperature) while omega > 1/2 means beta < 0
(population inversion, negative temperature), and omega = 1/2 is the infinite
temperature point.

Evaluation near beta = 0 switches to series expansions: the naive closed forms
have removable 0/0 singularities exactly where the interesting physics lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EnsemblePoint",
    "ThermoPoint",
    "beta_from_omega",
    "omega_from_beta",
    "equilibrium_temperature",
    "log_partition_function",
    "partition_function",
    "mean_energy",
    "energy_variance",
    "energy_std_large_n",
    "entropy",
    "entropy_derivative",
    "entropy_derivative_large_n",
    "entropy_derivative_high_t",
    "free_energy",
    "free_energy_derivative",
    "free_energy_derivative_high_t",
    "heat_capacity",
    "heat_capacity_large_n",
    "heat_capacity_high_t",
    "energy_cost_domega",
    "energy_gap",
    "thermo_point",
]

# Below this value of |beta*epsilon*N| the closed forms lose digits to
# cancellation and the series branches are used instead.
_SERIES_CUTOFF = 1e-2

# beta/omega consistency required of an EnsemblePoint.
_CONSISTENCY_TOL = 1e-12


def _check_omega(omega: float) -> None:
    if not (0.0 < omega < 1.0):
        raise ValueError(f"omega must lie strictly inside (0, 1), got {omega}")


def _check_epsilon(epsilon: float) -> None:
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")


def beta_from_omega(omega: float, epsilon: float = 1.0) -> float:
    """Inverse temperature of the steady state reached at hop weight omega."""
    _check_omega(omega)
    _check_epsilon(epsilon)
    return -(math.log(omega) - math.log1p(-omega)) / epsilon


def omega_from_beta(beta: float, epsilon: float = 1.0) -> float:
    """Hop weight omega = 1/(1 + e^(beta*epsilon)); inverse of beta_from_omega."""
    _check_epsilon(epsilon)
    z = beta * epsilon
    if z >= 0:
        e = math.exp(-z)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(z))


def equilibrium_temperature(omega: float, epsilon: float = 1.0) -> float:
    """Steady-state temperature -epsilon/log(omega/(1-omega)).

    Positive for omega < 1/2, negative for omega > 1/2 (population inversion).
    Returns math.inf at omega = 1/2, where the temperature diverges.
    """
    _check_omega(omega)
    _check_epsilon(epsilon)
    if omega == 0.5:
        return math.inf
    return 1.0 / beta_from_omega(omega, epsilon)


@dataclass(frozen=True)
class EnsemblePoint:
    """Equilibrium parameter set (N, epsilon) with consistent beta and omega.

    Exactly one of beta/omega is authoritative at construction; the other is
    derived through a = omega/(1-omega) = exp(-beta*epsilon) and the pair is
    checked for consistency.
    """

    n_nodes: int
    epsilon: float
    beta: float
    omega: float

    def __post_init__(self) -> None:
        if self.n_nodes < 2:
            raise ValueError(f"n_nodes must be >= 2, got {self.n_nodes}")
        _check_epsilon(self.epsilon)
        _check_omega(self.omega)
        drift = abs(self.omega - omega_from_beta(self.beta, self.epsilon))
        if drift > _CONSISTENCY_TOL:
            raise ValueError(
                f"inconsistent (beta, omega) pair: omega={self.omega}, "
                f"omega(beta)={omega_from_beta(self.beta, self.epsilon)}"
            )

    @classmethod
    def from_omega(cls, n_nodes: int, omega: float, epsilon: float = 1.0) -> "EnsemblePoint":
        return cls(n_nodes, epsilon, beta_from_omega(omega, epsilon), omega)

    @classmethod
    def from_beta(cls, n_nodes: int, beta: float, epsilon: float = 1.0) -> "EnsemblePoint":
        # For |beta*epsilon| beyond ~37 the exact omega rounds to 0.0 or 1.0
        # in doubles; clamp to the nearest representable interior value (beta
        # stays authoritative, every formula uses it directly).
        omega = omega_from_beta(beta, epsilon)
        omega = min(max(omega, 5e-324), float(np.nextafter(1.0, 0.0)))
        return cls(n_nodes, epsilon, beta, omega)

    @property
    def x(self) -> float:
        """Dimensionless inverse temperature beta * epsilon."""
        return self.beta * self.epsilon


def _inv_expm1(z: float) -> float:
    # 1/(e^z - 1) for z != 0, without overflow for large |z|.
    if z > 700.0:
        return math.exp(-z)
    return 1.0 / math.expm1(z)


def _exp_over_expm1_sq(z: float) -> float:
    # e^z/(e^z - 1)^2 = 1/(4 sinh^2(z/2)); even in z, no overflow.
    z = abs(z)
    if z > 700.0:
        return math.exp(-z)
    s = math.sinh(0.5 * z)
    return 0.25 / (s * s)


def log_partition_function(point: EnsemblePoint) -> float:
    """log of Z = (a^N - 1)/(a - 1) with a = exp(-beta*epsilon).

    Evaluated in the log domain so that it stays finite for any N up to 1e6
    and omega in [1e-6, 1 - 1e-6]; a^N itself overflows doubles long before.
    """
    n = point.n_nodes
    x = point.x
    if abs(n * x) < _SERIES_CUTOFF:
        return math.log(n) - (n - 1) * x / 2.0 + (n * n - 1) * x * x / 24.0
    if x > 0:
        return math.log1p(-math.exp(-n * x)) - math.log1p(-math.exp(-x))
    return -(n - 1) * x + math.log1p(-math.exp(n * x)) - math.log1p(-math.exp(x))


def partition_function(point: EnsemblePoint) -> float:
    """Z itself; exactly N at beta = 0.  May overflow to inf for extreme N*|beta|."""
    if point.beta == 0.0:
        return float(point.n_nodes)
    logz = log_partition_function(point)
    if logz > 709.0:
        return math.inf
    return math.exp(logz)


def mean_energy(point: EnsemblePoint) -> float:
    """<E> = epsilon/(e^x - 1) - N*epsilon/(e^(N x) - 1), x = beta*epsilon.

    Limits: (N-1)*epsilon/2 at beta = 0; 0 as beta -> +inf; (N-1)*epsilon as
    beta -> -inf.
    """
    n = point.n_nodes
    x = point.x
    eps = point.epsilon
    if abs(n * x) < _SERIES_CUTOFF:
        return eps * ((n - 1) / 2.0 - x * (n * n - 1) / 12.0
                      + x ** 3 * (float(n) ** 4 - 1) / 720.0)
    return eps * _inv_expm1(x) - n * eps * _inv_expm1(n * x)


def energy_variance(point: EnsemblePoint) -> float:
    """<dE^2> = eps^2 [e^x/(e^x-1)^2 - N^2 e^(Nx)/(e^(Nx)-1)^2]; (N^2-1)eps^2/12 at beta=0."""
    n = point.n_nodes
    x = point.x
    eps2 = point.epsilon * point.epsilon
    if abs(n * x) < _SERIES_CUTOFF:
        return eps2 * ((n * n - 1) / 12.0 - x * x * (float(n) ** 4 - 1) / 240.0)
    return eps2 * (_exp_over_expm1_sq(x) - n * n * _exp_over_expm1_sq(n * x))


def energy_std_large_n(point: EnsemblePoint) -> float:
    """Large-N energy standard deviation epsilon/|2 sinh(beta*epsilon/2)|.

    Diverges at beta = 0 (returned as math.inf).
    """
    x = point.x
    if x == 0.0:
        return math.inf
    return point.epsilon * math.sqrt(_exp_over_expm1_sq(x))


def entropy(point: EnsemblePoint) -> float:
    """Equilibrium entropy S = log Z + beta <E> (nats, k_B = 1).

    Equals the Shannon entropy of the steady-state distribution.  Maximum
    log N exactly at beta = 0; tends to 0 for beta -> +-inf (third law).
    """
    n = point.n_nodes
    x = point.x
    if abs(n * x) < _SERIES_CUTOFF:
        # log Z + x <E>/eps collapses to log N - (N^2-1) x^2/24 + O(x^4).
        return math.log(n) - (n * n - 1) * x * x / 24.0
    return log_partition_function(point) + point.beta * mean_energy(point)


def entropy_derivative(point: EnsemblePoint) -> float:
    """dS/dbeta = beta * d<E>/dbeta = -beta * Var(E); finite for any finite N."""
    return -point.beta * energy_variance(point)


def entropy_derivative_large_n(beta: float, epsilon: float = 1.0) -> float:
    """N >> 1 limit of dS/dbeta: -beta eps^2 e^(beta eps)/(e^(beta eps)-1)^2."""
    if beta == 0.0:
        raise ValueError("the large-N entropy derivative diverges at beta = 0")
    return -beta * epsilon * epsilon * _exp_over_expm1_sq(beta * epsilon)


def entropy_derivative_high_t(beta: float, epsilon: float = 1.0) -> float:
    """High-temperature asymptote of the large-N dS/dbeta: -1/beta - epsilon."""
    if beta == 0.0:
        raise ValueError("asymptote diverges at beta = 0")
    return -1.0 / beta - epsilon


def free_energy(point: EnsemblePoint) -> float:
    """Helmholtz free energy F = -log(Z)/beta.

    Diverges like -log(N)/beta as beta -> 0; at beta = 0 the distinguished
    value -inf (the beta -> 0+ limit) is returned rather than raising.
    """
    if point.beta == 0.0:
        return -math.inf
    return -log_partition_function(point) / point.beta


def free_energy_derivative(point: EnsemblePoint) -> float:
    """dF/dbeta = log(Z)/beta^2 + <E>/beta; +inf at beta = 0."""
    if point.beta == 0.0:
        return math.inf
    b = point.beta
    return log_partition_function(point) / (b * b) + mean_energy(point) / b


def free_energy_derivative_high_t(beta: float, epsilon: float = 1.0) -> float:
    """Small positive beta*epsilon asymptote of the large-N dF/dbeta: (1 - log(beta eps))/beta^2."""
    z = beta * epsilon
    if z <= 0.0:
        raise ValueError("asymptote defined for beta * epsilon > 0")
    return (1.0 - math.log(z)) / (beta * beta)


def heat_capacity(point: EnsemblePoint) -> float:
    """C_V = beta^2 * Var(E); 0 at beta = 0 for finite N, 0 as beta -> inf."""
    return point.beta * point.beta * energy_variance(point)


def heat_capacity_large_n(beta: float, epsilon: float = 1.0) -> float:
    """N >> 1 heat capacity (beta eps)^2 e^(beta eps)/(e^(beta eps)-1)^2; -> 1 at beta = 0."""
    z = beta * epsilon
    if z == 0.0:
        return 1.0
    return z * z * _exp_over_expm1_sq(z)


def heat_capacity_high_t(beta: float, epsilon: float = 1.0) -> float:
    """High-temperature, large-N heat capacity e^(beta eps) = (1-omega)/omega."""
    return math.exp(beta * epsilon)


def energy_cost_domega(point: EnsemblePoint) -> float:
    """d<E>/domega: energy needed per unit change of the hop weight omega.

    Computed as Var(E)/(epsilon * omega * (1-omega)), which is algebraically
    identical to the direct derivative of <E> but stable at omega = 1/2 where
    the naive form is a difference of two diverging terms.  Always positive,
    so d<E> carries the sign of domega.  Large-N limit: epsilon/(1-2*omega)^2.
    Value at omega = 1/2: epsilon*(N^2-1)/3.
    """
    return energy_variance(point) / (point.epsilon * point.omega * (1.0 - point.omega))


def energy_gap(n_nodes: int, epsilon: float = 1.0) -> float:
    """Energy gap between the omega -> 0 and omega -> 1 steady states: (N-1)*epsilon."""
    if n_nodes < 2:
        raise ValueError(f"n_nodes must be >= 2, got {n_nodes}")
    _check_epsilon(epsilon)
    return (n_nodes - 1) * epsilon


@dataclass(frozen=True)
class ThermoPoint:
    """Bundle of equilibrium observables at one parameter point."""

    Z: float
    mean_E: float
    var_E: float
    S: float
    F: float
    C_V: float
    T: float


def thermo_point(point: EnsemblePoint) -> ThermoPoint:
    """Evaluate all equilibrium observables at one point (for sweeps)."""
    T = math.inf if point.beta == 0.0 else 1.0 / point.beta
    return ThermoPoint(
        Z=partition_function(point),
        mean_E=mean_energy(point),
        var_E=energy_variance(point),
        S=entropy(point),
        F=free_energy(point),
        C_V=heat_capacity(point),
        T=T,
    )
