"""Dissipative dynamics of two dipole-coupled qubits sharing a vacuum reservoir.

Time is the dimensionless tau = Gamma t throughout, and every rate is given in
units of the single-qubit emission rate Gamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import DensityMatrix, MatrixLike, as_array, ket, validate_density_matrix
from .correlations import SymmetricXState
from .errors import InvalidStateError, ParamOutOfRange, StateInvariantViolated

DICKE_SWITCH = 1e-6
MAX_STEP = 0.01
MAX_TAU = 50.0
TRACE_DRIFT_TOL = 1e-10


@dataclass(frozen=True)
class CouplingGeometry:
    """Separation in wavelengths and the cosine between dipole and separation axis."""

    separation: float
    dipole_cosine: float = 0.0

    def __post_init__(self):
        if not self.separation > 0:
            raise ParamOutOfRange(f"separation must be positive, got {self.separation!r}")
        if not -1.0 <= self.dipole_cosine <= 1.0:
            raise ParamOutOfRange(f"dipole cosine {self.dipole_cosine!r} outside [-1, 1]")

    @property
    def k0r(self) -> float:
        return 2 * math.pi * self.separation


@dataclass(frozen=True)
class DynamicsParams:
    gamma: float  # Gamma_12 / Gamma
    omega: float = 0.0  # Omega_12 / Gamma
    omega0: float = 0.0  # omega_0 / Gamma, only used outside the rotating frame

    def __post_init__(self):
        if not -1.0 <= self.gamma <= 1.0:
            raise ParamOutOfRange(f"|gamma| must not exceed 1, got {self.gamma!r}")


@dataclass(frozen=True)
class PopulationPair:
    symmetric: float
    antisymmetric: float


def coupling_from_geometry(g: CouplingGeometry) -> DynamicsParams:
    """Collective damping and dipole-dipole shift for free-space dipoles."""
    if g.separation <= 1e-6:
        raise ParamOutOfRange("separation too small; use dicke_state for the r -> 0 limit")
    x = g.k0r
    cos2 = g.dipole_cosine ** 2
    sx, cx = math.sin(x), math.cos(x)
    gamma = 1.5 * ((1 - cos2) * sx / x + (1 - 3 * cos2) * (cx / x**2 - sx / x**3))
    omega = 0.75 * (-(1 - cos2) * cx / x + (1 - 3 * cos2) * (sx / x**2 + cx / x**3))
    return DynamicsParams(gamma=gamma, omega=omega)


# ---------------------------------------------------------------------------
# analytic solution from |ee>


def _check_gamma_tau(gamma: float, tau: float) -> None:
    if not 0.0 <= gamma <= 1.0:
        raise ParamOutOfRange(f"gamma must lie in [0, 1], got {gamma!r}")
    if not tau >= 0.0:
        raise ParamOutOfRange(f"tau must be non-negative, got {tau!r}")


def analytic_coefficients(gamma: float, tau: float) -> tuple[float, float, float]:
    """(a, b, c) at time tau for both qubits initially excited (no range checks)."""
    eps = 1.0 - gamma
    a = math.exp(-2 * tau)
    if abs(eps) < DICKE_SWITCH:
        # first order in (1 - gamma) around the Dicke limit
        sym = a * (2 * tau + eps * (tau * tau - tau))
        anti = 0.5 * eps * (1 - a)
    else:
        sym = (1 + gamma) / eps * (math.exp(-(1 + gamma) * tau) - a)
        anti = eps / (1 + gamma) * (math.exp(-eps * tau) - a)
    return a, 0.5 * (sym + anti), 0.5 * (sym - anti)


def analytic_state(gamma: float, tau: float) -> SymmetricXState:
    _check_gamma_tau(gamma, tau)
    return SymmetricXState(*analytic_coefficients(gamma, tau))


def dicke_state(tau: float) -> SymmetricXState:
    """Zero-separation limit: b = c = tau exp(-2 tau)."""
    _check_gamma_tau(1.0, tau)
    a = math.exp(-2 * tau)
    return SymmetricXState(a, tau * a, tau * a)


def populations_sym_antisym(s) -> PopulationPair:
    """Populations of (|eg> +/- |ge>)/sqrt 2, from a SymmetricXState or a matrix."""
    if isinstance(s, SymmetricXState):
        return PopulationPair(s.b + s.c, s.b - s.c)
    rho = as_array(s)
    sym = 0.5 * (rho[1, 1] + rho[2, 2] + rho[1, 2] + rho[2, 1]).real
    anti = 0.5 * (rho[1, 1] + rho[2, 2] - rho[1, 2] - rho[2, 1]).real
    return PopulationPair(float(sym), float(anti))


def ab_sum(gamma: float, tau: float) -> float:
    """a + b: the excited-state population of either qubit."""
    a, b, _ = analytic_coefficients(gamma, tau)
    return a + b


# ---------------------------------------------------------------------------
# master equation

_LOWER = np.array([[0, 0], [1, 0]], dtype=complex)  # |g><e|
_SZ = np.diag([1.0, -1.0]).astype(complex)
_I2 = np.eye(2, dtype=complex)
S_MINUS = (np.kron(_LOWER, _I2), np.kron(_I2, _LOWER))
S_PLUS = tuple(s.conj().T for s in S_MINUS)
S_Z = (np.kron(_SZ, _I2), np.kron(_I2, _SZ))


def lindblad_rhs(m: MatrixLike, p: DynamicsParams) -> np.ndarray:
    """d rho / d tau including free evolution, dipole exchange and collective decay."""
    rho = as_array(m)
    out = np.zeros((4, 4), dtype=complex)
    if p.omega0:
        for sz in S_Z:
            out += -1j * p.omega0 * (sz @ rho - rho @ sz)
    if p.omega:
        for i in range(2):
            h = S_PLUS[i] @ S_MINUS[1 - i]
            out += -1j * p.omega * (h @ rho - rho @ h)
    rates = ((1.0, p.gamma), (p.gamma, 1.0))
    for i in range(2):
        for j in range(2):
            if rates[i][j] == 0.0:
                continue
            pm = S_PLUS[i] @ S_MINUS[j]
            out -= 0.5 * rates[i][j] * (rho @ pm + pm @ rho - 2 * S_MINUS[j] @ rho @ S_PLUS[i])
    return out


def liouvillian(p: DynamicsParams) -> np.ndarray:
    """16x16 matrix L with vec(d rho/d tau) = L vec(rho) (row-major vec)."""
    cols = []
    for k in range(16):
        e = np.zeros(16, dtype=complex)
        e[k] = 1.0
        cols.append(lindblad_rhs(e.reshape(4, 4), p).reshape(16))
    return np.stack(cols, axis=1)


def initial_state(label: str) -> DensityMatrix:
    """Product basis state from a two-letter label such as 'ee' or 'eg'."""
    if len(label) != 2 or set(label) - {"e", "g"}:
        raise ValueError(f"initial state label must be two of 'e'/'g', got {label!r}")
    psi = ket(*label)
    return validate_density_matrix(np.outer(psi, psi.conj()))


def integrate(
    initial: MatrixLike,
    p: DynamicsParams,
    tau_end: float,
    step: float = 1e-3,
    record_every: int = 1,
    rotating_frame: bool = True,
) -> list[tuple[float, DensityMatrix]]:
    """Fixed-step RK4 on the master equation.

    The step is shrunk (never grown) so that an integer number of steps lands
    exactly on ``tau_end``.  Every ``record_every``-th state is validated and
    returned together with tau = k * h, starting with the initial state.
    """
    return list(iter_integrate(initial, p, tau_end, step, record_every, rotating_frame))


def iter_integrate(
    initial: MatrixLike,
    p: DynamicsParams,
    tau_end: float,
    step: float = 1e-3,
    record_every: int = 1,
    rotating_frame: bool = True,
) -> Iterator[tuple[float, DensityMatrix]]:
    if not 0.0 < step <= MAX_STEP:
        raise ParamOutOfRange(f"step must lie in (0, {MAX_STEP}], got {step!r}")
    if not 0.0 <= tau_end <= MAX_TAU:
        raise ParamOutOfRange(f"tau_end must lie in [0, {MAX_TAU}], got {tau_end!r}")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if rotating_frame:
        p = DynamicsParams(p.gamma, p.omega, 0.0)

    n_steps = math.ceil(tau_end / step - 1e-9) if tau_end > 0 else 0
    h = tau_end / n_steps if n_steps else 0.0
    lv = liouvillian(p)
    x = np.array(as_array(initial), dtype=complex).reshape(16)
    trace0 = complex(np.trace(x.reshape(4, 4)))

    def emit(k: int):
        rho = x.reshape(4, 4)
        drift = abs(np.trace(rho) - trace0)
        if drift > TRACE_DRIFT_TOL:
            raise StateInvariantViolated(f"trace drift {drift:.3e} at step {k}")
        try:
            return k * h, validate_density_matrix(rho)
        except InvalidStateError as exc:
            raise StateInvariantViolated(f"step {k}, tau={k * h!r}: {exc}") from exc

    yield emit(0)
    for k in range(1, n_steps + 1):
        k1 = lv @ x
        k2 = lv @ (x + 0.5 * h * k1)
        k3 = lv @ (x + 0.5 * h * k2)
        k4 = lv @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % record_every == 0 or k == n_steps:
            yield emit(k)
