"""Correlation quantifiers for two-qubit states.

Every measure has a general route that works on any 4x4 density matrix and,
for the symmetric X family

    [[a, 0, 0, 0],
     [0, b, c, 0],
     [0, c, b, 0],
     [0, 0, 0, d]],   d = 1 - a - 2b,

a closed-form route.  The discord and classical correlation general routes
optimise a projective measurement over the Bloch sphere: an exhaustive
(theta, phi) grid scan followed by Nelder-Mead from the best grid cell.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal, Optional

import numpy as np
from scipy.optimize import minimize

from .core import (
    PAULIS,
    SIGMA_Y,
    DensityMatrix,
    MatrixLike,
    Side,
    apply_local_projectors,
    as_array,
    bloch_projectors,
    computational_projectors,
    eigenprojectors,
    hermitian_eigensystem,
    mutual_information,
    other_side,
    partial_trace,
    shannon_entropy,
    validate_density_matrix,
    von_neumann_entropy,
    xlog2x,
)
from .errors import DegenerateInput

Branch = Literal["D1", "D2"]

X_PATTERN_TOL = 1e-12
BRANCH_TIE_TOL = 1e-12
MID_DEGENERACY_TOL = 1e-9
NULL_OUTCOME = 1e-12


# ---------------------------------------------------------------------------
# state families


@dataclass(frozen=True)
class SymmetricXState:
    """Populations a (|ee>), b (|eg> and |ge>), real coherence c; d is implied."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        slack = 1e-12
        a, b, c = self.a, self.b, self.c
        if not (-slack <= a <= 1 + slack and -slack <= b <= 1 + slack):
            raise ValueError(f"populations out of range: a={a!r}, b={b!r}")
        if not -slack <= self.d <= 1 + slack:
            raise ValueError(f"population d = 1 - a - 2b = {self.d!r} out of range")
        if abs(c) > b + slack:
            raise ValueError(f"|c| = {abs(c)!r} exceeds b = {b!r}")

    @property
    def d(self) -> float:
        return 1.0 - self.a - 2.0 * self.b

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.a, self.b, self.b, self.d
        m[1, 2] = m[2, 1] = self.c
        return m

    def density_matrix(self) -> DensityMatrix:
        return validate_density_matrix(self.matrix())

    @classmethod
    def from_matrix(cls, m: MatrixLike, tol: float = X_PATTERN_TOL) -> Optional["SymmetricXState"]:
        """Recognise the symmetric X pattern; ``None`` if the matrix does not match."""
        arr = as_array(m)
        mask = np.ones((4, 4), dtype=bool)
        for i in range(4):
            mask[i, i] = False
        mask[1, 2] = mask[2, 1] = False
        if np.any(np.abs(arr[mask]) > tol):
            return None
        if abs(arr[1, 1] - arr[2, 2]) > tol or abs(arr[1, 2].imag) > tol:
            return None
        return cls(float(arr[0, 0].real), float(arr[1, 1].real), float(arr[1, 2].real))


@dataclass(frozen=True)
class GeneralXState:
    """X state with populations (a, b1, b2, d), inner coherence z, outer coherence w."""

    diag: tuple[float, float, float, float]
    z: complex = 0j
    w: complex = 0j

    def __post_init__(self):
        a, b1, b2, d = self.diag
        if abs(a + b1 + b2 + d - 1.0) > 1e-10:
            raise ValueError("X-state populations must sum to one")
        if abs(self.z) > math.sqrt(max(b1 * b2, 0.0)) + 1e-12:
            raise ValueError("|z| exceeds sqrt(b1 b2)")
        if abs(self.w) > math.sqrt(max(a * d, 0.0)) + 1e-12:
            raise ValueError("|w| exceeds sqrt(a d)")

    def matrix(self) -> np.ndarray:
        m = np.diag(np.asarray(self.diag, dtype=complex))
        m[1, 2], m[2, 1] = self.z, np.conj(self.z)
        m[0, 3], m[3, 0] = self.w, np.conj(self.w)
        return m


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction n(theta, phi) of the projector pair (I +/- n.sigma)/2."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi={self.phi!r} outside [0, 2pi)")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "MeasurementDirection":
        """Fold arbitrary angles back into the canonical ranges."""
        n = _bloch_vector(theta, phi)
        th = math.acos(min(1.0, max(-1.0, n[2])))
        ph = math.atan2(n[1], n[0]) % (2 * math.pi)
        if ph >= 2 * math.pi:
            ph = 0.0
        return cls(th, ph)

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        return bloch_projectors(self.theta, self.phi)


@dataclass(frozen=True)
class GridSpec:
    n_theta: int = 64
    n_phi: int = 128
    refine: bool = True
    fatol: float = 1e-10
    maxiter: int = 200

    def __post_init__(self):
        if self.n_theta < 64 or self.n_phi < 128:
            raise ValueError("grid resolution must be at least 64 x 128")


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    discord: float
    mid: float
    classical: float
    concurrence: float
    discord_branch: str  # "D1", "D2", or "grid" for the brute-force route
    mid_degenerate: bool
    side: Side
    method: str  # "x_state" or "general"

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# concurrence

_YY = np.kron(SIGMA_Y, SIGMA_Y)


def concurrence(m: MatrixLike) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).  That
    product is not Hermitian, so its spectrum is taken from the similar-spectrum
    Hermitian matrix sqrt(rho) rho_tilde sqrt(rho).
    """
    rho = as_array(m)
    es = hermitian_eigensystem(rho)
    w = np.sqrt(np.clip(es.eigenvalues, 0.0, None))
    sqrt_rho = (es.eigenvectors * w) @ es.eigenvectors.conj().T
    rho_tilde = _YY @ rho.conj() @ _YY
    r = sqrt_rho @ rho_tilde @ sqrt_rho
    lam = np.sqrt(np.clip(hermitian_eigensystem(0.5 * (r + r.conj().T)).eigenvalues, 0.0, None))
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_x_symmetric(s: SymmetricXState) -> float:
    """Closed-form concurrence from the square-root set {r, r, |b-c|, |b+c|}."""
    r = math.sqrt(max(s.a * s.d, 0.0))
    minus, plus = abs(s.b - s.c), abs(s.b + s.c)
    if r >= minus and r >= plus:
        lam = -(minus + plus)
    elif plus >= minus:
        lam = plus - minus - 2.0 * r
    else:
        lam = minus - plus - 2.0 * r
    return max(0.0, lam)


def concurrence_margin(s: SymmetricXState) -> float:
    """The signed quantity whose positive part is the concurrence."""
    r = math.sqrt(max(s.a * s.d, 0.0))
    vals = sorted((r, r, abs(s.b - s.c), abs(s.b + s.c)), reverse=True)
    return vals[0] - vals[1] - vals[2] - vals[3]


# ---------------------------------------------------------------------------
# measurement optimisation


def _bloch_vector(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _measurement_blocks(rho: np.ndarray, side: Side) -> tuple[np.ndarray, np.ndarray]:
    """Reduced state of the unmeasured qubit and its three Pauli-weighted partners.

    Measuring ``side`` along n gives the unnormalised conditional states
    (T0 +/- sum_k n_k T_k) / 2 on the other qubit.
    """
    t = rho.reshape(2, 2, 2, 2)
    if side == "B":
        spec = "ijkl,lj->ik"
    elif side == "A":
        spec = "ijkl,ki->jl"
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    t0 = np.einsum(spec, t, np.eye(2))
    tk = np.stack([np.einsum(spec, t, sig) for sig in PAULIS])
    return t0, tk


def _conditional_entropy(t0: np.ndarray, tk: np.ndarray, n: np.ndarray) -> np.ndarray:
    """sum_j p_j S(rho_other | j) for a batch of unit vectors n with shape (..., 3)."""
    weighted = np.tensordot(n, tk, axes=([-1], [0]))
    total = np.zeros(n.shape[:-1])
    for sign in (1.0, -1.0):
        mats = 0.5 * (t0 + sign * weighted)
        x, z = mats[..., 0, 0].real, mats[..., 1, 1].real
        y = np.abs(mats[..., 0, 1])
        p = x + z
        half = np.sqrt(0.25 * (x - z) ** 2 + y * y)
        lam = np.stack([0.5 * p + half, 0.5 * p - half])
        lam = np.clip(lam, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            ent = -np.sum(np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0), axis=0)
            ent += np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        total += np.where(p >= NULL_OUTCOME, ent, 0.0)
    return total


def _minimise_conditional_entropy(
    m: MatrixLike, side: Side, grid: GridSpec
) -> tuple[float, MeasurementDirection]:
    rho = as_array(m)
    t0, tk = _measurement_blocks(rho, side)
    if float(np.trace(t0).real) < NULL_OUTCOME:
        raise DegenerateInput("every measurement outcome has zero probability")

    thetas = np.linspace(0.0, math.pi, grid.n_theta)
    phis = np.arange(grid.n_phi) * (2 * math.pi / grid.n_phi)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(t0, tk, _bloch_vector(th, ph))
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    best_val, best = float(values[i, j]), (float(thetas[i]), float(phis[j]))

    if grid.refine:
        def objective(x):
            return float(_conditional_entropy(t0, tk, _bloch_vector(x[0], x[1])))

        dth, dph = thetas[1] - thetas[0], phis[1] - phis[0]
        x0 = np.array(best)
        simplex = np.array([x0, x0 + [dth, 0.0], x0 + [0.0, dph]])
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "fatol": grid.fatol, "xatol": 1e-9,
                     "maxiter": grid.maxiter},
        )
        if res.fun < best_val:
            best_val, best = float(res.fun), (float(res.x[0]), float(res.x[1]))
    return best_val, MeasurementDirection.from_angles(*best)


def measured_information(m: MatrixLike, side: Side, direction: MeasurementDirection) -> float:
    """Information about the other qubit gained by measuring ``side`` along ``direction``."""
    rho = as_array(m)
    t0, tk = _measurement_blocks(rho, side)
    n = _bloch_vector(direction.theta, direction.phi)
    s_other = von_neumann_entropy(partial_trace(rho, other_side(side)))
    return s_other - float(_conditional_entropy(t0, tk, n))


def discord_min(
    m: MatrixLike, side: Side = "B", grid: GridSpec = DEFAULT_GRID
) -> tuple[float, MeasurementDirection]:
    """Quantum discord with the projective measurement on ``side``."""
    s_cond, direction = _minimise_conditional_entropy(m, side, grid)
    s_other = von_neumann_entropy(partial_trace(m, other_side(side)))
    return mutual_information(m) - (s_other - s_cond), direction


def classical_correlation(m: MatrixLike, side: Side = "B", grid: GridSpec = DEFAULT_GRID) -> float:
    """Maximal information about the other qubit from a measurement on ``side``."""
    s_cond, _ = _minimise_conditional_entropy(m, side, grid)
    return von_neumann_entropy(partial_trace(m, other_side(side))) - s_cond


# ---------------------------------------------------------------------------
# closed forms for the symmetric X family


def _xlog_ratio(x: float, y: float) -> float:
    return x * math.log2(x / y) if x > 0.0 else 0.0


def _entropies(s: SymmetricXState) -> tuple[float, float]:
    """(S of either reduced state, S of the joint state)."""
    a, b, c, d = s.a, s.b, s.c, s.d
    s_red = shannon_entropy((a + b, b + d))
    s_joint = shannon_entropy((a, max(b + c, 0.0), max(b - c, 0.0), d))
    return s_red, s_joint


def _alpha(s: SymmetricXState) -> float:
    return min(1.0, math.sqrt((2.0 * (s.a + s.b) - 1.0) ** 2 + 4.0 * s.c * s.c))


def mutual_information_x_symmetric(s: SymmetricXState) -> float:
    s_red, s_joint = _entropies(s)
    return 2.0 * s_red - s_joint


def discord_branches(s: SymmetricXState) -> tuple[float, float]:
    """(D1, D2): discord for a sigma_z and a sigma_x measurement respectively."""
    a, b, d = s.a, s.b, s.d
    s_red, s_joint = _entropies(s)
    d1 = (
        s_red - s_joint
        - _xlog_ratio(a, a + b) - _xlog_ratio(b, a + b)
        - _xlog_ratio(d, b + d) - _xlog_ratio(b, b + d)
    )
    alpha = _alpha(s)
    d2 = s_red - s_joint - xlog2x(0.5 * (1 + alpha)) - xlog2x(0.5 * (1 - alpha))
    return d1, d2


def discord_x_symmetric(s: SymmetricXState) -> tuple[float, Branch]:
    d1, d2 = discord_branches(s)
    if d1 <= d2 or abs(d1 - d2) < BRANCH_TIE_TOL:
        return d1, "D1"
    return d2, "D2"


def mid_x_symmetric(s: SymmetricXState) -> float:
    b, c = s.b, s.c
    return -2.0 * xlog2x(b) + xlog2x(max(b - c, 0.0)) + xlog2x(max(b + c, 0.0))


def classical_correlation_x_symmetric(s: SymmetricXState, branch: Branch) -> float:
    a, b, d = s.a, s.b, s.d
    if branch == "D1":
        return (
            -2.0 * xlog2x(a + b) - 2.0 * xlog2x(1.0 - a - b)
            + xlog2x(d) + xlog2x(a) + 2.0 * xlog2x(b)
        )
    if branch == "D2":
        alpha = _alpha(s)
        return (
            -xlog2x(a + b) - xlog2x(1.0 - a - b)
            + xlog2x(0.5 * (1 + alpha)) + xlog2x(0.5 * (1 - alpha))
        )
    raise ValueError(f"branch must be 'D1' or 'D2', got {branch!r}")


# ---------------------------------------------------------------------------
# measurement-induced disturbance


def mid(m: MatrixLike, degeneracy_tol: float = MID_DEGENERACY_TOL) -> tuple[float, bool]:
    """I(rho) - I(Pi(rho)) with Pi built from the reduced states' eigenprojectors.

    A side whose reduced spectrum is degenerate is measured in the computational
    basis instead, and the returned flag is set.
    """
    rho = as_array(m)
    flagged = False
    pairs = []
    for side in ("A", "B"):
        proj, degenerate = eigenprojectors(partial_trace(rho, side), degeneracy_tol)
        if degenerate:
            proj = computational_projectors()
            flagged = True
        pairs.append(proj)
    measured = apply_local_projectors(rho, pairs[0], pairs[1])
    return mutual_information(rho) - mutual_information(measured), flagged


# ---------------------------------------------------------------------------
# reports


def _report_x(s: SymmetricXState, side: Side) -> CorrelationReport:
    discord, branch = discord_x_symmetric(s)
    return CorrelationReport(
        mutual_info=mutual_information_x_symmetric(s),
        discord=discord,
        mid=mid_x_symmetric(s),
        classical=classical_correlation_x_symmetric(s, branch),
        concurrence=concurrence_x_symmetric(s),
        discord_branch=branch,
        mid_degenerate=abs(2.0 * (s.a + s.b) - 1.0) < MID_DEGENERACY_TOL,
        side=side,
        method="x_state",
    )


def full_report(m, side: Side = "B", grid: GridSpec = DEFAULT_GRID) -> CorrelationReport:
    """Every measure at once, taking the closed-form route for symmetric X states."""
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    if isinstance(m, SymmetricXState):
        return _report_x(m, side)
    s = SymmetricXState.from_matrix(m)
    if s is not None:
        return _report_x(s, side)
    return general_report(m, side, grid)


def general_report(m: MatrixLike, side: Side = "B", grid: GridSpec = DEFAULT_GRID) -> CorrelationReport:
    """Brute-force route for any state (no closed forms)."""
    if isinstance(m, SymmetricXState):
        m = m.matrix()
    rho = as_array(m)
    s_cond, _ = _minimise_conditional_entropy(rho, side, grid)
    info = mutual_information(rho)
    classical = von_neumann_entropy(partial_trace(rho, other_side(side))) - s_cond
    mid_value, degenerate = mid(rho)
    return CorrelationReport(
        mutual_info=info,
        discord=info - classical,
        mid=mid_value,
        classical=classical,
        concurrence=concurrence(rho),
        discord_branch="grid",
        mid_degenerate=degenerate,
        side=side,
        method="general",
    )
