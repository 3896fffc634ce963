"""Linear algebra and entropy primitives for one- and two-qubit states.

All two-qubit matrices use the product basis (|ee>, |eg>, |ge>, |gg>); a
single qubit has |e> at index 0 and |g> at index 1.  Entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import (
    IncompleteProjectorSet,
    NoConvergence,
    NotHermitian,
    NotPositive,
    TraceNotOne,
)

Side = Literal["A", "B"]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
CLAMP_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
I2 = np.eye(2, dtype=complex)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 two-qubit state.  Build through :func:`validate_density_matrix`."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class ReducedState:
    entries: np.ndarray
    subsystem: Side

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns


MatrixLike = Union[DensityMatrix, ReducedState, np.ndarray, Sequence]


def as_array(m: MatrixLike) -> np.ndarray:
    """Raw complex array behind a state object (no validation)."""
    if isinstance(m, (DensityMatrix, ReducedState)):
        return m.entries
    return np.asarray(m, dtype=complex)


# ---------------------------------------------------------------------------
# eigensolver


def hermitian_eigensystem(m: MatrixLike, tol: float = JACOBI_TOL) -> EigenSystem:
    """Diagonalise a small Hermitian matrix with cyclic complex Jacobi rotations.

    Each (p, q) rotation first removes the phase of the off-diagonal element and
    then applies the real symmetric Jacobi rotation.  Sweeps continue until the
    off-diagonal Frobenius norm drops below ``tol`` (relative to the matrix norm
    when that exceeds one).
    """
    arr = np.array(as_array(m), dtype=complex)
    n = arr.shape[0]
    if arr.shape != (n, n) or n not in (2, 4):
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {arr.shape}")
    herm_err = float(np.max(np.abs(arr - arr.conj().T)))
    if herm_err > HERMITIAN_TOL:
        raise NotHermitian(herm_err)
    arr = 0.5 * (arr + arr.conj().T)
    threshold = tol * max(1.0, float(np.linalg.norm(arr)))
    # plain Python scalars: numpy per-element overhead dominates at n <= 4
    a = arr.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(abs(a[p][q]) ** 2 for p, q in pairs))
        if off < threshold:
            break
        for p, q in pairs:
            apq = a[p][q]
            mag = abs(apq)
            if mag == 0.0:
                continue
            ph = (apq / mag).conjugate()
            app, aqq = a[p][p].real, a[q][q].real
            theta = (aqq - app) / (2.0 * mag)
            if abs(theta) > 1e150:
                t = 0.5 / theta
            else:
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            # columns p, q times [[c, s], [-s*ph, c*ph]]; rows follow by Hermiticity
            for k in range(n):
                if k != p and k != q:
                    akp, akq = a[k][p], a[k][q]
                    nkp = c * akp - s * ph * akq
                    nkq = s * akp + c * ph * akq
                    a[k][p], a[k][q] = nkp, nkq
                    a[p][k], a[q][k] = nkp.conjugate(), nkq.conjugate()
                vkp, vkq = v[k][p], v[k][q]
                v[k][p] = c * vkp - s * ph * vkq
                v[k][q] = s * vkp + c * ph * vkq
            a[p][q] = a[q][p] = 0j
            a[p][p] = complex(app - t * mag)
            a[q][q] = complex(aqq + t * mag)
    else:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(-w, kind="stable")
    return EigenSystem(w[order], np.array(v, dtype=complex)[:, order])


def hermitian_eigenvalues(m: MatrixLike) -> np.ndarray:
    return hermitian_eigensystem(m).eigenvalues


# ---------------------------------------------------------------------------
# validation


def validate_density_matrix(m: MatrixLike) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; clamp round-off negatives."""
    arr = np.array(as_array(m), dtype=complex)
    if arr.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
    return DensityMatrix(_validated(arr))


def validate_reduced_state(m: MatrixLike, subsystem: Side) -> ReducedState:
    arr = np.array(as_array(m), dtype=complex)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    return ReducedState(_validated(arr), subsystem)


def _validated(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise NotHermitian(float("inf"), "non-finite entries")
    herm_err = float(np.max(np.abs(arr - arr.conj().T)))
    if herm_err > HERMITIAN_TOL:
        raise NotHermitian(herm_err)
    arr = 0.5 * (arr + arr.conj().T)
    tr = float(np.trace(arr).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(abs(tr - 1.0), f"trace = {tr!r}")
    es = hermitian_eigensystem(arr)
    lo = float(es.eigenvalues[-1])
    if lo < -CLAMP_TOL:
        raise NotPositive(-lo, f"smallest eigenvalue {lo!r}")
    if lo < 0.0:
        w = np.clip(es.eigenvalues, 0.0, None)
        arr = (es.eigenvectors * w) @ es.eigenvectors.conj().T
        arr = 0.5 * (arr + arr.conj().T)
    return arr / np.trace(arr).real


# ---------------------------------------------------------------------------
# entropies and reductions


def xlog2x(p: float) -> float:
    """p log2 p with the 0 log 0 = 0 convention."""
    return p * math.log2(p) if p > 0.0 else 0.0


def shannon_entropy(probs) -> float:
    return -sum(xlog2x(float(p)) for p in probs)


def von_neumann_entropy(m: MatrixLike) -> float:
    """-Tr(rho log2 rho) in bits.  Tiny negative eigenvalues count as zero."""
    w = hermitian_eigenvalues(m)
    s = shannon_entropy(np.clip(w, 0.0, None))
    return min(max(s, 0.0), math.log2(len(w)))


def partial_trace(m: MatrixLike, keep: Side) -> ReducedState:
    """Reduced state of qubit ``keep`` ('A' first, 'B' second)."""
    t = as_array(m).reshape(2, 2, 2, 2)
    if keep == "A":
        r = np.einsum("ijkj->ik", t)
    elif keep == "B":
        r = np.einsum("jijk->ik", t)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {keep!r}")
    return ReducedState(0.5 * (r + r.conj().T), keep)


def other_side(side: Side) -> Side:
    return "B" if side == "A" else "A"


def mutual_information(m: MatrixLike) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB)."""
    return (
        von_neumann_entropy(partial_trace(m, "A"))
        + von_neumann_entropy(partial_trace(m, "B"))
        - von_neumann_entropy(m)
    )


# ---------------------------------------------------------------------------
# local projective measurements


def bloch_projectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """The pair (I +/- n.sigma)/2 for the direction n(theta, phi)."""
    n = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
    ns = sum(k * s for k, s in zip(n, PAULIS))
    return 0.5 * (I2 + ns), 0.5 * (I2 - ns)


def _check_projector_pair(pair) -> tuple[np.ndarray, np.ndarray]:
    p0, p1 = (np.asarray(p, dtype=complex) for p in pair)
    errs = (
        np.max(np.abs(p0 + p1 - I2)),
        np.max(np.abs(p0 @ p1)),
        np.max(np.abs(p0 @ p0 - p0)),
        np.max(np.abs(p0 - p0.conj().T)),
    )
    worst = float(max(errs))
    if worst > HERMITIAN_TOL:
        raise IncompleteProjectorSet(f"projector pair defect {worst:.3e}")
    return p0, p1


def apply_local_projectors(m: MatrixLike, pa=None, pb=None) -> DensityMatrix:
    """Non-selective local measurement: sum_ij (Pa_i x Pb_j) rho (Pa_i x Pb_j).

    ``None`` on a side leaves that qubit untouched.
    """
    rho = as_array(m)
    sides_a = _check_projector_pair(pa) if pa is not None else (I2,)
    sides_b = _check_projector_pair(pb) if pb is not None else (I2,)
    out = np.zeros((4, 4), dtype=complex)
    for qa in sides_a:
        for qb in sides_b:
            k = np.kron(qa, qb)
            out += k @ rho @ k
    return validate_density_matrix(out)


def computational_projectors() -> tuple[np.ndarray, np.ndarray]:
    return np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)


def eigenprojectors(m: MatrixLike, degeneracy_tol: float = 1e-9) -> tuple[Optional[tuple], bool]:
    """Rank-one eigenprojectors of a 2x2 state, or (None, True) when degenerate."""
    es = hermitian_eigensystem(m)
    if abs(es.eigenvalues[0] - es.eigenvalues[1]) < degeneracy_tol:
        return None, True
    vecs = es.eigenvectors
    return tuple(np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(2)), False


# ---------------------------------------------------------------------------
# standard states


def ket(*labels: str) -> np.ndarray:
    """Product ket from single-qubit labels 'e', 'g', '+', '-'."""
    table = {
        "e": np.array([1, 0], dtype=complex),
        "g": np.array([0, 1], dtype=complex),
        "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
        "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
    }
    out = np.array([1], dtype=complex)
    for lab in labels:
        out = np.kron(out, table[lab])
    return out


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return validate_density_matrix(np.outer(psi, psi.conj()))


def singlet() -> DensityMatrix:
    return pure_state(ket("e", "g") - ket("g", "e"))


def maximally_mixed() -> DensityMatrix:
    return validate_density_matrix(np.eye(4) / 4)


def classical_example() -> DensityMatrix:
    """1/2 (|e><e| x |+><+| + |g><g| x |-><-|): zero discord from either side."""
    e, g, plus, minus = (np.outer(ket(x), ket(x).conj()) for x in "eg+-")
    return validate_density_matrix(0.5 * (np.kron(e, plus) + np.kron(g, minus)))


def quantum_example() -> DensityMatrix:
    """1/2 (|e><e| x |+><+| + |g><g| x |e><e|): discord only when B is measured."""
    e, g, plus = (np.outer(ket(x), ket(x).conj()) for x in "eg+")
    return validate_density_matrix(0.5 * (np.kron(e, plus) + np.kron(g, e)))
