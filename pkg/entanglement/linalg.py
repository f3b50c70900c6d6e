"""
Cyclic Jacobi eigensolver for small dense complex Hermitian matrices.

Each rotation first removes the phase of the pivot a_pq and then applies the real Jacobi
rotation that annihilates it, so the accumulated transform stays unitary.
"""
import logging
import math
from typing import Tuple

import numpy as np

logger = logging.getLogger('qutrit_dephasing.linalg')

HERMITIAN_TOLERANCE = 1e-10
CONVERGENCE_TOLERANCE = 1e-13
MAX_SWEEPS = 60
# Pivots at or below this fraction of their diagonal entries are zeroed without a rotation
NEGLIGIBLE_PIVOT = 1e-3 * np.finfo(float).eps
TINY = np.finfo(float).tiny


class NotHermitianError(ValueError):
    """Raised when a matrix handed to the Hermitian solver is not Hermitian"""
    pass


class EigensolverConvergenceError(ArithmeticError):
    """Raised when the Jacobi sweeps do not reduce the off-diagonal norm below tolerance"""
    pass


def _check_hermitian(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix (got shape {a.shape})")
    if not np.all(np.isfinite(a)):
        raise NotHermitianError("matrix has non-finite entries")
    deviation = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if deviation > HERMITIAN_TOLERANCE:
        raise NotHermitianError(f"matrix is not Hermitian: max |m - m^H| = {deviation:.3e}")
    return 0.5 * (a + a.conj().T)


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int):
    b = complex(a[p, q])
    magnitude = abs(b)
    a_pp, a_qq = float(a[p, p].real), float(a[q, q].real)
    if magnitude < TINY or magnitude <= NEGLIGIBLE_PIVOT * (abs(a_pp) + abs(a_qq)):
        a[p, q] = 0.0
        a[q, p] = 0.0
        return
    phase = complex(b.real / magnitude, b.imag / magnitude)
    tau = (a_qq - a_pp) / (2.0 * magnitude)
    if tau == 0.0:
        t = 1.0
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    block = np.array([[c, s],
                      [-s * phase.conjugate(), c * phase.conjugate()]], dtype=complex)
    pq = [p, q]
    a[:, pq] = a[:, pq] @ block
    a[pq, :] = block.conj().T @ a[pq, :]
    v[:, pq] = v[:, pq] @ block
    a[p, q] = 0.0
    a[q, p] = 0.0


def hermitian_eigensystem(m) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues and eigenvectors of a complex Hermitian matrix.

    Args:
        m: Square complex matrix, Hermitian to 1e-10

    Returns:
        tuple: (ascending real eigenvalues, unitary matrix whose columns are the eigenvectors)
    """
    a = _check_hermitian(m)
    size = a.shape[0]
    v = np.eye(size, dtype=complex)
    tolerance = CONVERGENCE_TOLERANCE * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_diagonal_norm(a) > tolerance:
        if sweeps >= MAX_SWEEPS:
            raise EigensolverConvergenceError(
                f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {_off_diagonal_norm(a):.3e})")
        for p in range(size - 1):
            for q in range(p + 1, size):
                _rotate(a, v, p, q)
        sweeps += 1
    logger.debug(f"Jacobi converged after {sweeps} sweep(s) for a {size}x{size} matrix")

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind='stable')
    return values[order], v[:, order]


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real eigenvalues of a complex Hermitian matrix"""
    values, _ = hermitian_eigensystem(m)
    return values
