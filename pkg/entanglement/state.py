"""
Two-qutrit density matrix evolved under pure dephasing, and its negativity.

Basis |ij> maps to index 3*i + j with qutrit A first. Levels |0>, |1>, |2> carry the
spin projections +1, 0, -1, so |00>, |11>, |22> pair with fields lambda_1, lambda_5, lambda_9.
"""
import numpy as np

from entanglement.linalg import hermitian_eigenvalues
from utils.data_structures import DecoherenceSet, NegativityPoint, ParameterDomainError, TwoQutritState

MAGNITUDE_TOLERANCE = 1e-9

# Indices of |00>, |11>, |22>
DIAGONAL_SLOTS = (0, 4, 8)


def initial_state() -> TwoQutritState:
    """Maximally entangled (|00> + |11> + |22>)/sqrt(3) as a density matrix"""
    rho = np.zeros((9, 9), dtype=complex)
    for row in DIAGONAL_SLOTS:
        for col in DIAGONAL_SLOTS:
            rho[row, col] = 1.0 / 3.0
    return TwoQutritState(rho)


def evolved_state(factors: DecoherenceSet) -> TwoQutritState:
    """
    Dephased state: populations stay 1/3, coherences are scaled by the decoherence factors.

    Args:
        factors: F_15, F_19, F_59 at a common time

    Returns:
        TwoQutritState: Hermitian, unit trace, positive semidefinite
    """
    for name, value in zip(('f15', 'f19', 'f59'), (factors.f15, factors.f19, factors.f59)):
        if abs(value) > 1.0 + MAGNITUDE_TOLERANCE:
            raise ParameterDomainError(
                f"|{name}| = {abs(value):.17g} exceeds 1; the state would not be positive")

    rho = np.zeros((9, 9), dtype=complex)
    for slot in DIAGONAL_SLOTS:
        rho[slot, slot] = 1.0 / 3.0
    for (row, col), value in (((0, 4), factors.f15), ((0, 8), factors.f19), ((4, 8), factors.f59)):
        rho[row, col] = value / 3.0
        rho[col, row] = np.conj(value) / 3.0
    return TwoQutritState(rho)


def partial_transpose(state: TwoQutritState) -> np.ndarray:
    """Transpose on qutrit A: entry ((i,j),(k,l)) becomes entry ((k,j),(i,l))"""
    return state.rho.reshape(3, 3, 3, 3).transpose(2, 1, 0, 3).reshape(9, 9)


def partial_transpose_spectrum(state: TwoQutritState) -> np.ndarray:
    """Ascending eigenvalues of the partially transposed state"""
    return hermitian_eigenvalues(partial_transpose(state))


def negativity_spectral(state: TwoQutritState) -> float:
    """(trace norm of the partial transpose - 1) / 2"""
    eigenvalues = partial_transpose_spectrum(state)
    return float((np.sum(np.abs(eigenvalues)) - 1.0) / 2.0)


def negativity_closed_form(f15_mag: float, f19_mag: float, f59_mag: float) -> float:
    """Negativity of the dephased state from the factor magnitudes: their mean"""
    for name, value in (('f15', f15_mag), ('f19', f19_mag), ('f59', f59_mag)):
        if not -MAGNITUDE_TOLERANCE <= value <= 1.0 + MAGNITUDE_TOLERANCE:
            raise ParameterDomainError(f"|{name}| must lie in [0, 1] (got {value})")
    value = (f15_mag + f19_mag + f59_mag) / 3.0
    return min(1.0, max(0.0, value))


def negativity_point(t: float, factors: DecoherenceSet) -> NegativityPoint:
    return NegativityPoint(t=t, n_value=negativity_closed_form(*factors.magnitudes()))
