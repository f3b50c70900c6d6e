"""
Exact diagonalization of the periodic spin chain

H = -sum_l [(1+gamma)/2 X_l X_l+1 + (1-gamma)/2 Y_l Y_l+1] - lambda sum_l Z_l
    + s * alpha * sum_l (X_l+1 Z_l Y_l-1 + Y_l+1 Z_l X_l-1)

in the Z basis (Z = diag(1, -1), site l at tensor position l - 1), used as a reference
for the free-fermion product formulas on chains of up to 12 spins.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Mapping, Tuple

import numpy as np
import scipy.linalg as la
from scipy import sparse

from utils.data_structures import ParameterDomainError, SignConvention

logger = logging.getLogger('qutrit_dephasing.oracle')

MIN_SITES = 3
MAX_SITES = 12
DEGENERACY_GAP = 1e-10

PAULI = {
    'i': sparse.identity(2, dtype=complex, format='csr'),
    'x': sparse.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex)),
    'y': sparse.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex)),
    'z': sparse.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex)),
}


@dataclass(frozen=True)
class SpinOperatorMatrix:
    """Pauli string on the chain as a sparse 2^n x 2^n matrix"""
    n: int
    factors: Tuple[Tuple[int, str], ...]
    matrix: sparse.csr_matrix

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _site(site: int, n: int) -> int:
    """Periodic 1-based site index: site n + 1 is site 1, site 0 is site n"""
    return (site - 1) % n + 1


def pauli_string(n: int, factors: Mapping[int, str]) -> SpinOperatorMatrix:
    """
    Tensor product with the given Pauli matrices on the listed sites and identity elsewhere.

    Args:
        n: Number of sites
        factors: Map from (periodic, 1-based) site to one of 'x', 'y', 'z'

    Returns:
        SpinOperatorMatrix: The operator in the Z basis
    """
    placed: Dict[int, str] = {}
    for site, label in factors.items():
        wrapped = _site(site, n)
        if wrapped in placed:
            raise ParameterDomainError(f"site {wrapped} appears twice in a Pauli string on {n} sites")
        if label not in ('x', 'y', 'z'):
            raise ParameterDomainError(f"unknown Pauli label '{label}'")
        placed[wrapped] = label

    operator = sparse.identity(1, dtype=complex, format='csr')
    for site in range(1, n + 1):
        operator = sparse.kron(operator, PAULI[placed.get(site, 'i')], format='csr')
    return SpinOperatorMatrix(n=n, factors=tuple(sorted(placed.items())), matrix=operator)


@dataclass(frozen=True)
class EnvHamiltonian:
    """Dense chain Hamiltonian at one field value"""
    n: int
    gamma: float
    alpha: float
    field_value: float
    sign_convention: SignConvention
    h: np.ndarray

    @property
    def dim(self) -> int:
        return self.h.shape[0]


def build_env_hamiltonian(n: int, gamma: float, alpha: float, field: float,
                          sign: SignConvention = SignConvention.AS_PRINTED) -> EnvHamiltonian:
    """Chain Hamiltonian with periodic boundaries; raises ParameterDomainError outside 3 <= n <= 12"""
    if isinstance(n, bool) or int(n) != n or not MIN_SITES <= n <= MAX_SITES:
        raise ParameterDomainError(f"exact diagonalization needs {MIN_SITES} <= n <= {MAX_SITES} (got {n})")
    n = int(n)
    dim = 2 ** n
    h = sparse.csr_matrix((dim, dim), dtype=complex)

    xx, yy = 0.5 * (1.0 + gamma), 0.5 * (1.0 - gamma)
    for site in range(1, n + 1):
        h = h - xx * pauli_string(n, {site: 'x', site + 1: 'x'}).matrix
        h = h - yy * pauli_string(n, {site: 'y', site + 1: 'y'}).matrix
        h = h - field * pauli_string(n, {site: 'z'}).matrix
        if alpha != 0.0:
            three_site = (pauli_string(n, {site + 1: 'x', site: 'z', site - 1: 'y'}).matrix
                          + pauli_string(n, {site + 1: 'y', site: 'z', site - 1: 'x'}).matrix)
            h = h + sign.factor * alpha * three_site

    return EnvHamiltonian(n=n, gamma=gamma, alpha=alpha, field_value=field,
                          sign_convention=sign, h=h.toarray())


def cyclic_shift_operator(n: int) -> np.ndarray:
    """Permutation moving the spin on site l to site l + 1 (site n wraps to site 1)"""
    dim = 2 ** n
    source = np.arange(dim)
    # Site l sits at bit n - l of the basis index; rotating the bits right moves every site by one
    target = (source >> 1) | ((source & 1) << (n - 1))
    shift = sparse.csr_matrix((np.ones(dim, dtype=complex), (target, source)), shape=(dim, dim))
    return shift.toarray()


@dataclass(frozen=True)
class GroundState:
    """Lowest eigenvector of an EnvHamiltonian, with the gap to the next level"""
    vector: np.ndarray
    energy: float
    gap: float

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_GAP


def _diagonalize(hamiltonian: EnvHamiltonian) -> Tuple[np.ndarray, np.ndarray]:
    logger.info(f"Diagonalizing chain: n={hamiltonian.n}, field={hamiltonian.field_value}, "
                f"dim={hamiltonian.dim}")
    return la.eigh(hamiltonian.h)


def _ground_from(energies: np.ndarray, vectors: np.ndarray, field: float) -> GroundState:
    gap = float(energies[1] - energies[0]) if len(energies) > 1 else float('inf')
    ground = GroundState(vector=vectors[:, 0].copy(), energy=float(energies[0]), gap=gap)
    if ground.degenerate:
        logger.warning(f"Degenerate ground space at field {field} (gap {gap:.3e}); "
                       f"an arbitrary ground vector is used")
    return ground


def ground_state(hamiltonian: EnvHamiltonian) -> GroundState:
    energies, vectors = _diagonalize(hamiltonian)
    return _ground_from(energies, vectors, hamiltonian.field_value)


def free_fermion_ground_energy(n: int, gamma: float, field: float) -> float:
    """
    Lowest energy of the even-parity sector of the alpha = 0 chain: -sum_k sqrt((field - cos k)^2 + gamma^2 sin^2 k)
    over the antiperiodic momenta k = pi (2m + 1) / n. At field 1 this is the global ground energy.
    """
    k = np.pi * (2.0 * np.arange(n) + 1.0) / n
    return float(-np.sum(np.sqrt((field - np.cos(k)) ** 2 + gamma ** 2 * np.sin(k) ** 2)))


class EchoOracle:
    """
    Echo overlaps <G| e^{i H(lambda_nu) t} e^{-i H(lambda_mu) t} |G> for one chain.

    |G> is the ground state of H at the bare field eta. Eigendecompositions are cached per field,
    so evaluating many times and field pairs costs one diagonalization per distinct field.
    """

    def __init__(self, n: int, gamma: float, alpha: float, eta: float,
                 sign: SignConvention = SignConvention.AS_PRINTED):
        self.n = n
        self.gamma = gamma
        self.alpha = alpha
        self.eta = eta
        self.sign = sign
        self._eigen: Dict[float, Tuple[np.ndarray, np.ndarray]] = {}
        self._projections: Dict[float, np.ndarray] = {}

        energies, vectors = self._eigensystem(eta)
        self.ground = _ground_from(energies, vectors, eta)

    @property
    def degenerate(self) -> bool:
        return self.ground.degenerate

    def _eigensystem(self, field: float) -> Tuple[np.ndarray, np.ndarray]:
        if field not in self._eigen:
            hamiltonian = build_env_hamiltonian(self.n, self.gamma, self.alpha, field, self.sign)
            self._eigen[field] = _diagonalize(hamiltonian)
        return self._eigen[field]

    def evolve(self, field: float, t: float) -> np.ndarray:
        """e^{-i H(field) t} |G>"""
        energies, vectors = self._eigensystem(field)
        if field not in self._projections:
            self._projections[field] = vectors.conj().T @ self.ground.vector
        return vectors @ (np.exp(-1j * energies * t) * self._projections[field])

    def factor(self, t: float, lambda_mu: float, lambda_nu: float) -> complex:
        return complex(np.vdot(self.evolve(lambda_nu, t), self.evolve(lambda_mu, t)))

    def factor_magnitudes(self, times, lambda_mu: float, lambda_nu: float) -> np.ndarray:
        return np.array([abs(self.factor(float(t), lambda_mu, lambda_nu)) for t in times])


@lru_cache(maxsize=8)
def echo_oracle(n: int, gamma: float, alpha: float, eta: float,
                sign: SignConvention = SignConvention.AS_PRINTED) -> EchoOracle:
    return EchoOracle(n, gamma, alpha, eta, sign)


def exact_factor(t: float, n: int, gamma: float, alpha: float, eta: float, lambda_mu: float,
                 lambda_nu: float, sign: SignConvention = SignConvention.AS_PRINTED) -> complex:
    """Reference decoherence factor from exact time evolution of the chain"""
    return echo_oracle(n, gamma, alpha, eta, sign).factor(t, lambda_mu, lambda_nu)
