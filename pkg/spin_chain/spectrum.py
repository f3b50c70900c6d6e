"""
Shifted-field table and per-mode spectral quantities of the XY chain with three-site interaction.

Every quantity is a function of the momentum phase 2*pi*k/n for the paired modes k = 1..M,
M = (n - 1) / 2. The unpaired k = 0 mode contributes unit magnitude to every decoherence
factor and is left out. Spectral tables can also be built on the antiperiodic phases
pi*(2m + 1)/n, m = 0..M-1, where the unpaired mode sits at pi.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from utils.data_structures import (LambdaTable, ModeSet, ModeSpectrum, MomentumSector, ParameterDomainError,
                                   QutritCoupling)

logger = logging.getLogger('qutrit_dephasing.spectrum')

ModeIndex = Union[int, np.ndarray]


def lambda_table(eta: float, coupling: QutritCoupling) -> LambdaTable:
    """
    Effective transverse field seen by the chain for each two-qutrit basis state.

    Args:
        eta: Transverse field of the bare chain
        coupling: Qutrit-chain coupling strengths

    Returns:
        LambdaTable: lambda_1..lambda_9, lambda_5 == eta
    """
    g_a, g_b = coupling.g_a, coupling.g_b
    return LambdaTable((
        eta + g_a + g_b,
        eta + g_a,
        eta + g_a - g_b,
        eta + g_b,
        eta,
        eta - g_b,
        eta - g_a + g_b,
        eta - g_a,
        eta - g_a - g_b,
    ))


def mode_set(n: int, sector: MomentumSector = MomentumSector.PERIODIC) -> ModeSet:
    """Paired momentum modes of an odd chain of n spins"""
    if isinstance(n, bool) or int(n) != n or n < 3 or n % 2 == 0:
        raise ParameterDomainError(f"n must be odd and >= 3 (got {n})")
    m = (int(n) - 1) // 2
    k = np.arange(1, m + 1)
    if sector is MomentumSector.ANTIPERIODIC:
        return ModeSet(m=m, phases=_frozen(np.pi * (2.0 * k - 1.0) / n))
    return ModeSet(m=m, phases=_frozen(2.0 * np.pi * k / n))


def _check_mode_range(k: ModeIndex, n: int):
    k_arr = np.asarray(k)
    if k_arr.size and (k_arr.min() < 1 or k_arr.max() > (n - 1) // 2):
        raise ParameterDomainError(f"mode index must lie in 1..{(n - 1) // 2} for n={n}")


def _phase(k: ModeIndex, n: int):
    return 2.0 * np.pi * np.asarray(k, dtype=float) / n


def _radius(phase, gamma: float, field: float):
    return np.sqrt(gamma ** 2 * np.sin(phase) ** 2 + (field - np.cos(phase)) ** 2)


def xi(k: ModeIndex, n: int, gamma: float, field: float):
    """Single-mode energy 2*sqrt(gamma^2 sin^2(2 pi k/n) + (lambda - cos(2 pi k/n))^2)"""
    _check_mode_range(k, n)
    value = 2.0 * _radius(_phase(k, n), gamma, field)
    return float(value) if np.ndim(value) == 0 else value


def big_lambda(k: ModeIndex, n: int, gamma: float, alpha: float, field: float):
    """Mode energy shifted by the three-site term: xi + 2*alpha*sin(4 pi k/n)"""
    _check_mode_range(k, n)
    shift = 2.0 * alpha * np.sin(2.0 * _phase(k, n))
    value = 2.0 * _radius(_phase(k, n), gamma, field) + shift
    return float(value) if np.ndim(value) == 0 else value


def _angle(phase, gamma: float, field: float):
    x = field - np.cos(phase)
    # + 0.0 turns a signed zero into +0.0 so the branch at y == 0 is pi, not -pi
    y = gamma * np.sin(phase) + 0.0
    angle = np.arctan2(y, x)
    angle = np.where(angle < 0.0, angle + np.pi, angle)
    degenerate = (x == 0.0) & (y == 0.0)
    return np.where(degenerate, 0.0, angle), degenerate


def theta(k: ModeIndex, n: int, gamma: float, field: float):
    """
    Bogoliubov angle of mode k at field lambda.

    Angle of (lambda - cos(2 pi k/n), gamma sin(2 pi k/n)) from a two-argument arctangent,
    folded into [0, pi]. A gapless mode (both components zero) yields 0; see is_degenerate.
    """
    _check_mode_range(k, n)
    value, _ = _angle(_phase(k, n), gamma, field)
    return float(value) if np.ndim(value) == 0 else value


def is_degenerate(k: ModeIndex, n: int, gamma: float, field: float):
    """True where the mode is gapless and its angle is undefined"""
    _check_mode_range(k, n)
    _, degenerate = _angle(_phase(k, n), gamma, field)
    return bool(degenerate) if np.ndim(degenerate) == 0 else degenerate


def mode_spectrum(k: int, n: int, gamma: float, alpha: float, field: float) -> ModeSpectrum:
    """All spectral quantities of one (k, lambda) pair"""
    angle, degenerate = _angle(_phase(k, n), gamma, field)
    return ModeSpectrum(
        k=int(k),
        field=field,
        xi=xi(k, n, gamma, field),
        big_lambda=big_lambda(k, n, gamma, alpha, field),
        theta=float(angle),
        degenerate=bool(degenerate),
    )


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SpectralTable:
    """Per-mode xi, Lambda and theta of one field value, shared by every time point"""
    n: int
    gamma: float
    alpha: float
    field: float
    k: np.ndarray
    xi: np.ndarray
    big_lambda: np.ndarray
    theta: np.ndarray
    degenerate: np.ndarray
    sector: MomentumSector = MomentumSector.PERIODIC

    @classmethod
    def build(cls, n: int, gamma: float, alpha: float, field: float,
              sector: MomentumSector = MomentumSector.PERIODIC) -> 'SpectralTable':
        modes = mode_set(n, sector)
        k = np.arange(1, modes.m + 1)
        phases = modes.phases
        radius = _radius(phases, gamma, field)
        angle, degenerate = _angle(phases, gamma, field)
        table = cls(
            n=n,
            gamma=gamma,
            alpha=alpha,
            field=field,
            k=_frozen(k),
            xi=_frozen(2.0 * radius),
            big_lambda=_frozen(2.0 * radius + 2.0 * alpha * np.sin(2.0 * phases)),
            theta=_frozen(np.asarray(angle, dtype=float)),
            degenerate=_frozen(np.asarray(degenerate, dtype=bool)),
            sector=sector,
        )
        if table.degenerate_count:
            logger.warning(f"{table.degenerate_count} gapless mode(s) at field {field} "
                           f"(n={n}, gamma={gamma}); their angle is set to 0")
        return table

    @property
    def degenerate_count(self) -> int:
        return int(np.count_nonzero(self.degenerate))

    @property
    def m(self) -> int:
        return len(self.k)


@lru_cache(maxsize=256)
def spectral_table(n: int, gamma: float, alpha: float, field: float,
                   sector: MomentumSector = MomentumSector.PERIODIC) -> SpectralTable:
    """Memoized SpectralTable; tables are immutable so sharing them between threads is safe"""
    return SpectralTable.build(n, gamma, alpha, field, sector)


