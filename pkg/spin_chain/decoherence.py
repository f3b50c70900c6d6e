"""
Decoherence factors F_mu,nu(t) as products over the paired chain modes.

Two evaluation paths:
- factor_complex: the complex per-mode overlap, multiplied in log-polar form
- factor_magnitude: the literal per-mode radicand of the |F| formula, square-rooted and multiplied

With the lambda variant (Lambda energies in every exponent) |factor_complex| equals
factor_magnitude identically. The xi-as-printed variant uses xi with equal exponent signs, for comparison.
"""
import cmath
import logging
import math
from typing import Iterable, List, Tuple

import numpy as np

from spin_chain.spectrum import (SpectralTable, big_lambda, lambda_table, spectral_table,
                                 theta, xi)
from utils.data_structures import (ChainParams, DecoherenceFactor, DecoherenceSet, FactorVariant,
                                   MomentumSector, QutritCoupling)

logger = logging.getLogger('qutrit_dephasing.decoherence')

# Per-mode magnitudes at or below this short-circuit the product to exact zero
UNDERFLOW_FLOOR = 1e-300
RADICAND_TOLERANCE = 1e-12

# (mu, nu) pairs entering the evolved two-qutrit state
STATE_PAIRS = ((1, 5), (1, 9), (5, 9))


class RadicandError(ArithmeticError):
    """Raised when a per-mode radicand leaves [-tol, 1 + tol]; roundoff cannot explain it"""
    pass


def _mode_terms(t: float, theta_eta, theta_mu, theta_nu, energy_mu, energy_nu,
                variant: FactorVariant = FactorVariant.LAMBDA):
    """
    Per-mode complex factor.

    For the lambda variant the mu exponent is e^{-2it E_mu} and the nu exponent e^{+2it E_nu},
    which makes the bracket the overlap <psi_nu(t)|psi_mu(t)> of the two evolved mode states.
    """
    s_mu = np.sin(0.5 * (theta_mu - theta_eta))
    s_nu = np.sin(0.5 * (theta_nu - theta_eta))
    c_mu_nu = np.cos(0.5 * (theta_mu - theta_nu))
    if variant is FactorVariant.LAMBDA:
        u_mu = 1.0 - np.exp(-2j * t * energy_mu)
        u_nu = 1.0 - np.exp(2j * t * energy_nu)
    else:
        u_mu = 1.0 - np.exp(2j * t * energy_mu)
        u_nu = 1.0 - np.exp(2j * t * energy_nu)
    prefactor = np.exp(1j * t * (energy_mu - energy_nu))
    bracket = u_mu * u_nu * s_mu * s_nu * c_mu_nu - u_mu * s_mu ** 2 - u_nu * s_nu ** 2 + 1.0
    return prefactor * bracket


def _energies(table: SpectralTable, variant: FactorVariant) -> np.ndarray:
    return table.big_lambda if variant is FactorVariant.LAMBDA else table.xi


def stable_product(terms: np.ndarray) -> complex:
    """
    Product of complex terms accumulated as a sum of log-magnitudes and a sum of phases.

    Any term with magnitude <= UNDERFLOW_FLOOR makes the product exactly zero.
    """
    magnitudes = np.abs(terms)
    if magnitudes.size and magnitudes.min() <= UNDERFLOW_FLOOR:
        return 0j
    log_magnitude = float(np.sum(np.log(magnitudes)))
    phase = float(np.sum(np.angle(terms)))
    return cmath.rect(math.exp(log_magnitude), phase)


def magnitude_product(magnitudes: np.ndarray) -> float:
    """Product of non-negative reals via their log sum, with the same zero short-circuit"""
    if magnitudes.size and magnitudes.min() <= UNDERFLOW_FLOOR:
        return 0.0
    return math.exp(float(np.sum(np.log(magnitudes))))


def mode_factor(k: int, t: float, params: ChainParams, lambda_mu: float, lambda_nu: float,
                variant: FactorVariant = FactorVariant.LAMBDA) -> complex:
    """Per-mode factor of mode k; theta^eta is the angle at the unshifted field eta"""
    n, gamma, alpha = params.n, params.gamma, params.alpha
    if variant is FactorVariant.LAMBDA:
        energy_mu = big_lambda(k, n, gamma, alpha, lambda_mu)
        energy_nu = big_lambda(k, n, gamma, alpha, lambda_nu)
    else:
        energy_mu = xi(k, n, gamma, lambda_mu)
        energy_nu = xi(k, n, gamma, lambda_nu)
    value = _mode_terms(
        t,
        theta(k, n, gamma, params.eta),
        theta(k, n, gamma, lambda_mu),
        theta(k, n, gamma, lambda_nu),
        energy_mu,
        energy_nu,
        variant,
    )
    return complex(value)


def mode_factors_from_tables(t: float, eta_table: SpectralTable, mu_table: SpectralTable,
                             nu_table: SpectralTable,
                             variant: FactorVariant = FactorVariant.LAMBDA) -> np.ndarray:
    """Per-mode factors for all k = 1..M from precomputed spectral tables"""
    return _mode_terms(t, eta_table.theta, mu_table.theta, nu_table.theta,
                       _energies(mu_table, variant), _energies(nu_table, variant), variant)


def factor_complex_from_tables(t: float, eta_table: SpectralTable, mu_table: SpectralTable,
                               nu_table: SpectralTable,
                               variant: FactorVariant = FactorVariant.LAMBDA) -> complex:
    return stable_product(mode_factors_from_tables(t, eta_table, mu_table, nu_table, variant))


def radicands_from_tables(t: float, eta_table: SpectralTable, mu_table: SpectralTable,
                          nu_table: SpectralTable) -> np.ndarray:
    """Unclamped per-mode radicands of the |F| product formula"""
    d_mu = np.sin(eta_table.theta - mu_table.theta)
    d_nu = np.sin(eta_table.theta - nu_table.theta)
    half_gap = np.sin(0.5 * (mu_table.theta - nu_table.theta))
    phase_mu = t * mu_table.big_lambda
    phase_nu = t * nu_table.big_lambda
    sin_mu = np.sin(phase_mu)
    sin_nu = np.sin(phase_nu)
    return (-4.0 * d_mu * d_nu * half_gap ** 2 * sin_mu ** 2 * sin_nu ** 2
            + 2.0 * d_mu * d_nu * sin_mu * sin_nu * np.cos(phase_mu - phase_nu)
            - d_mu ** 2 * sin_mu ** 2
            - d_nu ** 2 * sin_nu ** 2
            + 1.0)


def factor_magnitude_from_tables(t: float, eta_table: SpectralTable, mu_table: SpectralTable,
                                 nu_table: SpectralTable) -> float:
    radicands = radicands_from_tables(t, eta_table, mu_table, nu_table)
    low, high = float(radicands.min()), float(radicands.max())
    if low < -RADICAND_TOLERANCE or high > 1.0 + RADICAND_TOLERANCE:
        raise RadicandError(
            f"per-mode radicand outside [0, 1] beyond roundoff: min={low:.3e}, max={high:.17g} "
            f"(t={t}, fields {mu_table.field}, {nu_table.field})")
    return magnitude_product(np.sqrt(np.clip(radicands, 0.0, 1.0)))


def _tables(params: ChainParams, *fields: float,
            sector: MomentumSector = MomentumSector.PERIODIC) -> List[SpectralTable]:
    return [spectral_table(params.n, params.gamma, params.alpha, value, sector) for value in fields]


def factor_complex(t: float, params: ChainParams, lambda_mu: float, lambda_nu: float,
                   variant: FactorVariant = FactorVariant.LAMBDA) -> complex:
    """
    Complex decoherence factor F_mu,nu(t).

    Args:
        t: Time
        params: Chain parameters
        lambda_mu: Field of the mu branch
        lambda_nu: Field of the nu branch
        variant: Energies used in the exponents (Lambda by default)

    Returns:
        complex: Product of the per-mode factors over k = 1..M
    """
    eta_table, mu_table, nu_table = _tables(params, params.eta, lambda_mu, lambda_nu)
    return factor_complex_from_tables(t, eta_table, mu_table, nu_table, variant)


def factor_magnitude(t: float, params: ChainParams, lambda_mu: float, lambda_nu: float,
                     sector: MomentumSector = MomentumSector.PERIODIC) -> float:
    """
    |F_mu,nu(t)| as the product of square-rooted per-mode radicands, in [0, 1].

    The antiperiodic sector takes the product over pi*(2m + 1)/n instead of 2*pi*k/n; that is
    the momentum grid of the even-parity ground state of a finite periodic spin chain.
    """
    eta_table, mu_table, nu_table = _tables(params, params.eta, lambda_mu, lambda_nu, sector=sector)
    return factor_magnitude_from_tables(t, eta_table, mu_table, nu_table)


def factors_for_state(t: float, params: ChainParams, coupling: QutritCoupling,
                      variant: FactorVariant = FactorVariant.LAMBDA) -> DecoherenceSet:
    """F_15, F_19 and F_59 at time t"""
    fields = lambda_table(params.eta, coupling)
    f15, f19, f59 = (factor_complex(t, params, fields[mu], fields[nu], variant)
                     for mu, nu in STATE_PAIRS)
    return DecoherenceSet(f15=f15, f19=f19, f59=f59)


def decoherence_factors(t: float, params: ChainParams, coupling: QutritCoupling,
                        pairs: Iterable[Tuple[int, int]] = STATE_PAIRS,
                        variant: FactorVariant = FactorVariant.LAMBDA) -> List[DecoherenceFactor]:
    """DecoherenceFactor records for arbitrary (mu, nu) index pairs of the nine-field table"""
    fields = lambda_table(params.eta, coupling)
    return [
        DecoherenceFactor(mu=mu, nu=nu, t=t,
                          value=factor_complex(t, params, fields[mu], fields[nu], variant))
        for mu, nu in pairs
    ]
