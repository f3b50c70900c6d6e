"""
Validation suite behind the `validate` command.

Gating checks compare independent evaluations of the same quantity (complex factor against the
magnitude formula, closed-form negativity against the eigensolver, exact evolution bounds).
Exact diagonalization is checked against the magnitude formula taken over the antiperiodic momenta,
the grid the even-parity ground state of a periodic spin chain lives on; that comparison gates.
The comparison with the default periodic grid and the sign determination are reported without gating:
the periodic grid differs from the finite spin chain by boundary terms, and the exact echo magnitude
does not change under alpha -> -alpha, so no sign can be singled out from it.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from entanglement.state import (evolved_state, negativity_closed_form, negativity_spectral,
                                partial_transpose_spectrum)
from oracle.exact_diagonalization import EchoOracle
from spin_chain.decoherence import factor_complex, factor_magnitude, factors_for_state
from utils.data_structures import ChainParams, DecoherenceSet, MomentumSector, QutritCoupling, SignConvention

logger = logging.getLogger('qutrit_dephasing.validation')

FACTOR_TOLERANCE = 1e-10
NEGATIVITY_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
SECTOR_TOLERANCE = 1e-10
SUITE_SIZES = (7, 101, 3001)


@dataclass
class ValidationCheck:
    """Outcome of one named check"""
    name: str
    passed: bool
    metric: float
    threshold: float
    gating: bool = True
    detail: str = ''


@dataclass
class ConvergenceReport:
    """Max deviation of |exact_factor| from factor_magnitude per chain size, on both momentum grids"""
    sizes: List[int]
    deviations: List[float]
    sector_deviations: List[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(later < earlier for earlier, later in zip(self.deviations, self.deviations[1:]))


@dataclass
class SignReport:
    """How well each three-site sign reproduces the alpha dependence of the magnitude formula"""
    deviations: Dict[str, float]
    selected: Optional[SignConvention]
    margin: float


@dataclass
class ValidationReport:
    checks: List[ValidationCheck] = field(default_factory=list)
    convergence: Optional[ConvergenceReport] = None
    sign: Optional[SignReport] = None
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.gating)

    def failures(self) -> List[ValidationCheck]:
        return [check for check in self.checks if check.gating and not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            'passed': self.passed,
            'elapsed_s': self.elapsed_s,
            'checks': [asdict(check) for check in self.checks],
        }
        if self.convergence is not None:
            report['convergence'] = {
                'sizes': self.convergence.sizes,
                'max_deviation': self.convergence.deviations,
                'monotone': self.convergence.monotone,
                'antiperiodic_max_deviation': self.convergence.sector_deviations,
            }
        if self.sign is not None:
            report['sign_determination'] = {
                'deviations': self.sign.deviations,
                'selected': self.sign.selected.value if self.sign.selected else None,
                'margin': self.sign.margin,
            }
        return report


def _product_magnitudes(times: Sequence[float], params: ChainParams, lambda_mu: float, lambda_nu: float,
                        sector: MomentumSector = MomentumSector.PERIODIC) -> np.ndarray:
    return np.array([factor_magnitude(float(t), params, lambda_mu, lambda_nu, sector) for t in times])


def convergence_check(sizes: Sequence[int], gamma: float = 1.0, alpha: float = 0.0, eta: float = 1.0,
                      g: float = 0.1, times: Optional[Sequence[float]] = None,
                      sign: SignConvention = SignConvention.AS_PRINTED) -> ConvergenceReport:
    """
    Compare |exact_factor| with factor_magnitude for the pair (eta + g, eta) on each chain size.

    Args:
        sizes: Odd chain lengths, each at most 12
        gamma, alpha, eta: Chain parameters
        g: Field shift of the mu branch
        times: Evaluation times (default 51 points on [0, 5])
        sign: Three-site sign used by the exact Hamiltonian

    Returns:
        ConvergenceReport: One max deviation per size against each momentum grid
    """
    times = np.linspace(0.0, 5.0, 51) if times is None else np.asarray(times, dtype=float)
    lambda_mu, lambda_nu = eta + g, eta
    deviations, sector_deviations = [], []
    for n in sizes:
        oracle = EchoOracle(n, gamma, alpha, eta, sign)
        exact = oracle.factor_magnitudes(times, lambda_mu, lambda_nu)
        params = ChainParams(n, gamma, alpha, eta)
        product = _product_magnitudes(times, params, lambda_mu, lambda_nu)
        antiperiodic = _product_magnitudes(times, params, lambda_mu, lambda_nu, MomentumSector.ANTIPERIODIC)
        deviation = float(np.max(np.abs(exact - product)))
        sector_deviation = float(np.max(np.abs(exact - antiperiodic)))
        logger.info(f"ED comparison n={n}: max | |F_exact| - |F_product| | = {deviation:.3e} periodic, "
                    f"{sector_deviation:.3e} antiperiodic")
        deviations.append(deviation)
        sector_deviations.append(sector_deviation)
    return ConvergenceReport(sizes=list(sizes), deviations=deviations, sector_deviations=sector_deviations)


def determine_sign_convention(n: int = 7, gamma: float = 1.0, eta: float = 1.0, g: float = 0.1,
                              alpha: float = 0.5, times: Optional[Sequence[float]] = None,
                              margin: float = 1e-6) -> SignReport:
    """
    Pick the three-site sign whose exact alpha dependence matches the product formula.

    The alpha dependence is the difference of magnitudes at +alpha and -alpha. A sign is selected only
    when its deviation beats the other by more than `margin`; otherwise `selected` is None. The exact
    echo magnitude is even in alpha, so on the default ground-state echo both signs tie.
    """
    times = np.linspace(0.0, 5.0, 51) if times is None else np.asarray(times, dtype=float)
    lambda_mu, lambda_nu = eta + g, eta

    product_shift = (_product_magnitudes(times, ChainParams(n, gamma, alpha, eta), lambda_mu, lambda_nu)
                     - _product_magnitudes(times, ChainParams(n, gamma, -alpha, eta), lambda_mu, lambda_nu))
    deviations = {}
    for sign in SignConvention:
        plus = EchoOracle(n, gamma, alpha, eta, sign).factor_magnitudes(times, lambda_mu, lambda_nu)
        minus = EchoOracle(n, gamma, -alpha, eta, sign).factor_magnitudes(times, lambda_mu, lambda_nu)
        deviations[sign.value] = float(np.max(np.abs((plus - minus) - product_shift)))

    as_printed = deviations[SignConvention.AS_PRINTED.value]
    flipped = deviations[SignConvention.FLIPPED.value]
    selected = None
    if abs(as_printed - flipped) > margin:
        selected = SignConvention.AS_PRINTED if as_printed < flipped else SignConvention.FLIPPED
    logger.info(f"Sign determination at n={n}, alpha=+/-{alpha}: deviations {deviations}, "
                f"selected {selected.value if selected else 'none'}")
    return SignReport(deviations=deviations, selected=selected, margin=margin)


def _random_params(rng: np.random.Generator) -> ChainParams:
    return ChainParams(
        n=int(rng.choice(SUITE_SIZES)),
        gamma=float(rng.uniform(0.1, 1.5)),
        alpha=float(rng.uniform(-1.0, 1.0)),
        eta=float(rng.uniform(0.0, 1.5)),
    )


def _random_coupling(rng: np.random.Generator) -> QutritCoupling:
    return QutritCoupling(g_a=float(rng.uniform(0.0, 0.2)), g_b=float(rng.uniform(0.0, 0.2)))


def _identity_check(rng: np.random.Generator, draws: int) -> ValidationCheck:
    worst = 0.0
    for _ in range(draws):
        params = _random_params(rng)
        at_zero = factors_for_state(0.0, params, _random_coupling(rng))
        uncoupled = factors_for_state(float(rng.uniform(0.0, 50.0)), params, QutritCoupling(0.0, 0.0))
        for factors in (at_zero, uncoupled):
            worst = max(worst, abs(negativity_closed_form(*factors.magnitudes()) - 1.0))
    return ValidationCheck('identity', worst <= IDENTITY_TOLERANCE, worst, IDENTITY_TOLERANCE,
                           detail=f'N(0) = 1 and g = 0 => N = 1 over {draws} draws')


def _factor_consistency_check(rng: np.random.Generator, draws: int) -> ValidationCheck:
    worst = 0.0
    for _ in range(draws):
        params = _random_params(rng)
        eta = params.eta
        lambda_mu = eta + float(rng.uniform(-0.2, 0.2))
        lambda_nu = eta + float(rng.uniform(-0.2, 0.2))
        t = float(rng.uniform(0.0, 50.0))
        deviation = abs(abs(factor_complex(t, params, lambda_mu, lambda_nu))
                        - factor_magnitude(t, params, lambda_mu, lambda_nu))
        worst = max(worst, deviation)
    return ValidationCheck('factor_consistency', worst <= FACTOR_TOLERANCE, worst, FACTOR_TOLERANCE,
                           detail=f'| |F complex| - |F| formula | over {draws} draws')


def _random_factors(rng: np.random.Generator) -> DecoherenceSet:
    magnitudes = rng.uniform(0.0, 1.0, size=3)
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=3))
    f15, f19, f59 = (complex(value) for value in magnitudes * phases)
    return DecoherenceSet(f15=f15, f19=f19, f59=f59)


def _negativity_checks(rng: np.random.Generator, draws: int) -> List[ValidationCheck]:
    worst_negativity = 0.0
    worst_spectrum = 0.0
    for _ in range(draws):
        factors = _random_factors(rng)
        state = evolved_state(factors)
        closed = negativity_closed_form(*factors.magnitudes())
        worst_negativity = max(worst_negativity, abs(negativity_spectral(state) - closed))

        expected = np.sort(np.concatenate([
            np.full(3, 1.0 / 3.0),
            np.array(factors.magnitudes()) / 3.0,
            -np.array(factors.magnitudes()) / 3.0,
        ]))
        worst_spectrum = max(worst_spectrum,
                             float(np.max(np.abs(partial_transpose_spectrum(state) - expected))))
    return [
        ValidationCheck('negativity_closed_form', worst_negativity <= NEGATIVITY_TOLERANCE,
                        worst_negativity, NEGATIVITY_TOLERANCE,
                        detail=f'spectral vs closed-form negativity over {draws} factor sets'),
        ValidationCheck('partial_transpose_spectrum', worst_spectrum <= NEGATIVITY_TOLERANCE,
                        worst_spectrum, NEGATIVITY_TOLERANCE,
                        detail='three eigenvalues 1/3 plus +/-|F|/3 pairs'),
    ]


def _exact_bounds_check(n: int, sign: SignConvention) -> ValidationCheck:
    oracle = EchoOracle(n, 1.0, 0.0, 1.0, sign)
    times = np.linspace(0.0, 5.0, 51)
    shifted = oracle.factor_magnitudes(times, 1.1, 1.0)
    same = oracle.factor_magnitudes(times, 1.1, 1.1)
    worst = max(float(np.max(shifted)) - 1.0, float(np.max(np.abs(same - 1.0))), 0.0)
    return ValidationCheck('exact_factor_bounds', worst <= FACTOR_TOLERANCE, worst, FACTOR_TOLERANCE,
                           detail=f'|F_exact| <= 1 and |F_exact(mu = nu)| = 1 at n={n}')


def run_validation_suite(sizes: Sequence[int] = (7, 9, 11), seed: int = 0,
                         sign: SignConvention = SignConvention.AS_PRINTED,
                         identity_draws: int = 100, factor_draws: int = 500,
                         negativity_draws: int = 1000) -> ValidationReport:
    """
    Run every check and the exact-diagonalization comparisons.

    Args:
        sizes: Chain lengths for the exact-diagonalization comparison
        seed: Seed of the random parameter draws
        sign: Three-site sign used by the exact Hamiltonian
        identity_draws, factor_draws, negativity_draws: Number of random draws per check

    Returns:
        ValidationReport: Gating checks plus convergence and sign reports
    """
    start = time.time()
    rng = np.random.default_rng(seed)
    report = ValidationReport()

    report.checks.append(_identity_check(rng, identity_draws))
    report.checks.append(_factor_consistency_check(rng, factor_draws))
    report.checks.extend(_negativity_checks(rng, negativity_draws))

    sizes = list(sizes)
    if sizes:
        report.checks.append(_exact_bounds_check(min(sizes), sign))
        report.convergence = convergence_check(sizes, sign=sign)
        sector_worst = max(report.convergence.sector_deviations)
        report.checks.append(ValidationCheck(
            'ed_sector_match', sector_worst <= SECTOR_TOLERANCE, sector_worst, SECTOR_TOLERANCE,
            detail=f'antiperiodic-momentum product vs exact diagonalization for n={sizes}'))
        report.checks.append(ValidationCheck(
            'ed_convergence', report.convergence.monotone, report.convergence.deviations[-1], 0.0,
            gating=False, detail=f'max deviations {report.convergence.deviations} for n={sizes}'))
        report.sign = determine_sign_convention(n=min(sizes))
        report.checks.append(ValidationCheck(
            'sign_determination', report.sign.selected is not None,
            abs(report.sign.deviations['as_printed'] - report.sign.deviations['flipped']),
            report.sign.margin, gating=False,
            detail=f'selected {report.sign.selected.value if report.sign.selected else "none"}'))

    report.elapsed_s = time.time() - start
    return report
