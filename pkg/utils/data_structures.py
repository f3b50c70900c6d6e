"""
Core data structures for the qutrit dephasing simulator.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
from enum import Enum
import math
import time

import numpy as np

from utils import __version__


class ParameterDomainError(ValueError):
    """Raised when a parameter lies outside the domain an operation accepts"""
    pass


class SignConvention(Enum):
    """Sign joining the three-site term to the XY part of the chain Hamiltonian"""
    AS_PRINTED = "as_printed"
    FLIPPED = "flipped"

    @property
    def factor(self) -> int:
        return 1 if self is SignConvention.AS_PRINTED else -1


class FactorVariant(Enum):
    """Energies used in the oscillatory exponents of the complex decoherence factor"""
    LAMBDA = "lambda"
    XI_AS_PRINTED = "xi-as-printed"


class MomentumSector(Enum):
    """Momentum grid of the fermionized chain: periodic 2*pi*k/n or antiperiodic pi*(2m + 1)/n"""
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"


class CriticalObjective(Enum):
    """Scalar objective maximized by the critical-alpha search"""
    TIME_AVERAGE = "time-average"
    LATE_TIME = "late-time"


def _require_finite(name: str, value: float):
    if not math.isfinite(value):
        raise ParameterDomainError(f"{name} must be finite (got {value})")


@dataclass(frozen=True)
class ChainParams:
    """Environment parameters: chain length, anisotropy, three-site coupling, transverse field"""
    n: int
    gamma: float
    alpha: float
    eta: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ParameterDomainError(f"n must be an integer (got {self.n})")
        if self.n < 3 or self.n % 2 == 0:
            raise ParameterDomainError(f"n must be odd and >= 3 (got {self.n})")
        object.__setattr__(self, 'n', int(self.n))
        for name in ('gamma', 'alpha', 'eta'):
            _require_finite(name, getattr(self, name))

    @property
    def mode_count(self) -> int:
        """Number of paired momentum modes M = (n - 1) / 2"""
        return (self.n - 1) // 2

    def with_alpha(self, alpha: float) -> 'ChainParams':
        return ChainParams(self.n, self.gamma, alpha, self.eta)

    def with_eta(self, eta: float) -> 'ChainParams':
        return ChainParams(self.n, self.gamma, self.alpha, eta)

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'gamma': self.gamma, 'alpha': self.alpha, 'eta': self.eta}


@dataclass(frozen=True)
class QutritCoupling:
    """Coupling strengths of qutrits A and B to the chain"""
    g_a: float
    g_b: float

    def __post_init__(self):
        _require_finite('g_a', self.g_a)
        _require_finite('g_b', self.g_b)

    def to_dict(self) -> Dict[str, Any]:
        return {'g_a': self.g_a, 'g_b': self.g_b}


@dataclass(frozen=True)
class LambdaTable:
    """The nine shifted fields, indexed 1..9"""
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 9:
            raise ParameterDomainError(f"LambdaTable needs 9 values (got {len(self.values)})")

    def __getitem__(self, mu: int) -> float:
        if not 1 <= mu <= 9:
            raise IndexError(f"lambda index must be in 1..9 (got {mu})")
        return self.values[mu - 1]

    def __len__(self) -> int:
        return 9

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class ModeSet:
    """Paired momentum modes k = 1..M and their phases in (0, pi)"""
    m: int
    phases: np.ndarray


@dataclass(frozen=True)
class ModeSpectrum:
    """Spectral record of a single (k, lambda) pair"""
    k: int
    field: float
    xi: float
    big_lambda: float
    theta: float
    degenerate: bool = False


@dataclass(frozen=True)
class DecoherenceFactor:
    """Complex decoherence factor F_mu,nu at time t"""
    mu: int
    nu: int
    t: float
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class DecoherenceSet:
    """The three factors entering the evolved two-qutrit state at a common time"""
    f15: complex
    f19: complex
    f59: complex

    def magnitudes(self) -> Tuple[float, float, float]:
        return abs(self.f15), abs(self.f19), abs(self.f59)

    @classmethod
    def identity(cls) -> 'DecoherenceSet':
        """Factors of an undisturbed state"""
        return cls(1.0 + 0j, 1.0 + 0j, 1.0 + 0j)


@dataclass(frozen=True)
class TwoQutritState:
    """9x9 density matrix, basis |ij> -> index 3*i + j with qutrit A first"""
    rho: np.ndarray

    def __post_init__(self):
        if self.rho.shape != (9, 9):
            raise ParameterDomainError(f"two-qutrit state must be 9x9 (got {self.rho.shape})")

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.rho, self.rho.conj().T, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class NegativityPoint:
    """Negativity at one time"""
    t: float
    n_value: float


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with inclusive endpoints"""
    t_start: float = 0.0
    t_end: float = 50.0
    steps: int = 501

    def __post_init__(self):
        _require_finite('t_start', self.t_start)
        _require_finite('t_end', self.t_end)
        if self.t_start < 0:
            raise ParameterDomainError(f"t_start must be >= 0 (got {self.t_start})")
        if self.t_end <= self.t_start:
            raise ParameterDomainError(
                f"t_end must be greater than t_start (got {self.t_start}..{self.t_end})")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ParameterDomainError(f"time steps must be an integer >= 2 (got {self.steps})")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, int(self.steps))

    def to_dict(self) -> Dict[str, Any]:
        return {'t_start': self.t_start, 't_end': self.t_end, 'steps': int(self.steps)}


@dataclass
class SweepResult:
    """Negativity over a parameter grid together with its axes and run metadata"""
    axes: Dict[str, np.ndarray]
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)
    factor_magnitudes: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(axis) for axis in self.axes.values())
        if self.values.shape != shape:
            raise ParameterDomainError(
                f"sweep values shape {self.values.shape} does not match axes {shape}")
        for name, magnitudes in self.factor_magnitudes.items():
            if magnitudes.shape != shape:
                raise ParameterDomainError(f"{name} shape {magnitudes.shape} does not match axes {shape}")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @staticmethod
    def build_metadata(params: 'ChainParams', coupling: 'QutritCoupling',
                       grid: 'TimeGrid', **extra) -> Dict[str, Any]:
        """Self-describing metadata for a sweep started now"""
        metadata = {
            'chain': params.to_dict(),
            'coupling': coupling.to_dict(),
            'time_grid': grid.to_dict(),
            'created_at': time.strftime('%Y-%m-%dT%H:%M:%S'),
            'code_version': __version__,
        }
        metadata.update(extra)
        return metadata


@dataclass
class RunConfig:
    """Fully resolved command-line run"""
    subcommand: str
    params: ChainParams
    coupling: QutritCoupling
    grid: TimeGrid
    out_path: Optional[str] = None
    out_dir: Optional[str] = None
    workers: int = 1
    sign_convention: SignConvention = SignConvention.AS_PRINTED
    factor_variant: FactorVariant = FactorVariant.LAMBDA
    etas: List[float] = field(default_factory=lambda: [0.0, 0.5, 0.9, 1.0, 1.2])
    alpha_min: float = -1.0
    alpha_max: float = 0.5
    alpha_steps: int = 31
    coarse_steps: int = 31
    refine_iters: int = 40
    objective: CriticalObjective = CriticalObjective.TIME_AVERAGE
    validation_sizes: List[int] = field(default_factory=lambda: [7, 9, 11])
    seed: int = 0
    log_level: str = 'INFO'
