"""
CSV and JSON outputs of the qutrit dephasing simulator.

Every file is written to a temporary sibling and renamed into place, so a failed run never
leaves a partial file. Floats are written with 17 significant digits and LF line endings;
each CSV gets a `<path>.meta.json` sidecar with the full parameter set.
"""
import contextlib
import json
import os
import tempfile
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
import pandas as pd

from sweeps.sweeps import FACTOR_COLUMNS, CriticalAlphaResult
from utils.data_structures import ParameterDomainError, SweepResult

FLOAT_FORMAT = '%.17g'


class OutputWriteError(OSError):
    """Raised when an output file cannot be written; the message names the path"""
    pass


def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if hasattr(value, 'value'):
        return value.value
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _atomic_write(path: str, write: Callable[[str], None]):
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        os.makedirs(directory, exist_ok=True)
        handle, tmp_path = tempfile.mkstemp(prefix='.tmp_', suffix=os.path.basename(path), dir=directory)
        os.close(handle)
        write(tmp_path)
        os.replace(tmp_path, path)
        tmp_path = None
    except OSError as e:
        raise OutputWriteError(f"cannot write {path}: {e.strerror or e}") from e
    finally:
        if tmp_path and os.path.exists(tmp_path):
            os.remove(tmp_path)


def _write_frame(frame: pd.DataFrame, path: str):
    _atomic_write(path, lambda tmp: frame.to_csv(tmp, index=False, float_format=FLOAT_FORMAT,
                                                 lineterminator='\n', encoding='utf-8'))


def _write_json(payload: Dict[str, Any], path: str):
    def write(tmp: str):
        with open(tmp, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
            f.write('\n')

    _atomic_write(path, write)


def metadata_path(path: str) -> str:
    return f'{path}.meta.json'


def write_metadata(metadata: Dict[str, Any], path: str) -> str:
    """Write the sidecar of the output at `path` and return the sidecar path"""
    sidecar = metadata_path(path)
    _write_json(metadata, sidecar)
    return sidecar


def _write_with_sidecar(frame: pd.DataFrame, metadata: Dict[str, Any], path: str):
    """Sidecar first, then the CSV; a failed CSV write takes its sidecar with it"""
    sidecar = write_metadata(metadata, path)
    try:
        _write_frame(frame, path)
    except OutputWriteError:
        with contextlib.suppress(OSError):
            os.remove(sidecar)
        raise


def _require_axes(result: SweepResult, axes: Sequence[str]):
    if list(result.axes) != list(axes):
        raise ParameterDomainError(f"expected a sweep over {list(axes)} (got {list(result.axes)})")


def timeseries_frame(result: SweepResult) -> pd.DataFrame:
    _require_axes(result, ['t'])
    columns = {'t': result.axes['t']}
    for name in FACTOR_COLUMNS:
        columns[name] = result.factor_magnitudes[name]
    columns['negativity'] = result.values
    return pd.DataFrame(columns)


def write_timeseries_csv(result: SweepResult, path: str):
    """`t,f15_abs,f19_abs,f59_abs,negativity`, one row per time point"""
    _write_with_sidecar(timeseries_frame(result), result.metadata, path)


def write_grid_csv(result: SweepResult, path: str):
    """Long format `alpha,t,negativity`, alpha-major"""
    _require_axes(result, ['alpha', 't'])
    alphas, times = result.axes['alpha'], result.axes['t']
    frame = pd.DataFrame({
        'alpha': np.repeat(alphas, len(times)),
        't': np.tile(times, len(alphas)),
        'negativity': result.values.reshape(-1),
    })
    _write_with_sidecar(frame, result.metadata, path)


def write_family_csv(family: Sequence[SweepResult], path: str, extra_metadata: Dict[str, Any] = None):
    """Long format `eta,t,f15_abs,f19_abs,f59_abs,negativity`, one block per eta in the given order"""
    if not family:
        raise ParameterDomainError("cannot write an empty eta family")
    frames = []
    for result in family:
        frame = timeseries_frame(result)
        frame.insert(0, 'eta', float(result.metadata['chain']['eta']))
        frames.append(frame)
    metadata = dict(family[0].metadata)
    metadata['kind'] = 'eta-family'
    metadata['etas'] = [float(result.metadata['chain']['eta']) for result in family]
    metadata.update(extra_metadata or {})
    _write_with_sidecar(pd.concat(frames, ignore_index=True), metadata, path)


def write_critical_curve_csv(result: CriticalAlphaResult, path: str, metadata: Dict[str, Any]):
    """Coarse objective curve `alpha,objective`; the refined alpha goes to the sidecar"""
    frame = pd.DataFrame({'alpha': result.coarse_alphas, 'objective': result.coarse_objective})
    sidecar = dict(metadata)
    sidecar.update({
        'kind': 'critical-alpha',
        'objective': result.objective.value,
        'critical_alpha': result.alpha,
        'objective_value': result.objective_value,
        'flat': result.flat,
        'evaluations': len(result.evaluations),
    })
    _write_with_sidecar(frame, sidecar, path)


def write_validation_report(report: Dict[str, Any], path: str):
    _write_json(report, path)


class DataLogger:
    """Writes the outputs of one run and keeps track of the files it produced"""

    def __init__(self, output_directory: str = None):
        self.output_directory = output_directory
        self.written: List[str] = []

    def resolve(self, filename: str) -> str:
        if self.output_directory and not os.path.isabs(filename):
            return os.path.join(self.output_directory, filename)
        return filename

    def write_timeseries(self, result: SweepResult, filename: str) -> str:
        path = self.resolve(filename)
        write_timeseries_csv(result, path)
        return self._record(path)

    def write_grid(self, result: SweepResult, filename: str) -> str:
        path = self.resolve(filename)
        write_grid_csv(result, path)
        return self._record(path)

    def write_family(self, family: Sequence[SweepResult], filename: str,
                     extra_metadata: Dict[str, Any] = None) -> str:
        path = self.resolve(filename)
        write_family_csv(family, path, extra_metadata)
        return self._record(path)

    def write_critical_curve(self, result: CriticalAlphaResult, filename: str,
                             metadata: Dict[str, Any]) -> str:
        path = self.resolve(filename)
        write_critical_curve_csv(result, path, metadata)
        return self._record(path)

    def write_report(self, report: Dict[str, Any], filename: str) -> str:
        path = self.resolve(filename)
        write_validation_report(report, path)
        return self._record(path)

    def _record(self, path: str) -> str:
        self.written.append(path)
        return path

    def get_written_files(self) -> List[str]:
        """Paths of every file written so far"""
        return list(self.written)
