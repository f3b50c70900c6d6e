"""
Configuration management for the qutrit dephasing simulator.

Precedence, lowest first: config/default_config.json, an optional user file, command-line flags.
"""
import json
import os
from typing import Any, Dict, List, Optional, Tuple

from config.validator import ConfigurationError, ConfigurationValidator
from utils.data_structures import (ChainParams, CriticalObjective, FactorVariant, QutritCoupling, RunConfig,
                                   SignConvention, TimeGrid)

CONFIG_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG_FILE = os.path.join(CONFIG_DIR, 'default_config.json')
FIGURES_FILE = os.path.join(CONFIG_DIR, 'figures.json')


def _load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"Failed to load configuration from {path}: {e}")


def load_figure_table(path: str = FIGURES_FILE) -> List[Dict[str, Any]]:
    table = _load_json(path)
    errors = ConfigurationValidator().validate_figures(table)
    if errors:
        raise ConfigurationError("invalid figure table: " + "; ".join(errors))
    return table['figures']


def _parse_value(key: str, raw: str) -> Any:
    raw = raw.strip()
    try:
        return json.loads(raw)
    except ValueError:
        pass
    if key in ConfigurationValidator.LIST_KEYS:
        try:
            return [json.loads(item) for item in raw.strip('[]').split(',') if item.strip()]
        except ValueError:
            return raw
    return raw


def parse_key_value(text: str, source: str = '<config>') -> Dict[str, Any]:
    """Parse `key = value` lines; `#` starts a comment, hyphens in keys become underscores"""
    config = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigurationError(f"{source}:{number}: expected key=value (got '{line}')")
        key, value = line.split('=', 1)
        key = key.strip().replace('-', '_')
        config[key] = _parse_value(key, value)
    return config


class Settings:
    """Manages run configuration settings"""

    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None,
                 defaults_file: str = DEFAULT_CONFIG_FILE, figures_file: str = FIGURES_FILE):
        """
        Initialize settings

        Args:
            config_file: Optional user file, JSON object or key=value lines. Resolved as given,
                then relative to the config/ directory
            overrides: Command-line values; None entries are ignored
            defaults_file: JSON file with every default
            figures_file: JSON figure table
        """
        self.config_file = self._resolve_config_path(config_file) if config_file else None
        self.figures_file = figures_file
        self.config = self._load_and_validate_config(defaults_file, overrides or {})
        self._figure_table = None

    def _resolve_config_path(self, config_file: str) -> str:
        candidates = [config_file]
        if not os.path.isabs(config_file):
            candidates.append(os.path.join(CONFIG_DIR, config_file))
            if not os.path.splitext(config_file)[1]:
                candidates.append(os.path.join(CONFIG_DIR, f'{config_file}.json'))
        for candidate in candidates:
            if os.path.isfile(candidate):
                return candidate
        raise ConfigurationError(f"Configuration file not found: {config_file}")

    def _load_user_file(self) -> Dict[str, Any]:
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ConfigurationError(f"Failed to read configuration file {self.config_file}: {e}")

        if self.config_file.endswith('.json') or text.lstrip().startswith('{'):
            try:
                user = json.loads(text)
            except ValueError as e:
                raise ConfigurationError(f"Failed to parse {self.config_file}: {e}")
            if not isinstance(user, dict):
                raise ConfigurationError(f"{self.config_file} must contain a JSON object")
            user = {key.replace('-', '_'): value for key, value in user.items()}
        else:
            user = parse_key_value(text, self.config_file)
        print(f"Loaded configuration from {self.config_file}")
        return user

    def _load_and_validate_config(self, defaults_file: str, overrides: Dict[str, Any]) -> Dict[str, Any]:
        config = _load_json(defaults_file)
        if self.config_file:
            config.update(self._load_user_file())
        config.update({key: value for key, value in overrides.items() if value is not None})

        ConfigurationValidator().validate_and_raise(config)
        config['log_level'] = str(config['log_level']).upper()
        return config

    # Getter methods for configuration sections
    def get_chain_params(self) -> ChainParams:
        c = self.config
        return ChainParams(n=c['n'], gamma=float(c['gamma']), alpha=float(c['alpha']), eta=float(c['eta']))

    def get_coupling(self) -> QutritCoupling:
        return QutritCoupling(g_a=float(self.config['g_a']), g_b=float(self.config['g_b']))

    def get_time_grid(self) -> TimeGrid:
        c = self.config
        return TimeGrid(t_start=float(c['t_start']), t_end=float(c['t_end']), steps=c['t_steps'])

    def get_etas(self) -> List[float]:
        return [float(eta) for eta in self.config['etas']]

    def get_alpha_range(self) -> Tuple[float, float, int]:
        c = self.config
        return float(c['alpha_min']), float(c['alpha_max']), c['alpha_steps']

    def get_workers(self) -> int:
        return self.config['workers']

    def get_sign_convention(self) -> SignConvention:
        return SignConvention(self.config['sign_convention'])

    def get_factor_variant(self) -> FactorVariant:
        return FactorVariant(self.config['factor_variant'])

    def get_objective(self) -> CriticalObjective:
        return CriticalObjective(self.config['objective'])

    def get_validation_sizes(self) -> List[int]:
        return list(self.config['validation_sizes'])

    def get_seed(self) -> int:
        return self.config['seed']

    def get_logging_config(self, log_directory: Optional[str] = None) -> Dict[str, Any]:
        return {
            'log_level': self.config['log_level'],
            'log_filename': self.config['log_filename'],
            'log_directory': log_directory,
        }

    def get_figure_table(self) -> List[Dict[str, Any]]:
        """Figure entries in output order, validated on first access"""
        if self._figure_table is None:
            self._figure_table = load_figure_table(self.figures_file)
        return self._figure_table

    def build_run_config(self, subcommand: str, out_path: Optional[str] = None,
                         out_dir: Optional[str] = None) -> RunConfig:
        alpha_min, alpha_max, alpha_steps = self.get_alpha_range()
        return RunConfig(
            subcommand=subcommand,
            params=self.get_chain_params(),
            coupling=self.get_coupling(),
            grid=self.get_time_grid(),
            out_path=out_path,
            out_dir=out_dir,
            workers=self.get_workers(),
            sign_convention=self.get_sign_convention(),
            factor_variant=self.get_factor_variant(),
            etas=self.get_etas(),
            alpha_min=alpha_min,
            alpha_max=alpha_max,
            alpha_steps=alpha_steps,
            coarse_steps=self.config['coarse_steps'],
            refine_iters=self.config['refine_iters'],
            objective=self.get_objective(),
            validation_sizes=self.get_validation_sizes(),
            seed=self.get_seed(),
            log_level=self.config['log_level'],
        )

    def get_config_summary(self) -> Dict[str, Any]:
        """Get a summary of current configuration for display"""
        c = self.config
        return {
            'Chain': f"n={c['n']}, gamma={c['gamma']}, alpha={c['alpha']}, eta={c['eta']}",
            'Coupling': f"g_a={c['g_a']}, g_b={c['g_b']}",
            'Time grid': f"[{c['t_start']}, {c['t_end']}] x {c['t_steps']}",
            'Workers': c['workers'],
            'Config file': self.config_file or '(defaults)',
        }
