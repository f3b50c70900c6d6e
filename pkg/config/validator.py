"""
Configuration Validation System
"""
import math
from numbers import Real
from typing import Any, Dict, List


class ConfigurationError(Exception):
    """Raised when configuration validation fails"""
    pass


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_real(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool) and math.isfinite(value)


class ConfigurationValidator:
    """Validates flat run configurations and the figure table"""

    REAL_KEYS = ['gamma', 'alpha', 'eta', 'g_a', 'g_b', 't_start', 't_end', 'alpha_min', 'alpha_max']
    INT_KEYS = ['n', 't_steps', 'workers', 'alpha_steps', 'coarse_steps', 'refine_iters', 'seed']
    VALID_OBJECTIVES = ['time-average', 'late-time']
    VALID_SIGNS = ['as_printed', 'flipped']
    VALID_VARIANTS = ['lambda', 'xi-as-printed']
    VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
    VALID_FIGURE_KINDS = ['eta-family', 'grid']
    STRING_KEYS = ['objective', 'sign_convention', 'factor_variant', 'log_level', 'log_filename']
    LIST_KEYS = ['etas', 'validation_sizes']
    KNOWN_KEYS = REAL_KEYS + INT_KEYS + STRING_KEYS + LIST_KEYS

    def validate(self, config: Dict[str, Any]) -> List[str]:
        """
        Validate configuration and return list of errors

        Args:
            config: Flat configuration dictionary to validate

        Returns:
            List[str]: List of validation errors (empty if valid)
        """
        errors = []

        for key in config:
            if key not in self.KNOWN_KEYS:
                errors.append(f"unknown configuration key '{key}'")
        for key in self.KNOWN_KEYS:
            if key not in config:
                errors.append(f"missing configuration key '{key}'")

        self._validate_types(config, errors)
        if errors:
            return errors

        self._validate_chain(config, errors)
        self._validate_grids(config, errors)
        self._validate_choices(config, errors)
        return errors

    def _validate_types(self, config: Dict[str, Any], errors: List[str]):
        for key in self.REAL_KEYS:
            if key in config and not _is_real(config[key]):
                errors.append(f"{key} must be a finite number (got {config[key]!r})")
        for key in self.INT_KEYS:
            if key in config and not _is_int(config[key]):
                errors.append(f"{key} must be an integer (got {config[key]!r})")
        for key in self.STRING_KEYS:
            if key in config and not isinstance(config[key], str):
                errors.append(f"{key} must be a string (got {config[key]!r})")
        if 'etas' in config:
            etas = config['etas']
            if not isinstance(etas, list) or not etas or not all(_is_real(e) for e in etas):
                errors.append(f"etas must be a non-empty list of numbers (got {etas!r})")
        if 'validation_sizes' in config:
            sizes = config['validation_sizes']
            if not isinstance(sizes, list) or not all(_is_int(s) for s in sizes):
                errors.append(f"validation_sizes must be a list of integers (got {sizes!r})")

    def _validate_chain(self, config: Dict[str, Any], errors: List[str]):
        n = config['n']
        if n < 3 or n % 2 == 0:
            errors.append(f"n must be odd and >= 3 (got {n})")
        for size in config['validation_sizes']:
            if size < 3 or size > 12 or size % 2 == 0:
                errors.append(f"validation sizes must be odd and within 3..12 (got {size})")

    def _validate_grids(self, config: Dict[str, Any], errors: List[str]):
        if config['t_start'] < 0:
            errors.append(f"t_start must be >= 0 (got {config['t_start']})")
        if config['t_end'] <= config['t_start']:
            errors.append(f"t_end must be greater than t_start (got {config['t_start']}..{config['t_end']})")
        if config['t_steps'] < 2:
            errors.append(f"t_steps must be >= 2 (got {config['t_steps']})")
        if config['workers'] < 1:
            errors.append(f"workers must be >= 1 (got {config['workers']})")
        if config['alpha_min'] >= config['alpha_max']:
            errors.append(f"alpha_min must be less than alpha_max "
                          f"(got {config['alpha_min']}, {config['alpha_max']})")
        for key in ('alpha_steps', 'coarse_steps'):
            if config[key] < 2:
                errors.append(f"{key} must be >= 2 (got {config[key]})")
        if config['refine_iters'] < 0:
            errors.append(f"refine_iters must be >= 0 (got {config['refine_iters']})")

    def _validate_choices(self, config: Dict[str, Any], errors: List[str]):
        for key, valid in (('objective', self.VALID_OBJECTIVES),
                           ('sign_convention', self.VALID_SIGNS),
                           ('factor_variant', self.VALID_VARIANTS)):
            if config[key] not in valid:
                errors.append(f"Invalid {key}: {config[key]}. Must be one of {valid}")
        if str(config['log_level']).upper() not in self.VALID_LOG_LEVELS:
            errors.append(f"Invalid log_level: {config['log_level']}. Must be one of {self.VALID_LOG_LEVELS}")

    def validate_figures(self, table: Dict[str, Any]) -> List[str]:
        """Validate the figure table and return list of errors"""
        errors = []
        figures = table.get('figures')
        if not isinstance(figures, list) or not figures:
            return ["figure table must contain a non-empty 'figures' list"]

        names = set()
        for entry in figures:
            name = entry.get('name')
            if name in names:
                errors.append(f"Duplicate figure name: {name}")
            names.add(name)

            kind = entry.get('kind')
            if kind not in self.VALID_FIGURE_KINDS:
                errors.append(f"Figure {name}: invalid kind {kind}. Must be one of {self.VALID_FIGURE_KINDS}")
                continue
            required = ['gamma', 'alpha', 'etas'] if kind == 'eta-family' else ['gamma', 'eta', 'alpha_min', 'alpha_max']
            for field in required:
                if field not in entry:
                    errors.append(f"Figure {name}: Missing required field '{field}'")
        return errors

    def validate_and_raise(self, config: Dict[str, Any]):
        """Validate configuration and raise exception if invalid"""
        errors = self.validate(config)
        if errors:
            raise ConfigurationError("invalid configuration: " + "; ".join(errors))
