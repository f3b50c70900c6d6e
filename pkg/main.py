#!/usr/bin/env python3
"""
Main entry point for the qutrit dephasing simulator.

Exit codes: 0 success, 1 I/O or numerical failure, 2 parameter or configuration error,
3 validation failure, 64 usage error.
"""
import argparse
import os
import sys
import time
from typing import Any, Dict, List, Optional

from config.settings import Settings, load_figure_table
from config.validator import ConfigurationError
from data_logging.data_logger import DataLogger, OutputWriteError
from data_logging.event_logger import EventLogger
from entanglement.linalg import EigensolverConvergenceError
from oracle.validation import run_validation_suite
from spin_chain.decoherence import RadicandError
from sweeps.sweeps import alpha_time_grid, eta_family, find_critical_alpha, time_series
from utils.data_structures import ChainParams, ParameterDomainError, RunConfig, SweepResult

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARAMETER = 2
EXIT_VALIDATION = 3
EXIT_USAGE = 64

# Parsed arguments that are not configuration keys
RUN_ARGUMENTS = ('subcommand', 'config', 'out', 'out_dir', 'log_dir')


class UsageExitParser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 64 on usage errors"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def format_figure_table(figures: List[Dict[str, Any]]) -> str:
    lines = ['figure table:']
    for entry in figures:
        if entry['kind'] == 'eta-family':
            etas = ', '.join(f'{eta:g}' for eta in entry['etas'])
            lines.append(f"  {entry['name']}: eta family, gamma={entry['gamma']:g}, "
                         f"alpha={entry['alpha']:g}, eta in {{{etas}}}")
        else:
            lines.append(f"  {entry['name']}: (alpha, t) grid, gamma={entry['gamma']:g}, "
                         f"eta={entry['eta']:g}, alpha in [{entry['alpha_min']:g}, {entry['alpha_max']:g}]")
        if entry.get('note'):
            lines.append(f"         note: {entry['note']}")
    return '\n'.join(lines)


def _figure_epilog() -> Optional[str]:
    try:
        return format_figure_table(load_figure_table())
    except ConfigurationError:
        return None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', help='Config file: JSON object or key=value lines (flags take precedence)')
    common.add_argument('--n', type=int, help='Chain length (odd, >= 3)')
    common.add_argument('--gamma', type=float, help='Anisotropy')
    common.add_argument('--alpha', type=float, help='Three-site coupling')
    common.add_argument('--eta', type=float, help='Transverse field')
    common.add_argument('--g-a', type=float, help='Coupling of qutrit A')
    common.add_argument('--g-b', type=float, help='Coupling of qutrit B')
    common.add_argument('--t-start', type=float, help='First time point')
    common.add_argument('--t-end', type=float, help='Last time point')
    common.add_argument('--t-steps', type=int, help='Number of time points')
    common.add_argument('--workers', type=int, help='Worker threads')
    common.add_argument('--factor-variant', choices=['lambda', 'xi-as-printed'],
                        help='Energies in the exponents of the complex decoherence factor')
    common.add_argument('--log-level', help='Logging level')
    common.add_argument('--log-dir', help='Also write the run log into this directory')

    parser = UsageExitParser(
        description='Negativity dynamics of two qutrits dephasing under an XY chain with three-site interaction',
        epilog=_figure_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    timeseries = subparsers.add_parser('timeseries', parents=[common], help='Negativity over time')
    timeseries.add_argument('--out', default='timeseries.csv', help='Output CSV path')

    family = subparsers.add_parser('eta-family', parents=[common], help='One time series per eta')
    family.add_argument('--etas', type=float, nargs='+', help='Transverse field values')
    family.add_argument('--out', default='eta_family.csv', help='Output CSV path')

    grid = subparsers.add_parser('grid', parents=[common], help='Negativity over (alpha, t)')
    grid.add_argument('--alpha-min', type=float)
    grid.add_argument('--alpha-max', type=float)
    grid.add_argument('--alpha-steps', type=int)
    grid.add_argument('--out', default='grid.csv', help='Output CSV path')

    critical = subparsers.add_parser('critical-alpha', parents=[common], help='Alpha of maximum negativity')
    critical.add_argument('--alpha-min', type=float)
    critical.add_argument('--alpha-max', type=float)
    critical.add_argument('--coarse-steps', type=int)
    critical.add_argument('--refine-iters', type=int)
    critical.add_argument('--objective', choices=['time-average', 'late-time'])
    critical.add_argument('--out', default='critical_alpha.csv', help='Output CSV of the coarse objective curve')

    validate = subparsers.add_parser('validate', parents=[common], help='Run the validation suite')
    validate.add_argument('--sizes', dest='validation_sizes', type=int, nargs='+',
                          help='Chain lengths for exact diagonalization (odd, <= 12)')
    validate.add_argument('--seed', type=int, help='Seed of the random draws')
    validate.add_argument('--sign-convention', choices=['as_printed', 'flipped'],
                          help='Sign of the three-site term in the exact Hamiltonian')
    validate.add_argument('--out', default=None, help='Optional JSON report path')

    figures = subparsers.add_parser('figures', parents=[common], help='CSV data for every figure in the table',
                                    epilog=_figure_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    figures.add_argument('--out-dir', default='figures', help='Output directory')
    return parser


class DephasingRun:
    """Main run coordinator"""

    def __init__(self, settings: Settings, run_config: RunConfig, log_directory: Optional[str] = None):
        """
        Initialize the run

        Args:
            settings: Loaded Settings instance
            run_config: Resolved run configuration
            log_directory: Directory for the run log file (console only when None)
        """
        self.settings = settings
        self.config = run_config
        self.event_logger = EventLogger(settings.get_logging_config(log_directory))
        self.data_logger = DataLogger(run_config.out_dir)

    def run(self) -> int:
        """
        Execute the configured subcommand

        Returns:
            int: Exit code
        """
        handlers = {
            'timeseries': self._run_timeseries,
            'eta-family': self._run_eta_family,
            'grid': self._run_grid,
            'critical-alpha': self._run_critical_alpha,
            'validate': self._run_validate,
            'figures': self._run_figures,
        }
        self.event_logger.log_run_start(self._summary())
        start = time.time()
        try:
            code = handlers[self.config.subcommand]()
        except ParameterDomainError as e:
            self.event_logger.log_error(self.config.subcommand, str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_PARAMETER
        except OutputWriteError as e:
            self.event_logger.log_error('output', str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
        except (RadicandError, EigensolverConvergenceError) as e:
            self.event_logger.log_error('numerics', str(e))
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
        finally:
            written = self.data_logger.get_written_files()
            self.event_logger.info(f"Files written: {', '.join(written) if written else 'none'}")
            self.event_logger.info(f"Run finished in {time.time() - start:.2f}s")
            self.event_logger.close()
        return code

    def _summary(self) -> Dict[str, Any]:
        return {'subcommand': self.config.subcommand, **self.settings.get_config_summary()}

    def _run_timeseries(self) -> int:
        c = self.config
        result = time_series(c.params, c.coupling, c.grid, c.workers, c.factor_variant)
        path = self.data_logger.write_timeseries(result, c.out_path)
        self.event_logger.log_output('time series', path)
        print(f"Wrote {len(result.values)} rows to {path} "
              f"(N(t_end) = {result.values[-1]:.6f}, mean N = {result.values.mean():.6f})")
        return EXIT_OK

    def _run_eta_family(self) -> int:
        c = self.config
        family = eta_family(c.params, c.coupling, c.grid, c.etas, c.workers, c.factor_variant)
        path = self.data_logger.write_family(family, c.out_path)
        self.event_logger.log_output('eta family', path)
        for eta, result in zip(c.etas, family):
            print(f"eta={eta:g}: mean N = {result.values.mean():.6f}, min N = {result.values.min():.6f}")
        print(f"Wrote {path}")
        return EXIT_OK

    def _run_grid(self) -> int:
        c = self.config
        result = alpha_time_grid(c.params, c.coupling, c.grid, c.alpha_min, c.alpha_max, c.alpha_steps,
                                 c.workers, c.factor_variant)
        path = self.data_logger.write_grid(result, c.out_path)
        self.event_logger.log_output('alpha-time grid', path)
        print(f"Wrote {result.values.size} rows to {path}")
        return EXIT_OK

    def _run_critical_alpha(self) -> int:
        c = self.config
        result = find_critical_alpha(c.params, c.coupling, c.grid, (c.alpha_min, c.alpha_max),
                                     c.coarse_steps, c.refine_iters, c.objective, c.workers, c.factor_variant)
        print(f"Objective ({c.objective.value}) on the coarse grid:")
        for alpha, value in zip(result.coarse_alphas, result.coarse_objective):
            print(f"  alpha={alpha:+.4f}  {value:.8f}")
        if result.flat:
            print("Objective is flat over the alpha range; no critical alpha reported")
        else:
            print(f"Critical alpha: {result.alpha:.4f} (objective {result.objective_value:.8f})")

        metadata = self._sweep_metadata()
        path = self.data_logger.write_critical_curve(result, c.out_path, metadata)
        self.event_logger.log_output('critical-alpha curve', path)
        return EXIT_OK

    def _sweep_metadata(self) -> Dict[str, Any]:
        c = self.config
        return SweepResult.build_metadata(c.params, c.coupling, c.grid, factor_variant=c.factor_variant.value,
                                          alpha_range={'min': c.alpha_min, 'max': c.alpha_max})

    def _run_validate(self) -> int:
        c = self.config
        report = run_validation_suite(c.validation_sizes, c.seed, c.sign_convention)
        for check in report.checks:
            self.event_logger.log_validation(check.name, check.passed, check.metric, check.threshold, check.gating)
            status = 'PASS' if check.passed else ('FAIL' if check.gating else 'INFO')
            print(f"[{status}] {check.name}: {check.metric:.3e} ({check.detail})")
        if c.out_path:
            path = self.data_logger.write_report(report.to_dict(), c.out_path)
            self.event_logger.log_output('validation report', path)
        if not report.passed:
            names = ', '.join(check.name for check in report.failures())
            print(f"validation failed: {names}", file=sys.stderr)
            return EXIT_VALIDATION
        print(f"Validation passed in {report.elapsed_s:.1f}s")
        return EXIT_OK

    def _run_figures(self) -> int:
        c = self.config
        for entry in self.settings.get_figure_table():
            filename = f"{entry['name']}.csv"
            extra = {'figure': entry['name']}
            if entry.get('note'):
                extra['note'] = entry['note']
            if entry['kind'] == 'eta-family':
                params = ChainParams(c.params.n, float(entry['gamma']), float(entry['alpha']), c.params.eta)
                family = eta_family(params, c.coupling, c.grid, [float(eta) for eta in entry['etas']],
                                    c.workers, c.factor_variant)
                path = self.data_logger.write_family(family, filename, extra)
            else:
                params = ChainParams(c.params.n, float(entry['gamma']), 0.0, float(entry['eta']))
                result = alpha_time_grid(params, c.coupling, c.grid, float(entry['alpha_min']),
                                         float(entry['alpha_max']), c.alpha_steps, c.workers, c.factor_variant)
                result.metadata.update(extra)
                if 'reported_critical_alpha' in entry:
                    result.metadata['reported_critical_alpha'] = entry['reported_critical_alpha']
                path = self.data_logger.write_grid(result, filename)
            self.event_logger.log_output(entry['name'], path)
            print(f"Wrote {path}" + (f" ({entry['note']})" if entry.get('note') else ''))
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    overrides = {key: value for key, value in vars(args).items() if key not in RUN_ARGUMENTS}
    try:
        settings = Settings(config_file=args.config, overrides=overrides)
        out_dir = getattr(args, 'out_dir', None)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        run_config = settings.build_run_config(args.subcommand, out_path=getattr(args, 'out', None),
                                               out_dir=out_dir)
    except (ConfigurationError, ParameterDomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMETER
    except OSError as e:
        print(f"error: cannot create output directory: {e}", file=sys.stderr)
        return EXIT_IO

    return DephasingRun(settings, run_config, args.log_dir).run()


if __name__ == "__main__":
    sys.exit(main())
