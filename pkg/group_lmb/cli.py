"""
Command line entry point.

    group-lmb run [--config FILE] [--out DIR] [--seed N] [--trials N] ...
    group-lmb validate [--config FILE]
    group-lmb plotdata RESULTS_DIR

Exit codes: 0 on success, 2 for an invalid configuration or missing inputs,
3 when a filter fails during a run.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
import yaml

from . import __version__
from .exceptions import GroupLmbException, ScenarioError
from .rfs.serialization import dump_density
from .sim.config import config_diff, config_hash, format_diff, load_config, to_dict
from .sim.export import group_table, measurement_table, plot_tables, track_table, truth_table
from .sim.montecarlo import MonteCarloResult, monte_carlo, summarize
from .sim.scenario import MODES, ScenarioConfig

OUT_ENV = 'GROUP_LMB_OUT'
DEFAULT_OUT = 'results'

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

FLOAT_FORMAT = '%.10g'


@dataclass
class RunManifest:
    """
    Args:
        config_hash: SHA-256 of the resolved configuration
        seeds: first and last trial seed
        modes: filter variants that were run
        outputs: files written, relative to the output directory
        trial_runtimes: wall-clock seconds per trial, per mode
        version: package version that produced the run
    """
    config_hash: str
    seeds: Tuple[int, int]
    modes: List[str]
    outputs: List[str] = field(default_factory=list)
    trial_runtimes: Dict[str, List[float]] = field(default_factory=dict)
    version: str = __version__


def _common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', type=Path, default=None,
                        help='scenario YAML file; omitted keys keep the benchmark defaults')
    parser.add_argument('--seed', type=int, default=None, help='base seed (scenario.base_seed)')
    parser.add_argument('--trials', type=int, default=None, help='Monte Carlo trials (scenario.trials)')
    parser.add_argument('--mode', choices=list(MODES) + ['both'], default=None,
                        help='filter variant(s) to run (scenario.modes)')
    parser.add_argument('--workers', type=int, default=None, help='worker processes (scenario.workers)')
    parser.add_argument('--group-threshold', type=float, default=None,
                        help='grouping distance in m (grouping.group_threshold_m)')
    parser.add_argument('--hypotheses', type=int, default=None,
                        help='hypotheses per update, K (filter.hypotheses)')
    parser.add_argument('--dump-states', action='store_const', const=True, default=None,
                        help='write the posterior of every step of the first trial (output.dump_states)')
    parser.add_argument('--verbose', '-v', action='store_true', help='debug logging')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='group-lmb',
                                     description='Augmented LMB group tracking benchmark')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='run the Monte Carlo comparison and write results')
    _common_options(run)
    run.add_argument('--out', type=Path, default=None,
                     help=f'output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})')

    validate = sub.add_parser('validate', help='check a configuration and show how it differs from the defaults')
    _common_options(validate)

    plot = sub.add_parser('plotdata', help='derive plot series from the results of a run')
    plot.add_argument('results', type=Path, help='output directory of a previous run')
    plot.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, object]:
    modes = None
    if args.mode is not None:
        modes = list(MODES) if args.mode == 'both' else [args.mode]
    return {
        'scenario.base_seed': args.seed,
        'scenario.trials': args.trials,
        'scenario.modes': modes,
        'scenario.workers': args.workers,
        'grouping.group_threshold_m': args.group_threshold,
        'filter.hypotheses': args.hypotheses,
        'output.dump_states': args.dump_states,
    }


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, encoding='utf-8', float_format=FLOAT_FORMAT)


def _write_json(data, path: Path) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + '\n', encoding='utf-8')


def write_results(cfg: ScenarioConfig, result: MonteCarloResult, out_dir: Path) -> RunManifest:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config_hash=config_hash(cfg),
                           seeds=(result.seeds[0], result.seeds[-1]),
                           modes=list(cfg.scenario.modes),
                           trial_runtimes=result.runtimes())

    first = result.bundles[0]
    tables = {
        'steps.csv': result.steps,
        'trials.csv': result.trials,
        'truth.csv': truth_table(first.truth),
        'measurements.csv': measurement_table(first.measurements),
        'tracks.csv': track_table(first),
        'groups.csv': group_table(first, cfg.epsilon),
    }
    for name, frame in tables.items():
        _write_csv(frame, out_dir / name)
        manifest.outputs.append(name)

    summary = summarize(result, cfg.output.settle_step)
    summary['config_hash'] = manifest.config_hash
    _write_json(summary, out_dir / 'summary.json')
    manifest.outputs.append('summary.json')

    (out_dir / 'config.yaml').write_text(yaml.safe_dump(to_dict(cfg), sort_keys=False), encoding='utf-8')
    manifest.outputs.append('config.yaml')

    if cfg.output.dump_states:
        for mode, trial in first.results.items():
            name = f'states_{mode}.jsonl'
            with open(out_dir / name, 'w', encoding='utf-8') as stream:
                for step, posterior in enumerate(trial.states, start=1):
                    dump_density(posterior, stream, step=step, mode=mode)
            manifest.outputs.append(name)

    manifest.outputs.append('manifest.json')
    _write_json(asdict(manifest), out_dir / 'manifest.json')
    return manifest


def cmd_run(config_path: Optional[Path], overrides: Dict[str, object], out_dir: Path) -> int:
    try:
        cfg = load_config(config_path, overrides)
    except ScenarioError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    try:
        result = monte_carlo(cfg, keep_states=cfg.output.dump_states)
    except ScenarioError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    except GroupLmbException as err:
        logging.error(__name__ + f' : run failed: {err}')
        print(f'filter failure: {err}', file=sys.stderr)
        return EXIT_RUNTIME
    manifest = write_results(cfg, result, out_dir)
    logging.info(__name__ + f' : wrote {len(manifest.outputs)} files to {out_dir}')
    return EXIT_OK


def cmd_validate(config_path: Optional[Path], overrides: Optional[Dict[str, object]] = None) -> int:
    try:
        cfg = load_config(config_path, overrides)
    except ScenarioError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    lines = format_diff(config_diff(cfg))
    print(f'configuration valid, hash {config_hash(cfg)}')
    if lines:
        print('differences from the benchmark defaults:')
        for line in lines:
            print(f'  {line}')
    else:
        print('identical to the benchmark defaults')
    return EXIT_OK


def cmd_plotdata(results_dir: Path) -> int:
    needed = ['steps.csv', 'truth.csv', 'tracks.csv']
    missing = [name for name in needed if not (results_dir / name).is_file()]
    if missing:
        print(f'missing inputs in {results_dir}: {", ".join(missing)}', file=sys.stderr)
        return EXIT_INVALID
    frames = [pd.read_csv(results_dir / name, encoding='utf-8') for name in needed]
    out_dir = results_dir / 'plotdata'
    out_dir.mkdir(exist_ok=True)
    for name, frame in plot_tables(*frames).items():
        _write_csv(frame, out_dir / f'{name}.csv')
    logging.info(__name__ + f' : wrote plot data to {out_dir}')
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(message)s')
    if args.command == 'run':
        out_dir = args.out or Path(os.environ.get(OUT_ENV, DEFAULT_OUT))
        return cmd_run(args.config, overrides_from_args(args), out_dir)
    if args.command == 'validate':
        return cmd_validate(args.config, overrides_from_args(args))
    return cmd_plotdata(args.results)


if __name__ == '__main__':
    sys.exit(main())
