"""
Command-line front end: :code:`spinchain <spectrum|roots|evolve|figure> <config.json> [--out DIR]
[--verbose] [--tol-im X] [--workers N]`.

Exit codes: :code:`0` on success, :code:`2` for usage and config errors, :code:`3` for numerical
failures. Diagnostics go to stderr; stdout carries progress lines only with :code:`--verbose`.
"""
import argparse
import logging
import sys
from typing import List, Sequence

from spinchain import __version__
from spinchain.chain import build_basis
from spinchain.config import get_tolerances, set_tolerances
from spinchain.errors import ConfigError, SpinChainError
from spinchain.experiments import make_provenance, run_experiment, write_records, write_result
from spinchain.inlet import Inlet
from spinchain.inlets import EvolutionInlet, RootsInlet, SpectrumInlet
from spinchain.link import Link
from spinchain.misc.logs import set_verbosity
from spinchain.outlets import PrintOutlet
from spinchain.record import Record
from spinchain.run_config import COMMANDS, RunConfig, state_vector

_LOGGER = logging.getLogger('spinchain.cli')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='spinchain',
                                     description='Exact spectra, quantization roots and dynamics of XXZ chains with a defect.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('command', choices=COMMANDS, help='What to compute.')
    parser.add_argument('config', help='JSON run config.')
    parser.add_argument('--out', default='.', help='Directory the csv and json files are written to.')
    parser.add_argument('--verbose', action='store_true', help='Print progress to stdout and log at INFO level.')
    parser.add_argument('--tol-im', type=float, default=None, help='Override the extended/localized threshold on Im θ.')
    parser.add_argument('--workers', type=int, default=None, help='Worker threads for sweeps.')
    return parser


def _transfer(name:str, inlets:List[Inlet], sort_by:Sequence[str], args:argparse.Namespace) -> List[Record]:
    outlets = [PrintOutlet(only_summary=True)] if args.verbose else []
    workers = get_tolerances().workers if args.workers is None else args.workers
    return Link(inlets, outlets, name=name, sort_by=sort_by, workers=workers).transfer()


def cmd_spectrum(config:RunConfig, args:argparse.Namespace) -> int:
    inlet = SpectrumInlet(config.spec, **config.options)
    records = _transfer('spectrum', [inlet], ('index',), args)
    summary = {'levels': len(records), 'report': inlet.report.to_dict()}
    write_records(records, args.out, 'spectrum', _provenance_of(config), summary)
    return EXIT_OK


def cmd_roots(config:RunConfig, args:argparse.Namespace) -> int:
    options = config.options
    inlets = [RootsInlet(spec, options['source'], options['include_spurious']) for spec in options['specs']]
    records = _transfer('roots', inlets, ('N', 'J', 'Delta', 'eps', 'g', 'n0', 'root'), args)
    summary = {'roots': len(records), 'localized': sum(1 for r in records if r.payload['classification'] == 'Localized')}
    write_records(records, args.out, 'roots', _provenance_of(config, options['specs']), summary)
    return EXIT_OK


def cmd_evolve(config:RunConfig, args:argparse.Namespace) -> int:
    options = config.options
    psi0 = None
    if options['psi0'] is not None:
        psi0 = state_vector(options['psi0'], config.spec, build_basis(config.spec, 2))
    inlet = EvolutionInlet(config.spec, options['times'].values(), options['observables'],
                           initial=options['initial'], psi0=psi0, backend=options['backend'])
    records = _transfer('evolve', [inlet], ('t',), args)
    trace = inlet.trace
    summary = {'samples': len(trace), 'norm_drift': float(abs(trace.norm - 1).max()),
               'energy_drift': float(abs(trace.energy - trace.energy[0]).max())}
    write_records(records, args.out, 'evolve', _provenance_of(config), summary)
    return EXIT_OK


def cmd_figure(config:RunConfig, args:argparse.Namespace) -> int:
    result = run_experiment(config.options['id'], config.options['options'], verbose=args.verbose,
                            workers=args.workers)
    write_result(result, args.out)
    return EXIT_OK


def _provenance_of(config:RunConfig, specs=None) -> dict:
    options = {k: v for k, v in config.options.items() if k not in ('specs', 'psi0', 'times')}
    if 'times' in config.options:
        times = config.options['times']
        options['times'] = {'start': times.start, 'stop': times.stop, 'samples': times.samples}
    if config.options.get('psi0') is not None:
        options['psi0'] = [{'pair': list(pair), 're': v.real, 'im': v.imag} for pair, v in config.options['psi0']]
    return make_provenance(config.command, specs or [config.spec], options)


COMMAND_HANDLERS = {
    'spectrum': cmd_spectrum,
    'roots': cmd_roots,
    'evolve': cmd_evolve,
    'figure': cmd_figure,
}


def main(argv:Sequence[str]=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG

    set_verbosity(args.verbose)
    previous = get_tolerances()
    try:
        config = RunConfig.from_file(args.command, args.config)
        overrides = dict(config.tolerances)
        if args.tol_im is not None:
            overrides['tol_im'] = args.tol_im
        if args.workers is not None:
            overrides['workers'] = args.workers
        if overrides:
            set_tolerances(**overrides)
        code = COMMAND_HANDLERS[args.command](config, args)
        _LOGGER.info(f'{args.command} done, output in: {args.out}')
        return code
    except ConfigError as e:
        print(f'spinchain: config error: {e}', file=sys.stderr)
        return EXIT_CONFIG
    except SpinChainError as e:
        print(f'spinchain: numerical failure: {e}', file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        set_tolerances(**previous.as_dict())
        set_verbosity(False)


if __name__ == '__main__': # pragma: no cover
    sys.exit(main())
