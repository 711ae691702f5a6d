"""
Pipelines regenerating each reference result as rows. Every pipeline builds one inlet per grid
point, runs them through a :any:`Link` and returns an :any:`ExperimentResult`; :func:`write_result`
turns it into a csv file and a json provenance sidecar.
"""
import inspect
import logging
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Sequence, Union

import numpy as np

from spinchain import __version__
from spinchain.chain import ChainSpec
from spinchain.config import get_tolerances
from spinchain.errors import ConfigError, ConsistencyError
from spinchain.inlet import Inlet
from spinchain.inlets.census_inlets import EXPECTED_COUNTS
from spinchain.inlets import (BifurcationInlet, CensusInlet, DoubletInlet, EvolutionInlet, Fig2Inlet,
                              Fig3Inlet, Fig5Inlet, LDPTableInlet, ThresholdInlet)
from spinchain.analysis import antiresonance_metric, oscillation_period
from spinchain.link import Link, Update
from spinchain.outlets import CsvOutlet, JsonOutlet, PrintOutlet
from spinchain.record import Record

_LOGGER = logging.getLogger('spinchain.experiments')


class ExperimentId(Enum):
    FIG2_SWEEP = 'Fig2Sweep'
    FIG3_SWEEP = 'Fig3Sweep'
    FIG4_DYNAMICS = 'Fig4Dynamics'
    FIG5_LOC_LENGTH = 'Fig5LocLength'
    LDP_TABLE = 'LDPTable'
    DOUBLET_CHECK = 'DoubletCheck'
    ROOT_CENSUS = 'RootCensus'


@dataclass(frozen=True, eq=False)
class ExperimentResult():
    """
    Rows of one experiment with the configurations it ran on and the provenance needed to
    reproduce it.
    """

    id: ExperimentId
    inputs: List[ChainSpec]
    records: List[Record] = field(repr=False)
    provenance: dict = field(repr=False)
    summary: dict = field(default_factory=dict)

    @property
    def rows(self) -> List[dict]:
        return [record.payload for record in self.records]

    def column(self, name:str) -> list:
        return [record.payload.get(name) for record in self.records]


def _grid(name:str, values) -> List[float]:
    if values is None:
        raise ConfigError(f'Grid {name} is not set')
    values = [float(v) for v in np.atleast_1d(np.asarray(values, dtype=float))]
    if not values:
        raise ConfigError(f'Grid {name} is empty')
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f'Grid {name} holds non-finite values')
    return values


def make_provenance(name:str, inputs:Sequence[ChainSpec], options:dict) -> dict:
    """
    Everything needed to reproduce a run: code version, active tolerances, chain configurations and options.
    """
    return {
        'version': __version__,
        'experiment': name,
        'tolerances': get_tolerances().as_dict(),
        'inputs': [spec.to_dict() for spec in inputs],
        'options': options,
    }


def _run(experiment:ExperimentId, inlets:List[Inlet], sort_by:Sequence[str], inputs:Sequence[ChainSpec],
         options:dict, verbose:bool=False, workers:int=None,
         summarize:Callable[[List[Record]], dict]=None) -> ExperimentResult:
    workers = get_tolerances().workers if workers is None else workers
    outlets = [PrintOutlet(only_summary=True)] if verbose else []
    link = Link(inlets, outlets, name=experiment.value, sort_by=sort_by, workers=workers)
    records = link.transfer()
    if not records:
        raise ConsistencyError(f'{experiment.value} produced no rows')

    summary = summarize(records) if summarize is not None else {}
    _LOGGER.info(f'{experiment.value}: {len(records)} rows from {len(inlets)} grid points')
    return ExperimentResult(id=experiment, inputs=list(inputs), records=records,
                            provenance=make_provenance(experiment.value, inputs, options), summary=summary)


def _max(values) -> Union[float, None]:
    values = [v for v in values if v is not None]
    return max(values) if values else None


def run_fig2(delta:float=10.0, ratios:Sequence[float]=None, J:float=1.0, oracle_ratios:Sequence[float]=(0.8,),
             oracle_N:int=40, backend:str='native', verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Distance of the next-to-defect bound pair from the BP band center against :code:`g/JΔ`.

    :type ratios: list[float]
    :param ratios: Grid of :code:`g/JΔ`. |default| :code:`0.05, 0.10, ..., 3.0`

    :type oracle_ratios: list[float]
    :param oracle_ratios: Grid points also diagonalized exactly on an :code:`oracle_N`-site ring.
        |default| :code:`(0.8,)`
    """
    ratios = _grid('ratios', np.round(np.arange(1, 61) * 0.05, 10) if ratios is None else ratios)
    oracle = {round(float(r), 10) for r in (oracle_ratios or ())}
    inlets = [Fig2Inlet(delta, r, J=J, oracle_N=oracle_N if round(r, 10) in oracle else None, backend=backend)
              for r in ratios]
    inputs = [ChainSpec(N=inlet.N, boundary='closed', J=J, Delta=delta, g=r * J * delta)
              for inlet, r in zip(inlets, ratios)]

    def summarize(records):
        residuals = [r.payload['oracle_residual'] for r in records]
        return {'rows': len(records),
                'localized': sum(1 for r in records if r.payload['exists']),
                'oracle_points': sum(1 for v in residuals if v is not None),
                'max_oracle_residual': _max(residuals),
                'threshold': 0.5, 'asymptote': -2.0}

    options = {'delta': delta, 'ratios': ratios, 'J': J, 'oracle_ratios': sorted(oracle), 'oracle_N': oracle_N,
               'backend': backend}
    return _run(ExperimentId.FIG2_SWEEP, inlets, ('ratio',), inputs, options, verbose, workers, summarize)


def run_fig3(xs:Sequence[float]=None, delta:float=20.0, J:float=1.0, oracle_xs:Sequence[float]=(4.0,),
             oracle_N:int=60, backend:str='native', verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Distance of the LDP-hybridized surface state from the LDP band center against
    :code:`x = 2(JΔ-g)/J`. Rows with :code:`|x| <= 1` have no localized state.

    :type xs: list[float]
    :param xs: Grid of :code:`x`. |default| :code:`-6.0, -5.9, ..., 6.0`
    """
    xs = _grid('xs', np.round(np.linspace(-6, 6, 121), 10) if xs is None else xs)
    oracle = {round(float(x), 10) for x in (oracle_xs or ())}
    inlets = [Fig3Inlet(x, delta=delta, J=J, oracle_N=oracle_N if round(x, 10) in oracle else None, backend=backend)
              for x in xs]
    inputs = [ChainSpec(N=inlet.N, boundary='closed', J=J, Delta=delta, g=J * delta - x * J / 2)
              for inlet, x in zip(inlets, xs)]

    def summarize(records):
        residuals = [r.payload['oracle_residual'] for r in records]
        return {'rows': len(records),
                'localized': sum(1 for r in records if r.payload['exists']),
                'oracle_points': sum(1 for v in residuals if v is not None),
                'max_oracle_residual': _max(residuals)}

    options = {'xs': xs, 'delta': delta, 'J': J, 'oracle_xs': sorted(oracle), 'oracle_N': oracle_N,
               'backend': backend}
    return _run(ExperimentId.FIG3_SWEEP, inlets, ('x',), inputs, options, verbose, workers, summarize)


def run_fig4(N:int=10, delta:float=10.0, J:float=1.0, ratios:Sequence[float]=(0.25, 1.0), t_max:float=200.0,
             samples:int=2001, n0:int=None, backend:str='native', verbose:bool=False,
             workers:int=None) -> ExperimentResult:
    """
    Two excitations released on the pair next to the defect of a closed chain, :code:`(n0+1, n0+2)`,
    for each :code:`g = ratio·JΔ`. Rows carry the occupations of the start pair, of the LDP
    configuration :code:`(n0, n0+2)` and of the pair moved away :code:`(n0+2, n0+3)`.

    The summary holds the antiresonance metric, the slow oscillation period of the start pair
    next to :code:`2πΔ/J`, and the norm and energy drift of every trace.
    """
    ratios = _grid('ratios', ratios)
    if samples < 2 or not t_max > 0:
        raise ConfigError(f'Time grid needs t_max > 0 and at least 2 samples, found: {t_max}, {samples}')
    n0 = N // 2 if n0 is None else n0
    times = np.linspace(0.0, t_max, samples)
    observables = [(n0 + 1, n0 + 2), (n0, n0 + 2), (n0 + 2, n0 + 3)]
    inputs = [ChainSpec(N=N, boundary='closed', J=J, Delta=delta, g=r * J * delta, n0=n0) for r in ratios]
    inlets = [EvolutionInlet(spec, times, observables, initial=observables[0], backend=backend) for spec in inputs]

    def summarize(records):
        traces = []
        for ratio, inlet in zip(ratios, inlets):
            trace = inlet.trace
            metric = antiresonance_metric(trace)
            traces.append({
                'ratio': ratio,
                'g': inlet.spec.g,
                'leak_bp': metric.leak_bp,
                'leak_ldp': metric.leak_ldp,
                'period': oscillation_period(trace, observables[0]),
                'expected_period': 2 * math.pi * abs(delta / J),
                'norm_drift': float(np.max(np.abs(trace.norm - 1))),
                'energy_drift': float(np.max(np.abs(trace.energy - trace.energy[0]))),
            })
        return {'rows': len(records), 'traces': traces}

    options = {'N': N, 'delta': delta, 'J': J, 'ratios': ratios, 't_max': t_max, 'samples': samples, 'n0': n0,
               'backend': backend}
    return _run(ExperimentId.FIG4_DYNAMICS, inlets, ('g', 't'), inputs, options, verbose, workers, summarize)


def run_fig5(sizes:Sequence[int]=(6, 12), boundaries:Sequence[str]=('open', 'closed'), gs:Sequence[float]=None,
             delta:float=10.0, J:float=1.0, verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Reciprocal localization length of the one-excitation defect state for every
    :code:`(boundary, N)` series against :code:`g`, next to the infinite-chain curve.
    Each series summary carries the largest relative deviation from :code:`asinh|g/J|` for
    :code:`|g/J| >= 3` and, on rings, from :code:`√(2|g|/NJ)` for :code:`|g/J| <= 0.02`.

    :type gs: list[float]
    :param gs: Grid of :code:`g`. |default| :code:`0.005, 0.01, 0.02, 0.05, 0.10, ..., 4.0`
    """
    if gs is None:
        gs = [0.005, 0.01, 0.02] + list(np.round(np.arange(1, 81) * 0.05, 10))
    gs = _grid('gs', gs)
    if not sizes or not boundaries:
        raise ConfigError('Fig5 needs at least one size and one boundary')
    inlets = [Fig5Inlet(int(N), b, g, delta=delta, J=J) for b in boundaries for N in sizes for g in gs]
    inputs = [inlet.spec for inlet in inlets]

    def summarize(records):
        series = {}
        for record in records:
            row = record.payload
            entry = series.setdefault(row['series'], {'points': 0, 'localized': 0, 'onset': None,
                                                      'max_deviation_strong': None, 'max_deviation_small': None})
            entry['points'] += 1
            if not row['localized']:
                continue
            entry['localized'] += 1
            if entry['onset'] is None or abs(row['g']) < entry['onset']:
                entry['onset'] = abs(row['g'])
            if abs(row['g'] / row['J']) >= 3:
                deviation = abs(row['im_theta_d'] - row['im_theta_infinite']) / row['im_theta_infinite']
                entry['max_deviation_strong'] = _max([entry['max_deviation_strong'], deviation])
            small = row['im_theta_small_g']
            if small and abs(row['g'] / row['J']) <= 0.02:
                deviation = abs(row['im_theta_d'] - small) / small
                entry['max_deviation_small'] = _max([entry['max_deviation_small'], deviation])
        return {'rows': len(records), 'series': series}

    options = {'sizes': [int(N) for N in sizes], 'boundaries': list(boundaries), 'gs': gs, 'delta': delta, 'J': J}
    return _run(ExperimentId.FIG5_LOC_LENGTH, inlets, ('boundary', 'N', 'g'), inputs, options, verbose, workers,
                summarize)


def run_ldp_table(N:int=100, delta:float=20.0, g:float=10.0, J:float=1.0, n0:int=None, backend:str='native',
                  verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Exact LDP-band levels of a closed chain against the shifted LDP dispersion, paired by rank.
    The summary reports the largest residual next to the :code:`5e-3·|J|` bound.
    """
    spec = ChainSpec(N=N, boundary='closed', J=J, Delta=delta, g=g, n0=N // 2 if n0 is None else n0)
    bound = 5e-3 * abs(J)

    def summarize(records):
        worst = max(r.payload['residual'] for r in records)
        return {'levels': len(records), 'max_residual': worst, 'bound': bound, 'within': worst <= bound,
                'shift': J ** 2 / (2 * g)}

    options = {'N': N, 'delta': delta, 'g': g, 'J': J, 'n0': spec.n0, 'backend': backend}
    return _run(ExperimentId.LDP_TABLE, [LDPTableInlet(spec, backend=backend)], ('k',), [spec], options,
                verbose, workers, summarize)


def run_doublet_check(N:int=40, delta:float=20.0, gs:Sequence[float]=(8.0, 10.0, 16.0, 30.0), J:float=1.0,
                      n0:int=None, backend:str='native', verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Exact levels of the defect state, the doublet and the surface-type bound pair against their
    predictions, for each :code:`g`.
    """
    gs = _grid('gs', gs)
    n0 = N // 2 if n0 is None else n0
    inputs = [ChainSpec(N=N, boundary='closed', J=J, Delta=delta, g=g, n0=n0) for g in gs]

    def summarize(records):
        checked = [r.payload for r in records if r.payload['within'] is not None]
        return {'rows': len(records), 'checked': len(checked),
                'all_within': all(row['within'] for row in checked),
                'max_residual': _max(row['residual'] for row in checked)}

    options = {'N': N, 'delta': delta, 'gs': gs, 'J': J, 'n0': n0, 'backend': backend}
    inlets = [DoubletInlet(spec, backend=backend) for spec in inputs]
    return _run(ExperimentId.DOUBLET_CHECK, inlets, ('g', 'excitations', 'kind'), inputs, options,
                verbose, workers, summarize)


def run_root_census(sizes:Sequence[int]=(5, 10, 20, 40, 60), draws:int=50, seed:int=0,
                    bifurcation_sizes:Sequence[int]=(5, 10, 20), threshold_sizes:Sequence[int]=(5, 7, 9, 11),
                    resolution:float=1e-3, verbose:bool=False, workers:int=None) -> ExperimentResult:
    """
    Root counts of the four quantization conditions over random configurations, bound-pair
    bifurcation onsets and the odd-ring binding threshold.
    """
    if not sizes and not bifurcation_sizes and not threshold_sizes:
        raise ConfigError('Root census needs at least one size')
    if draws < 1 or not resolution > 0:
        raise ConfigError(f'Root census needs draws >= 1 and resolution > 0, found: {draws}, {resolution}')
    for N in threshold_sizes:
        if N % 2 == 0:
            raise ConfigError(f'Binding threshold is defined on odd rings, found N={N}')

    census = [CensusInlet(source, int(N), draws=draws, seed=seed) for source in EXPECTED_COUNTS for N in sizes]
    inlets = census + [BifurcationInlet(int(N), resolution=resolution) for N in bifurcation_sizes] \
             + [ThresholdInlet(int(N), resolution=resolution) for N in threshold_sizes]
    inputs = [spec for inlet in census for spec in inlet.specs()]

    def summarize(records):
        summary = {'rows': len(records)}
        for check in ('count', 'bifurcation', 'threshold'):
            rows = [r.payload for r in records if r.payload['check'] == check]
            summary[check] = {'rows': len(rows), 'failed': sum(1 for row in rows if not row['ok'])}
        return summary

    options = {'sizes': [int(N) for N in sizes], 'draws': draws, 'seed': seed,
               'bifurcation_sizes': [int(N) for N in bifurcation_sizes],
               'threshold_sizes': [int(N) for N in threshold_sizes], 'resolution': resolution}
    return _run(ExperimentId.ROOT_CENSUS, inlets, ('check', 'source', 'N', 'draw', 'count'), inputs, options,
                verbose, workers, summarize)


PIPELINES:Dict[ExperimentId, Callable[..., ExperimentResult]] = {
    ExperimentId.FIG2_SWEEP: run_fig2,
    ExperimentId.FIG3_SWEEP: run_fig3,
    ExperimentId.FIG4_DYNAMICS: run_fig4,
    ExperimentId.FIG5_LOC_LENGTH: run_fig5,
    ExperimentId.LDP_TABLE: run_ldp_table,
    ExperimentId.DOUBLET_CHECK: run_doublet_check,
    ExperimentId.ROOT_CENSUS: run_root_census,
}


def experiment_id(value:Union[ExperimentId, str]) -> ExperimentId:
    """
    :raises: :any:`ConfigError` for an unknown identifier.
    """
    if isinstance(value, ExperimentId):
        return value
    try:
        return ExperimentId(value)
    except ValueError:
        raise ConfigError(f'Unknown experiment id: {value!r}, expected one of {[e.value for e in ExperimentId]}')


def run_experiment(experiment:Union[ExperimentId, str], options:dict=None, verbose:bool=False,
                   workers:int=None) -> ExperimentResult:
    """
    Run the pipeline of an experiment with keyword options taken from a run config.

    :raises: :any:`ConfigError` for an unknown identifier or option.
    """
    pipeline = PIPELINES[experiment_id(experiment)]
    options = dict(options or {})
    accepted = set(inspect.signature(pipeline).parameters) - {'verbose', 'workers'}
    unknown = set(options) - accepted
    if unknown:
        raise ConfigError(f'Unknown options for {experiment_id(experiment).value}: {sorted(unknown)}')
    return pipeline(**options, verbose=verbose, workers=workers)


def write_records(records:List[Record], out_dir:str, stem:str, provenance:dict, summary:dict=None) -> Dict[str, str]:
    """
    Write rows into :code:`<out_dir>/<stem>.csv` and the provenance sidecar into :code:`<out_dir>/<stem>.json`.

    :returns: Paths written, keyed :code:`'csv'` and :code:`'json'`.
    """
    if not records:
        raise ConsistencyError(f'Nothing to write for {stem}')
    csv_path = os.path.join(out_dir, f'{stem}.csv')
    json_path = os.path.join(out_dir, f'{stem}.json')
    records[0].metadata[JsonOutlet.PROVENANCE] = provenance
    records[0].metadata[JsonOutlet.SUMMARY] = summary or {}

    update = Update(name=stem, index=0)
    CsvOutlet(csv_path).push(records, update)
    JsonOutlet(json_path, experiment=stem).push(records, update)
    return {'csv': csv_path, 'json': json_path}


def write_result(result:ExperimentResult, out_dir:str) -> Dict[str, str]:
    return write_records(result.records, out_dir, result.id.value, result.provenance, result.summary)
