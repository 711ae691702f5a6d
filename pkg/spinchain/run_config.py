"""
Strict parsing of the JSON run configs read by the command line. Unknown keys are rejected at
every level so that a typo never silently falls back to a default.
"""
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from spinchain.chain import ChainSpec, SectorBasis
from spinchain.config import Tolerances
from spinchain.eigensolver import BACKENDS
from spinchain.errors import ConfigError
from spinchain.quantization import RootSource

_LOGGER = logging.getLogger('spinchain.run_config')

COMMANDS = ('spectrum', 'roots', 'evolve', 'figure')

_KEYS = {
    'spectrum': {'spec', 'excitations', 'backend', 'construction', 'tolerances'},
    'roots': {'spec', 'source', 'include_spurious', 'sweep', 'tolerances'},
    'evolve': {'spec', 'initial', 'psi0', 'times', 'observables', 'backend', 'tolerances'},
    'figure': {'id', 'options', 'tolerances'},
}

_SWEEPABLE = ('N', 'J', 'Delta', 'eps', 'g', 'n0')

_TOLERANCE_KEYS = {f.name for f in dataclasses.fields(Tolerances)}


def _check_keys(data:Any, allowed:set, where:str, required:set=frozenset()) -> dict:
    if not isinstance(data, Mapping):
        raise ConfigError(f'{where} must be a JSON object, found: {type(data).__name__}')
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f'Unknown keys in {where}: {sorted(unknown)}')
    missing = set(required) - set(data)
    if missing:
        raise ConfigError(f'Missing keys in {where}: {sorted(missing)}')
    return dict(data)


def _number(value:Any, where:str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f'{where} must be a number, found: {value!r}')
    return float(value)


def _integer(value:Any, where:str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f'{where} must be an integer, found: {value!r}')
    return value


def _choice(value:Any, choices:Sequence[str], where:str) -> str:
    if value not in choices:
        raise ConfigError(f'{where} must be one of {list(choices)}, found: {value!r}')
    return value


def _pair(value:Any, where:str) -> Tuple[int, int]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f'{where} must be a list of two sites, found: {value!r}')
    return _integer(value[0], where), _integer(value[1], where)


@dataclass(frozen=True)
class TimeGrid():
    start: float = 0.0
    stop: float = 200.0
    samples: int = 2001

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError(f'Time grid needs at least one sample, found: {self.samples}')
        if self.stop < self.start:
            raise ConfigError(f'Time grid stop {self.stop} precedes start {self.start}')

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.samples)

    @classmethod
    def from_dict(cls, data:Any) -> 'TimeGrid':
        data = _check_keys(data, {'start', 'stop', 'samples'}, 'times')
        kwargs = {}
        for key in ('start', 'stop'):
            if key in data:
                kwargs[key] = _number(data[key], f'times.{key}')
        if 'samples' in data:
            kwargs['samples'] = _integer(data['samples'], 'times.samples')
        return cls(**kwargs)


@dataclass(frozen=True)
class RunConfig():
    """
    Validated contents of a run config for one command.

    :code:`options` holds the command-specific settings with defaults filled in; :code:`tolerances`
    holds the overrides to apply before the run.
    """

    command: str
    spec: Optional[ChainSpec]
    options: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, command:str, data:Any) -> 'RunConfig':
        """
        :raises: :any:`ConfigError` for unknown commands, unknown or missing keys and malformed values.
        """
        _choice(command, COMMANDS, 'command')
        required = {'id'} if command == 'figure' else {'spec'}
        data = _check_keys(data, _KEYS[command], 'config', required)

        tolerances = _check_keys(data.pop('tolerances', {}), _TOLERANCE_KEYS, 'tolerances')
        spec = ChainSpec.from_dict(data.pop('spec')) if 'spec' in data else None
        options = getattr(cls, f'_parse_{command}')(data, spec)
        return cls(command=command, spec=spec, options=options, tolerances=tolerances)

    @classmethod
    def from_json(cls, command:str, text:str) -> 'RunConfig':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f'Malformed config JSON: {e}')
        return cls.from_dict(command, data)

    @classmethod
    def from_file(cls, command:str, filepath:str) -> 'RunConfig':
        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ConfigError(f'Cannot read config {filepath}: {e}')
        _LOGGER.info(f'Read {command} config: {filepath}')
        return cls.from_json(command, text)

    @staticmethod
    def _parse_spectrum(data:dict, spec:ChainSpec) -> dict:
        excitations = _integer(data.get('excitations', 2), 'excitations')
        _choice(excitations, (1, 2), 'excitations')
        if excitations == 2 and spec.N < 4:
            raise ConfigError(f'The two-excitation sector needs N >= 4, found: {spec.N}')
        return {
            'excitations': excitations,
            'backend': _choice(data.get('backend', 'native'), BACKENDS, 'backend'),
            'construction': _choice(data.get('construction', 'direct'), ('direct', 'transcribed'), 'construction'),
        }

    @staticmethod
    def _parse_roots(data:dict, spec:ChainSpec) -> dict:
        source = data.get('source')
        if source is not None:
            source = RootSource(_choice(source, [s.value for s in RootSource], 'source'))
        include_spurious = data.get('include_spurious', False)
        if not isinstance(include_spurious, bool):
            raise ConfigError(f'include_spurious must be true or false, found: {include_spurious!r}')

        specs = [spec]
        if 'sweep' in data:
            sweep = data['sweep']
            _check_keys(sweep, set(_SWEEPABLE), 'sweep')
            if len(sweep) != 1:
                raise ConfigError(f'sweep must name exactly one spec field, found: {sorted(sweep)}')
            (name, values), = sweep.items()
            if not isinstance(values, list) or not values:
                raise ConfigError(f'sweep.{name} must be a non-empty list')
            cast = _integer if name in ('N', 'n0') else _number
            specs = [spec.with_changes(**{name: cast(v, f'sweep.{name}')}) for v in values]
        return {'source': source, 'include_spurious': include_spurious, 'specs': specs}

    @staticmethod
    def _parse_evolve(data:dict, spec:ChainSpec) -> dict:
        if spec.N < 4:
            raise ConfigError(f'Evolution runs in the two-excitation sector, which needs N >= 4, found: {spec.N}')
        if 'initial' in data and 'psi0' in data:
            raise ConfigError('Provide at most one of initial and psi0')

        n0 = spec.n0
        initial = _pair(data['initial'], 'initial') if 'initial' in data else None
        psi0 = None
        if 'psi0' in data:
            psi0 = _amplitudes(data['psi0'])
        elif initial is None:
            initial = (n0 + 1, n0 + 2)

        default_observables = [(n0 + 1, n0 + 2), (n0, n0 + 2), (n0 + 2, n0 + 3)]
        observables = data.get('observables')
        if observables is None:
            observables = default_observables
        else:
            if not isinstance(observables, list) or not observables:
                raise ConfigError('observables must be a non-empty list of pairs')
            observables = [_pair(p, 'observables') for p in observables]

        return {
            'initial': initial,
            'psi0': psi0,
            'times': TimeGrid.from_dict(data.get('times', {})),
            'observables': observables,
            'backend': _choice(data.get('backend', 'native'), BACKENDS, 'backend'),
        }

    @staticmethod
    def _parse_figure(data:dict, spec:ChainSpec) -> dict:
        if not isinstance(data['id'], str):
            raise ConfigError(f'id must be a string, found: {data["id"]!r}')
        options = data.get('options', {})
        if not isinstance(options, Mapping):
            raise ConfigError(f'options must be a JSON object, found: {type(options).__name__}')
        return {'id': data['id'], 'options': dict(options)}


def _amplitudes(entries:Any) -> List[Tuple[Tuple[int, int], complex]]:
    if not isinstance(entries, list) or not entries:
        raise ConfigError('psi0 must be a non-empty list of {"pair", "re", "im"} entries')
    amplitudes = []
    for i, entry in enumerate(entries):
        entry = _check_keys(entry, {'pair', 're', 'im'}, f'psi0[{i}]', {'pair'})
        value = complex(_number(entry.get('re', 0.0), f'psi0[{i}].re'), _number(entry.get('im', 0.0), f'psi0[{i}].im'))
        amplitudes.append((_pair(entry['pair'], f'psi0[{i}].pair'), value))
    return amplitudes


def state_vector(amplitudes:Sequence[Tuple[Tuple[int, int], complex]], spec:ChainSpec, basis:SectorBasis) -> np.ndarray:
    """
    Assemble amplitudes given per pair into a vector of the two-excitation basis. Normalization is
    left to the propagator, which rejects unnormalized states.

    :raises: :any:`ConfigError` for pairs outside the chain or listed twice.
    """
    psi = np.zeros(len(basis), dtype=complex)
    seen = set()
    for pair, value in amplitudes:
        key = spec.pair(*pair)
        if key in seen:
            raise ConfigError(f'psi0 lists pair {key} twice')
        seen.add(key)
        psi[basis.index_of[key]] = value
    return psi
