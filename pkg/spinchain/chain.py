"""
Chain configuration and exact one- and two-excitation sector Hamiltonians.

Energies are counted from the all-down state: every matrix has the ground-state offset
:code:`E0` subtracted. Sites are numbered from 1.
"""
import itertools
import json
import logging
from dataclasses import dataclass, field, asdict, replace
from enum import Enum
from types import MappingProxyType
from typing import Dict, Mapping, Tuple

import numpy as np

from spinchain.errors import ConfigError, ConsistencyError

_LOGGER = logging.getLogger('spinchain.chain')

Site = Tuple[int, ...]


class Boundary(Enum):
    OPEN = 'open'
    CLOSED = 'closed'


_SPEC_KEYS = ('N', 'boundary', 'J', 'Delta', 'eps', 'g', 'n0')


@dataclass(frozen=True)
class ChainSpec():
    """
    Full physical configuration of a chain: site count, boundary, exchange :code:`J`, anisotropy
    :code:`Delta`, spin-flip energy :code:`eps`, defect excess energy :code:`g` on site :code:`n0`.
    """

    N: int
    boundary: Boundary
    J: float
    Delta: float
    eps: float = 0.0
    g: float = 0.0
    n0: int = 1

    def __post_init__(self):
        if isinstance(self.boundary, str):
            try:
                object.__setattr__(self, 'boundary', Boundary(self.boundary.lower()))
            except ValueError:
                raise ConfigError(f'Unknown boundary: {self.boundary!r}, expected "open" or "closed"')
        if not isinstance(self.boundary, Boundary):
            raise ConfigError(f'Unknown boundary: {self.boundary!r}')

        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)):
            raise ConfigError(f'N must be an integer, found: {self.N!r}')
        if isinstance(self.n0, bool) or not isinstance(self.n0, (int, np.integer)):
            raise ConfigError(f'n0 must be an integer, found: {self.n0!r}')
        object.__setattr__(self, 'N', int(self.N))
        object.__setattr__(self, 'n0', int(self.n0))

        minimum = 4 if self.boundary == Boundary.CLOSED else 2
        if self.N < minimum:
            raise ConfigError(f'{self.boundary.value} chain needs N >= {minimum}, found: {self.N}')
        if not 1 <= self.n0 <= self.N:
            raise ConfigError(f'n0 must lie in [1, {self.N}], found: {self.n0}')

        for name in ('J', 'Delta', 'eps', 'g'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise ConfigError(f'{name} must be a number, found: {value!r}')
            if not np.isfinite(value):
                raise ConfigError(f'{name} must be finite, found: {value!r}')
            object.__setattr__(self, name, float(value))

        if self.J == 0:
            raise ConfigError('J must be non-zero')

    @property
    def eps1(self) -> float:
        """
        Energy of a single flipped spin away from the defect, :code:`eps - J·Delta`.
        """
        return self.eps - self.J * self.Delta

    @property
    def closed(self) -> bool:
        return self.boundary == Boundary.CLOSED

    @property
    def bonds(self) -> Tuple[Tuple[int, int], ...]:
        """
        Nearest-neighbour bonds; a closed chain adds the wrap bond (N, 1).
        """
        pairs = tuple((n, n + 1) for n in range(1, self.N))
        if self.closed:
            pairs = pairs + ((self.N, 1),)
        return pairs

    def site_energy(self, n:int) -> float:
        return self.eps + (self.g if n == self.n0 else 0.0)

    def site(self, n:int) -> int:
        """
        Fold a site index onto the ring for closed chains.

        :raises: :any:`ConfigError` for an open chain site outside [1, N].
        """
        if self.closed:
            return (n - 1) % self.N + 1
        if not 1 <= n <= self.N:
            raise ConfigError(f'Site {n} is outside of the open chain [1, {self.N}]')
        return n

    def pair(self, n:int, m:int) -> Tuple[int, int]:
        """
        Canonical :code:`(n, m)` with :code:`n < m` for two excitations, folded on closed chains.
        """
        a, b = sorted((self.site(n), self.site(m)))
        if a == b:
            raise ConfigError(f'Pair ({n}, {m}) puts both excitations on site {a}')
        return a, b

    def distance(self, n:int, m:int) -> int:
        """
        Site distance; ring metric :code:`min(|d|, N-|d|)` on closed chains.
        """
        d = abs(n - m)
        return min(d, self.N - d) if self.closed else d

    def with_changes(self, **changes) -> 'ChainSpec':
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d['boundary'] = self.boundary.value
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data:Mapping) -> 'ChainSpec':
        """
        :raises: :any:`ConfigError` on unknown or missing keys.
        """
        if not isinstance(data, Mapping):
            raise ConfigError(f'Chain spec must be a JSON object, found: {type(data).__name__}')
        unknown = set(data) - set(_SPEC_KEYS)
        if unknown:
            raise ConfigError(f'Unknown chain spec keys: {sorted(unknown)}')
        missing = {'N', 'boundary', 'J', 'Delta'} - set(data)
        if missing:
            raise ConfigError(f'Missing chain spec keys: {sorted(missing)}')
        return cls(**dict(data))

    @classmethod
    def from_json(cls, text:str) -> 'ChainSpec':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f'Malformed chain spec JSON: {e}')
        return cls.from_dict(data)


@dataclass(frozen=True)
class SectorBasis():
    """
    Lexicographically ordered basis of the sector with :code:`excitations` flipped spins.
    """

    excitations: int
    states: Tuple[Site, ...]
    index_of: Mapping[Site, int] = field(repr=False, compare=False)

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class HamiltonianMatrix():
    """
    Dense real symmetric sector Hamiltonian with the ground-state energy subtracted.
    """

    spec: ChainSpec
    basis: SectorBasis
    entries: np.ndarray = field(repr=False, compare=False)
    offset_applied: bool = True

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def norm(self) -> float:
        """Spectral-norm bound used to scale residual checks (Frobenius norm)."""
        return float(np.linalg.norm(self.entries))


def ground_state_offset(spec:ChainSpec) -> float:
    """
    Energy of the all-down state, :code:`-(N·eps+g)/2 + bonds·J·Delta/4` with :code:`N-1` bonds on
    an open chain and :code:`N` on a closed one.

    :type spec: :any:`ChainSpec`
    :param spec: Chain configuration.

    :returns: Ground-state energy :code:`E0`.
    :rtype: float
    """
    return -(spec.N * spec.eps + spec.g) / 2 + len(spec.bonds) * spec.J * spec.Delta / 4


def build_basis(spec:ChainSpec, excitations:int) -> SectorBasis:
    """
    Enumerate the sector with one or two flipped spins.

    :type spec: :any:`ChainSpec`
    :param spec: Chain configuration.

    :type excitations: int
    :param excitations: 1 or 2.

    :raises: :any:`ConfigError` for any other number of excitations, or two excitations on fewer than 4 sites.

    :returns: Basis with states ordered lexicographically.
    :rtype: :any:`SectorBasis`
    """
    if isinstance(excitations, bool) or excitations not in (1, 2):
        raise ConfigError(f'Only the 1- and 2-excitation sectors are supported, found: {excitations!r}')
    if excitations == 2 and spec.N < 4:
        raise ConfigError(f'The two-excitation sector needs N >= 4, found: {spec.N}')

    states = tuple(itertools.combinations(range(1, spec.N + 1), excitations))
    index_of = MappingProxyType({state: i for i, state in enumerate(states)})
    return SectorBasis(excitations=excitations, states=states, index_of=index_of)


def _apply_hamiltonian(spec:ChainSpec, state:Site) -> Dict[Site, float]:
    """
    Apply the spin Hamiltonian to a computational basis state given by its up sites.

    The Zeeman term is :code:`½ Σ ε_n σz_n`, each bond carries
    :code:`¼(J σxσx + J σyσy + JΔ σzσz)`. With :code:`σxσx + σyσy = 2(σ+σ- + σ-σ+)`
    a bond with opposite spins flips both at amplitude :code:`J/2`.
    """
    up = set(state)
    spin = {n: (1 if n in up else -1) for n in range(1, spec.N + 1)}

    diagonal = sum(0.5 * spec.site_energy(n) * spin[n] for n in range(1, spec.N + 1))
    result = {}
    for a, b in spec.bonds:
        diagonal += 0.25 * spec.J * spec.Delta * spin[a] * spin[b]
        if spin[a] != spin[b]:
            flipped = tuple(sorted(up ^ {a, b}))
            result[flipped] = result.get(flipped, 0.0) + 0.5 * spec.J

    result[tuple(sorted(up))] = result.get(tuple(sorted(up)), 0.0) + diagonal
    return result


def build_hamiltonian_direct(spec:ChainSpec, basis:SectorBasis) -> HamiltonianMatrix:
    """
    Build the sector Hamiltonian by applying the spin Hamiltonian to every basis state and
    subtracting :code:`E0`.

    :type spec: :any:`ChainSpec`
    :param spec: Chain configuration.

    :type basis: :any:`SectorBasis`
    :param basis: Basis built from the same spec.

    :raises: :any:`ConsistencyError` if an amplitude leaves the sector.

    :returns: Offset Hamiltonian.
    :rtype: :any:`HamiltonianMatrix`
    """
    if basis.states and max(max(s) for s in basis.states) > spec.N:
        raise ConfigError(f'Basis does not belong to a chain of {spec.N} sites')

    e0 = ground_state_offset(spec)
    entries = np.zeros((len(basis), len(basis)))
    for column, state in enumerate(basis.states):
        for target, amplitude in _apply_hamiltonian(spec, state).items():
            row = basis.index_of.get(target)
            if row is None:
                raise ConsistencyError(f'State {state} couples to {target} outside of the {basis.excitations}-excitation sector')
            entries[row, column] += amplitude
        entries[column, column] -= e0

    entries.setflags(write=False)
    _LOGGER.debug(f'Direct {basis.excitations}-excitation Hamiltonian built, dim={len(basis)}')
    return HamiltonianMatrix(spec=spec, basis=basis, entries=entries)


def build_one_exc_transcribed(spec:ChainSpec) -> HamiltonianMatrix:
    """
    One-excitation Hamiltonian written out from the Schrödinger equation for :code:`a(n)`:
    diagonal :code:`ε1 + g·δ(n,n0)` plus :code:`JΔ/2` on the two end sites of an open chain,
    hopping :code:`J/2` between neighbours (including the wrap bond when closed).
    """
    basis = build_basis(spec, 1)
    N = spec.N
    entries = np.zeros((N, N))
    for n in range(1, N + 1):
        i = n - 1
        entries[i, i] = spec.eps1 + (spec.g if n == spec.n0 else 0.0)
        if not spec.closed and n in (1, N):
            entries[i, i] += spec.J * spec.Delta / 2
    for a, b in spec.bonds:
        entries[a - 1, b - 1] += spec.J / 2
        entries[b - 1, a - 1] += spec.J / 2

    entries.setflags(write=False)
    return HamiltonianMatrix(spec=spec, basis=basis, entries=entries)


def build_two_exc_transcribed(spec:ChainSpec) -> HamiltonianMatrix:
    """
    Two-excitation Hamiltonian written out from the equation for :code:`a(n, m)`, :code:`n < m`.

    Diagonal :code:`2ε1 + g·δ(n,n0) + g·δ(m,n0) + JΔ·δ(m,n+1)`, plus the end-site terms
    :code:`(JΔ/2)(δ(n,1) + δ(m,N))` on an open chain. Each excitation hops by one site at
    :code:`J/2`; the :code:`(1 - δ(m,n+1))` guard drops moves onto the occupied site. On a closed
    chain :code:`a(n, m) = a(m, n+N)`, so :code:`(1, N)` is rewritten as the adjacent pair :code:`(N, N+1)`.
    """
    basis = build_basis(spec, 2)
    N = spec.N
    entries = np.zeros((len(basis), len(basis)))

    def fold(p, q):
        if spec.closed:
            p, q = sorted(((p - 1) % N + 1, (q - 1) % N + 1))
            return (p, q)
        if p < 1 or q > N:
            return None
        return (p, q)

    for column, (n, m) in enumerate(basis.states):
        if spec.closed and (n, m) == (1, N):
            n, m = N, N + 1
        adjacent = m == n + 1

        diagonal = 2 * spec.eps1
        diagonal += spec.g if spec.site(n) == spec.n0 else 0.0
        diagonal += spec.g if spec.site(m) == spec.n0 else 0.0
        diagonal += spec.J * spec.Delta if adjacent else 0.0
        if not spec.closed:
            diagonal += spec.J * spec.Delta / 2 if n == 1 else 0.0
            diagonal += spec.J * spec.Delta / 2 if m == N else 0.0
        entries[column, column] = diagonal

        moves = [(n - 1, m), (n, m + 1)]
        if not adjacent:
            moves += [(n + 1, m), (n, m - 1)]
        for p, q in moves:
            target = fold(p, q)
            if target is not None:
                entries[basis.index_of[target], column] += spec.J / 2

    entries.setflags(write=False)
    return HamiltonianMatrix(spec=spec, basis=basis, entries=entries)


def build_hamiltonian(spec:ChainSpec, excitations:int, construction:str='direct') -> HamiltonianMatrix:
    """
    Convenience dispatcher over the three builders.

    :type construction: str
    :param construction: :code:`'direct'` or :code:`'transcribed'`. |default| :code:`'direct'`
    """
    if construction == 'direct':
        return build_hamiltonian_direct(spec, build_basis(spec, excitations))
    if construction == 'transcribed':
        build_basis(spec, excitations)
        return build_one_exc_transcribed(spec) if excitations == 1 else build_two_exc_transcribed(spec)
    raise ConfigError(f'Unknown construction: {construction!r}, expected "direct" or "transcribed"')
