"""
Dense real symmetric eigensolver and exact propagation in the eigenbasis.

The native backend reduces the matrix to tridiagonal form with Householder reflections and
diagonalizes it with the implicitly shifted QL algorithm. The :code:`lapack` backend hands the
matrix to :func:`numpy.linalg.eigh` and is used to cross-check the native one and for sectors
too large for it.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from spinchain.chain import ChainSpec, HamiltonianMatrix, SectorBasis
from spinchain.config import get_tolerances
from spinchain.errors import ConfigError, ConvergenceError

_LOGGER = logging.getLogger('spinchain.eigensolver')

BACKENDS = ('native', 'lapack')

_EPS = float(np.finfo(float).eps)
_TINY = float(np.finfo(float).tiny)


@dataclass(frozen=True, eq=False)
class EigenDecomposition():
    """
    Eigenvalues in ascending order and, optionally, the orthonormal eigenvectors as columns.
    """

    values: np.ndarray = field(repr=False)
    vectors: Optional[np.ndarray] = field(default=None, repr=False)
    source: Optional[HamiltonianMatrix] = field(default=None, repr=False)
    backend: str = 'native'

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def matrix(self) -> np.ndarray:
        if self.source is None:
            raise ConfigError('Decomposition carries no source matrix')
        return self.source.entries

    def residual(self) -> float:
        """
        :returns: :code:`max_k ‖H v_k - λ_k v_k‖`.
        """
        if self.vectors is None:
            raise ConfigError('Residuals need eigenvectors, decompose with vectors=True')
        r = self.matrix @ self.vectors - self.vectors * self.values
        return float(np.max(np.linalg.norm(r, axis=0))) if self.dim else 0.0

    def orthonormality_error(self) -> float:
        if self.vectors is None:
            raise ConfigError('Orthonormality needs eigenvectors, decompose with vectors=True')
        return float(np.max(np.abs(self.vectors.T @ self.vectors - np.eye(self.dim)))) if self.dim else 0.0


@dataclass(frozen=True, eq=False)
class EvolutionTrace():
    """
    Occupations :code:`|a(n,m)|²` of selected basis states sampled on a time grid, together with
    the norm and energy of the propagated state.
    """

    times: np.ndarray = field(repr=False)
    observables: Dict[Tuple[int, ...], np.ndarray] = field(repr=False)
    norm: np.ndarray = field(repr=False)
    energy: np.ndarray = field(repr=False)
    spec: Optional[ChainSpec] = None

    def __len__(self):
        return len(self.times)


def tridiagonalize(a:np.ndarray, vectors:bool=True) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """
    Householder reduction :code:`a = Q T Qᵀ` of a real symmetric matrix.

    :type a: numpy.ndarray
    :param a: Real symmetric matrix. It is not modified.

    :type vectors: bool
    :param vectors: Whether to accumulate :code:`Q`. |default| :code:`True`

    :returns: :code:`(d, e, Q)` with the diagonal :code:`d`, the off-diagonal :code:`e` where :code:`e[i]`
        couples :code:`i` and :code:`i+1` and :code:`e[n-1] = 0`, and :code:`Q` or :code:`None`.
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    Q = np.eye(n) if vectors else None

    for k in range(n - 2):
        x = A[k + 1:, k]
        norm = np.linalg.norm(x)
        if norm == 0:
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        vv = v @ v
        if vv == 0:
            continue
        beta = 2.0 / vv

        sub = A[k + 1:, k + 1:]
        p = beta * (sub @ v)
        K = beta * (v @ p) / 2
        w = p - K * v
        sub -= np.outer(v, w) + np.outer(w, v)

        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = A[k, k + 1] = alpha

        if Q is not None:
            Q[:, k + 1:] -= beta * np.outer(Q[:, k + 1:] @ v, v)

    d = np.diag(A).copy()
    e = np.zeros(n)
    if n > 1:
        e[:-1] = np.diag(A, 1)
    return d, e, Q


def tridiagonal_ql(d:np.ndarray, e:np.ndarray, z:Optional[np.ndarray]=None, max_sweeps:int=None) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Implicitly shifted QL on a symmetric tridiagonal matrix.

    :type d: numpy.ndarray
    :param d: Diagonal.

    :type e: numpy.ndarray
    :param e: Off-diagonal, :code:`e[i]` couples :code:`i` and :code:`i+1`; :code:`e[n-1]` is ignored.

    :type z: numpy.ndarray
    :param z: Matrix whose columns are rotated along, typically the Householder :code:`Q`. |default| :code:`None`

    :type max_sweeps: int
    :param max_sweeps: Total number of QL sweeps allowed. |default| :code:`30·n`

    :raises: :any:`ConvergenceError` when the sweep cap is exceeded.

    :returns: Unsorted eigenvalues and the rotated :code:`z` (eigenvectors as columns) or :code:`None`.
    """
    d = [float(x) for x in d]
    e = [float(x) for x in e]
    n = len(d)
    if n == 0:
        return np.array(d), z
    e[n - 1] = 0.0
    rows = None if z is None else np.array(z, dtype=float).T.copy()
    max_sweeps = 30 * n if max_sweeps is None else max_sweeps
    sweeps = 0

    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) < _TINY:
                    break
                m += 1
            if m == l:
                break

            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError(f'QL did not converge after {max_sweeps} sweeps: eigenvalue {l} of {n} '
                                       f'still coupled with |e|={abs(e[l]):.3e}, max remaining |e|={max(abs(x) for x in e[l:]):.3e}')

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b

                if rows is not None:
                    f_row = rows[i + 1].copy()
                    rows[i + 1] = s * rows[i] + c * f_row
                    rows[i] = c * rows[i] - s * f_row

            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    _LOGGER.debug(f'QL converged in {sweeps} sweeps for n={n}')
    return np.array(d), (None if rows is None else rows.T)


def eigh(H:Union[HamiltonianMatrix, np.ndarray], vectors:bool=True, backend:str='native') -> EigenDecomposition:
    """
    Full spectrum of a real symmetric matrix.

    :type H: :any:`HamiltonianMatrix` or numpy.ndarray
    :param H: Matrix to decompose.

    :type vectors: bool
    :param vectors: Whether to compute eigenvectors. |default| :code:`True`

    :type backend: str
    :param backend: :code:`'native'` (Householder + QL) or :code:`'lapack'`. |default| :code:`'native'`

    :raises: :any:`ConfigError` for a non-symmetric matrix or unknown backend;
        :any:`ConvergenceError` if QL exceeds its sweep cap.

    :returns: Ascending eigenvalues and matching eigenvectors.
    :rtype: :any:`EigenDecomposition`
    """
    if backend not in BACKENDS:
        raise ConfigError(f'Unknown eigensolver backend: {backend!r}, expected one of {BACKENDS}')

    source = H if isinstance(H, HamiltonianMatrix) else None
    a = np.asarray(H.entries if source is not None else H, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigError(f'eigh needs a square matrix, found shape {a.shape}')
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1.0)
    if a.size and np.max(np.abs(a - a.T)) > 1e-12 * scale:
        raise ConfigError('eigh needs a symmetric matrix')
    if source is None:
        source = _wrap(a)

    if backend == 'lapack':
        if vectors:
            values, vecs = np.linalg.eigh(a)
        else:
            values, vecs = np.linalg.eigvalsh(a), None
    else:
        d, e, Q = tridiagonalize(a, vectors=vectors)
        values, vecs = tridiagonal_ql(d, e, Q)
        order = np.argsort(values, kind='stable')
        values = values[order]
        if vecs is not None:
            vecs = vecs[:, order]

    values = np.array(values)
    values.setflags(write=False)
    if vecs is not None:
        vecs = np.array(vecs)
        vecs.setflags(write=False)
    _LOGGER.debug(f'{backend} eigh of dim {len(values)} done')
    return EigenDecomposition(values=values, vectors=vecs, source=source, backend=backend)


def _wrap(a:np.ndarray) -> HamiltonianMatrix:
    entries = np.array(a, dtype=float)
    entries.setflags(write=False)
    basis = SectorBasis(excitations=0, states=tuple((i,) for i in range(len(a))),
                        index_of={(i,): i for i in range(len(a))})
    return HamiltonianMatrix(spec=None, basis=basis, entries=entries, offset_applied=False)


def basis_state(basis:SectorBasis, state:Sequence[int]) -> np.ndarray:
    """
    Unit vector of a basis state, eg. :code:`basis_state(basis, (4, 5))`.

    :raises: :any:`ConfigError` if the state is not part of the basis.
    """
    key = tuple(state)
    if key not in basis.index_of:
        raise ConfigError(f'State {key} is not part of the {basis.excitations}-excitation basis')
    psi = np.zeros(len(basis), dtype=complex)
    psi[basis.index_of[key]] = 1.0
    return psi


def _initial(decomp:EigenDecomposition, psi0) -> np.ndarray:
    if decomp.vectors is None:
        raise ConfigError('Propagation needs eigenvectors, decompose with vectors=True')
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (decomp.dim,):
        raise ConfigError(f'Initial state must have {decomp.dim} amplitudes, found shape {psi0.shape}')
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > get_tolerances().norm_tol:
        raise ConfigError(f'Initial state must be normalized, found norm {norm!r}')
    return psi0


def propagate(decomp:EigenDecomposition, psi0, t:float) -> np.ndarray:
    """
    :code:`ψ(t) = V e^{-iΛt} Vᵀ ψ0` with :code:`ħ = 1`.

    :raises: :any:`ConfigError` if :code:`psi0` is not normalized.
    """
    psi0 = _initial(decomp, psi0)
    V = decomp.vectors
    c = V.T @ psi0
    return V @ (c * np.exp(-1j * decomp.values * t))


def evolve(decomp:EigenDecomposition, psi0, times:Sequence[float],
           observables:Sequence[Sequence[int]]=None) -> EvolutionTrace:
    """
    Propagate :code:`psi0` exactly over a time grid.

    :type decomp: :any:`EigenDecomposition`
    :param decomp: Decomposition with eigenvectors of a sector Hamiltonian.

    :type psi0: numpy.ndarray
    :param psi0: Normalized initial amplitudes in the sector basis.

    :type times: list[float]
    :param times: Sampling times.

    :type observables: list[tuple]
    :param observables: Basis states whose occupation is recorded, eg. :code:`[(5, 6), (4, 6)]`.
        Sites are folded onto the ring for closed chains. |default| :code:`None`

    :raises: :any:`ConfigError` for an unnormalized :code:`psi0` or an unknown observable.

    :returns: The sampled trace.
    :rtype: :any:`EvolutionTrace`
    """
    psi0 = _initial(decomp, psi0)
    source = decomp.source
    spec = source.spec if source is not None else None

    indices = {}
    for state in observables or ():
        key = tuple(state)
        if spec is not None and source.basis.excitations == 2:
            key = spec.pair(*key)
        elif spec is not None and source.basis.excitations == 1:
            key = (spec.site(key[0]),)
        if key not in source.basis.index_of:
            raise ConfigError(f'Observable {tuple(state)} is not part of the basis')
        indices[tuple(state)] = source.basis.index_of[key]

    times = np.asarray(times, dtype=float)
    V = decomp.vectors
    c = V.T @ psi0
    psi = (np.exp(-1j * np.outer(times, decomp.values)) * c) @ V.T

    norm = np.linalg.norm(psi, axis=1)
    energy = np.real(np.einsum('ti,ti->t', psi.conj(), psi @ decomp.matrix.T))
    occupations = {state: np.abs(psi[:, i]) ** 2 for state, i in indices.items()}

    _LOGGER.debug(f'Evolved over {len(times)} samples, max norm drift {np.max(np.abs(norm - 1)) if len(times) else 0:.3e}')
    return EvolutionTrace(times=times, observables=occupations, norm=norm, energy=energy, spec=spec)
