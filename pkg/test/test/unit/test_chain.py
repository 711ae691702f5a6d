import math
from unittest import TestCase

import numpy as np
from hypothesis import given, settings, strategies as st

from spinchain.chain import Boundary, ChainSpec, build_basis, build_hamiltonian, build_hamiltonian_direct, \
    build_one_exc_transcribed, build_two_exc_transcribed, ground_state_offset
from spinchain.errors import ConfigError

_values = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)
_couplings = st.one_of(st.floats(min_value=0.1, max_value=3), st.floats(min_value=-3, max_value=-0.1))


@st.composite
def chain_specs(draw, min_N=4, max_N=20):
    N = draw(st.integers(min_value=min_N, max_value=max_N))
    return ChainSpec(N=N,
                     boundary=draw(st.sampled_from(['open', 'closed'])),
                     J=draw(_couplings),
                     Delta=draw(_values),
                     eps=draw(_values),
                     g=draw(_values),
                     n0=draw(st.integers(min_value=1, max_value=N)))


class TestChainSpec(TestCase):

    def test_boundary_string(self):
        spec = ChainSpec(N=6, boundary='Closed', J=1, Delta=2)
        self.assertEqual(spec.boundary, Boundary.CLOSED)
        self.assertIsInstance(spec.J, float)

    def test_invalid(self):
        self.assertRaises(ConfigError, ChainSpec, N=3, boundary='closed', J=1, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=1, boundary='open', J=1, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='ring', J=1, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='open', J=0, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='open', J=1, Delta=1, n0=0)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='open', J=1, Delta=1, n0=7)
        self.assertRaises(ConfigError, ChainSpec, N=6.0, boundary='open', J=1, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=True, boundary='open', J=1, Delta=1)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='open', J=1, Delta=math.inf)
        self.assertRaises(ConfigError, ChainSpec, N=6, boundary='open', J=1, Delta='2')

    def test_open_minimum(self):
        spec = ChainSpec(N=2, boundary='open', J=1, Delta=1)
        self.assertEqual(spec.bonds, ((1, 2),))

    def test_from_dict(self):
        spec = ChainSpec.from_dict({'N': 10, 'boundary': 'closed', 'J': 1, 'Delta': 10, 'g': 10, 'n0': 5})
        self.assertEqual(spec.n0, 5)
        self.assertEqual(spec.eps, 0.0)
        self.assertEqual(ChainSpec.from_json(spec.to_json()), spec)

    def test_from_dict_invalid(self):
        self.assertRaises(ConfigError, ChainSpec.from_dict, {'N': 10, 'boundary': 'closed', 'J': 1, 'Delta': 1, 'h': 2})
        self.assertRaises(ConfigError, ChainSpec.from_dict, {'N': 10, 'boundary': 'closed', 'J': 1})
        self.assertRaises(ConfigError, ChainSpec.from_dict, [10, 'closed'])
        self.assertRaises(ConfigError, ChainSpec.from_json, '{"N": 10,')

    def test_ring_geometry(self):
        spec = ChainSpec(N=10, boundary='closed', J=1, Delta=1)
        self.assertEqual(spec.bonds[-1], (10, 1))
        self.assertEqual(spec.pair(10, 11), (1, 10))
        self.assertEqual(spec.distance(1, 10), 1)
        self.assertRaises(ConfigError, spec.pair, 3, 13)

    def test_open_geometry(self):
        spec = ChainSpec(N=10, boundary='open', J=1, Delta=1)
        self.assertEqual(len(spec.bonds), 9)
        self.assertEqual(spec.distance(1, 10), 9)
        self.assertRaises(ConfigError, spec.site, 11)

    def test_eps1(self):
        self.assertEqual(ChainSpec(N=4, boundary='open', J=2, Delta=3, eps=1).eps1, -5)


class TestBasis(TestCase):

    def test_sizes(self):
        for N in (4, 7, 12):
            spec = ChainSpec(N=N, boundary='closed', J=1, Delta=1)
            self.assertEqual(len(build_basis(spec, 1)), N)
            self.assertEqual(len(build_basis(spec, 2)), N * (N - 1) // 2)

    def test_ordering(self):
        basis = build_basis(ChainSpec(N=4, boundary='open', J=1, Delta=1), 2)
        self.assertEqual(basis.states, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
        self.assertEqual(basis.index_of[(2, 4)], 4)

    def test_invalid_sector(self):
        spec = ChainSpec(N=6, boundary='open', J=1, Delta=1)
        self.assertRaises(ConfigError, build_basis, spec, 3)
        self.assertRaises(ConfigError, build_basis, spec, True)
        self.assertRaises(ConfigError, build_basis, ChainSpec(N=3, boundary='open', J=1, Delta=1), 2)


class TestHamiltonian(TestCase):

    def test_ground_state_offset(self):
        self.assertEqual(ground_state_offset(ChainSpec(N=4, boundary='open', J=1, Delta=2, eps=1, g=2)), -1.5)
        self.assertEqual(ground_state_offset(ChainSpec(N=4, boundary='closed', J=1, Delta=2, eps=1, g=2)), -1.0)

    def test_one_excitation_entries(self):
        spec = ChainSpec(N=5, boundary='open', J=2, Delta=3, eps=1, g=0.5, n0=3)
        H = build_hamiltonian(spec, 1).entries
        self.assertAlmostEqual(H[0, 0], spec.eps1 + spec.J * spec.Delta / 2)
        self.assertAlmostEqual(H[2, 2], spec.eps1 + spec.g)
        self.assertAlmostEqual(H[1, 1], spec.eps1)
        self.assertAlmostEqual(H[0, 1], spec.J / 2)
        self.assertEqual(H[0, 2], 0)

    def test_two_excitation_adjacent(self):
        spec = ChainSpec(N=6, boundary='closed', J=1, Delta=4, eps=0.5)
        H = build_hamiltonian(spec, 2)
        i = H.basis.index_of[(3, 4)]
        self.assertAlmostEqual(H.entries[i, i], 2 * spec.eps1 + spec.J * spec.Delta)
        wrap = H.basis.index_of[(1, 6)]
        self.assertAlmostEqual(H.entries[wrap, wrap], 2 * spec.eps1 + spec.J * spec.Delta)

    def test_read_only(self):
        H = build_hamiltonian(ChainSpec(N=5, boundary='open', J=1, Delta=1), 2)
        with self.assertRaises(ValueError):
            H.entries[0, 0] = 1.0

    def test_unknown_construction(self):
        self.assertRaises(ConfigError, build_hamiltonian, ChainSpec(N=5, boundary='open', J=1, Delta=1), 1, 'guessed')

    def test_ring_spectrum(self):
        spec = ChainSpec(N=9, boundary='closed', J=1.3, Delta=0.7, eps=0.2)
        values = np.linalg.eigvalsh(build_hamiltonian(spec, 1).entries)
        expected = sorted(spec.eps1 + spec.J * math.cos(2 * math.pi * k / spec.N) for k in range(spec.N))
        np.testing.assert_allclose(values, expected, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(chain_specs())
    def test_direct_matches_transcribed(self, spec):
        for excitations, transcribed in ((1, build_one_exc_transcribed), (2, build_two_exc_transcribed)):
            direct = build_hamiltonian_direct(spec, build_basis(spec, excitations)).entries
            written = transcribed(spec).entries
            scale = max(1.0, float(np.max(np.abs(direct))))
            np.testing.assert_allclose(direct, written, rtol=0, atol=1e-12 * scale,
                                       err_msg=f'{excitations}-excitation sector of {spec}')

    @settings(max_examples=25, deadline=None)
    @given(chain_specs(max_N=10))
    def test_symmetric(self, spec):
        H = build_hamiltonian(spec, 2).entries
        np.testing.assert_array_equal(H, H.T)
