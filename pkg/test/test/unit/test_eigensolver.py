import numpy as np
from unittest import TestCase

from spinchain.chain import ChainSpec, build_basis, build_hamiltonian
from spinchain.eigensolver import basis_state, eigh, evolve, propagate, tridiagonal_ql, tridiagonalize
from spinchain.errors import ConfigError, ConvergenceError


def random_symmetric(n, seed=0):
    a = np.random.default_rng(seed).normal(size=(n, n))
    return (a + a.T) / 2


class TestEigh(TestCase):

    def assertHygiene(self, decomp, norm):
        self.assertLessEqual(decomp.residual(), 1e-10 * norm)
        self.assertLessEqual(decomp.orthonormality_error(), 1e-10 * max(norm, 1.0))

    def test_random(self):
        a = random_symmetric(40)
        decomp = eigh(a)
        self.assertHygiene(decomp, np.linalg.norm(a))
        self.assertTrue(np.all(np.diff(decomp.values) >= 0), 'Eigenvalues should ascend')

    def test_matches_lapack(self):
        a = random_symmetric(30, seed=1)
        native = eigh(a, backend='native')
        lapack = eigh(a, backend='lapack')
        np.testing.assert_allclose(native.values, lapack.values, atol=1e-10 * np.linalg.norm(a))

    def test_hamiltonian(self):
        H = build_hamiltonian(ChainSpec(N=10, boundary='closed', J=1.0, Delta=10.0, g=10.0, n0=5), 2)
        decomp = eigh(H)
        self.assertHygiene(decomp, H.norm)
        self.assertIs(decomp.source, H)

    def test_degenerate(self):
        H = build_hamiltonian(ChainSpec(N=12, boundary='closed', J=1.0, Delta=0.0), 1)
        decomp = eigh(H)
        self.assertHygiene(decomp, H.norm)

    def test_values_only(self):
        decomp = eigh(random_symmetric(8), vectors=False)
        self.assertIsNone(decomp.vectors)
        self.assertRaises(ConfigError, decomp.residual)
        self.assertRaises(ConfigError, decomp.orthonormality_error)

    def test_small(self):
        np.testing.assert_allclose(eigh(np.array([[2.0]])).values, [2.0])
        np.testing.assert_allclose(eigh(np.array([[0.0, 1.0], [1.0, 0.0]])).values, [-1.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(eigh(np.diag([3.0, 1.0, 2.0])).values, [1.0, 2.0, 3.0])

    def test_invalid(self):
        self.assertRaises(ConfigError, eigh, np.array([[0.0, 1.0], [0.0, 0.0]]))
        self.assertRaises(ConfigError, eigh, np.zeros((2, 3)))
        self.assertRaises(ConfigError, eigh, np.eye(2), backend='arpack')

    def test_read_only(self):
        decomp = eigh(random_symmetric(4))
        with self.assertRaises(ValueError):
            decomp.values[0] = 1.0

    def test_convergence_error(self):
        d, e, _ = tridiagonalize(random_symmetric(6), vectors=False)
        self.assertRaises(ConvergenceError, tridiagonal_ql, d, e, max_sweeps=0)

    def test_tridiagonalize(self):
        a = random_symmetric(7, seed=3)
        d, e, Q = tridiagonalize(a)
        T = np.diag(d) + np.diag(e[:-1], 1) + np.diag(e[:-1], -1)
        np.testing.assert_allclose(Q @ T @ Q.T, a, atol=1e-12)


class TestEvolve(TestCase):

    def setUp(self):
        self.spec = ChainSpec(N=10, boundary='closed', J=1.0, Delta=10.0, g=10.0, n0=5)
        self.H = build_hamiltonian(self.spec, 2)
        self.decomp = eigh(self.H)
        self.psi0 = basis_state(self.H.basis, (6, 7))

    def test_drift(self):
        trace = evolve(self.decomp, self.psi0, np.linspace(0, 200, 2001), [(6, 7), (5, 7)])
        self.assertEqual(len(trace), 2001)
        self.assertLessEqual(np.max(np.abs(trace.norm - 1)), 1e-10)
        self.assertLessEqual(np.max(np.abs(trace.energy - trace.energy[0])), 1e-10 * self.H.norm)
        self.assertAlmostEqual(trace.observables[(6, 7)][0], 1.0)
        self.assertAlmostEqual(trace.observables[(5, 7)][0], 0.0)

    def test_time_reversal(self):
        psi = propagate(self.decomp, self.psi0, 50.0)
        back = propagate(self.decomp, psi, -50.0)
        self.assertLessEqual(np.max(np.abs(back - self.psi0)), 1e-9)

    def test_matches_propagate(self):
        trace = evolve(self.decomp, self.psi0, [7.5], [(6, 7)])
        psi = propagate(self.decomp, self.psi0, 7.5)
        self.assertAlmostEqual(trace.observables[(6, 7)][0], abs(psi[self.H.basis.index_of[(6, 7)]]) ** 2)

    def test_ring_folding(self):
        trace = evolve(self.decomp, self.psi0, [0.0], [(10, 11)])
        self.assertIn((10, 11), trace.observables)

    def test_unnormalized(self):
        self.assertRaises(ConfigError, evolve, self.decomp, 2 * self.psi0, [0.0])
        self.assertRaises(ConfigError, propagate, self.decomp, self.psi0[:-1], 0.0)

    def test_unknown_observable(self):
        self.assertRaises(ConfigError, evolve, self.decomp, self.psi0, [0.0], [(3, 3)])

    def test_needs_vectors(self):
        self.assertRaises(ConfigError, evolve, eigh(self.H, vectors=False), self.psi0, [0.0])

    def test_basis_state(self):
        basis = build_basis(self.spec, 2)
        self.assertEqual(basis_state(basis, (1, 2))[0], 1.0)
        self.assertRaises(ConfigError, basis_state, basis, (2, 1))
