import math
from unittest import TestCase

import numpy as np
from numpy.polynomial import polynomial as P

from spinchain import analytic, quantization
from spinchain.chain import ChainSpec, build_hamiltonian
from spinchain.errors import ConfigError, RegimeError
from spinchain.quantization import RootClass, RootSource


def energies(roots):
    return sorted(r.energy for r in roots if r.classification != RootClass.SPURIOUS)


def spectrum(spec):
    return np.linalg.eigvalsh(build_hamiltonian(spec, 1).entries)


class TestOpenChain(TestCase):

    def test_count(self):
        spec = ChainSpec(N=10, boundary='open', J=1.0, Delta=0.5, g=0.7, n0=4)
        roots = quantization.solve_open_chain(spec)
        self.assertEqual(len(roots), 10)
        self.assertTrue(all(r.source == RootSource.OPEN_CHAIN for r in roots))
        self.assertTrue(all(r.theta.imag >= 0 for r in roots))

    def test_energies_match_spectrum(self):
        for spec in (ChainSpec(N=8, boundary='open', J=1.0, Delta=0.5, g=0.8, n0=3),
                     ChainSpec(N=9, boundary='open', J=0.7, Delta=0.2, g=-1.4, n0=5),
                     ChainSpec(N=6, boundary='open', J=1.0, Delta=2.0, g=0.7, n0=2)):
            with self.subTest(spec=spec):
                np.testing.assert_allclose(energies(quantization.solve_open_chain(spec)), spectrum(spec), atol=1e-7)

    def test_residuals(self):
        spec = ChainSpec(N=10, boundary='open', J=1.0, Delta=0.5, g=0.7, n0=4)
        coefficients = quantization.open_chain_polynomial(spec)
        scale = np.max(np.abs(coefficients))
        for root in quantization.solve_open_chain(spec):
            self.assertLess(abs(P.polyval(root.z, coefficients)) / scale, 1e-8)
            self.assertLess(root.residual, 1e-8)

    def test_spurious(self):
        spec = ChainSpec(N=10, boundary='open', J=1.0, Delta=0.5, g=0.7, n0=4)
        roots = quantization.solve_open_chain(spec, include_spurious=True)
        spurious = [r for r in roots if r.classification == RootClass.SPURIOUS]
        self.assertEqual(len(roots), 12)
        self.assertEqual(sorted(r.theta.real for r in spurious), [0.0, math.pi])

    def test_defect_position_drops_out(self):
        spec = ChainSpec(N=8, boundary='open', J=1.0, Delta=0.5, g=0.0, n0=1)
        first = [r.theta for r in quantization.solve_open_chain(spec)]
        second = [r.theta for r in quantization.solve_open_chain(spec.with_changes(n0=6))]
        np.testing.assert_allclose(first, second, atol=1e-12)

    def test_ideal_chain(self):
        spec = ChainSpec(N=6, boundary='open', J=1.0, Delta=1.0)
        roots = quantization.solve_open_chain(spec)
        np.testing.assert_allclose([r.theta.real for r in roots], [math.pi * k / 6 for k in range(6)])
        np.testing.assert_allclose(energies(roots), spectrum(spec), atol=1e-10)

    def test_below_threshold(self):
        spec = ChainSpec(N=6, boundary='open', J=1.0, Delta=10.0, g=0.1, n0=3)
        roots = quantization.solve_open_chain(spec)
        self.assertIsNone(quantization.defect_root(roots, spec))

    def test_strong_defect(self):
        spec = ChainSpec(N=12, boundary='open', J=1.0, Delta=0.5, g=3.0, n0=6)
        root = quantization.defect_root(quantization.solve_open_chain(spec), spec)
        self.assertLess(abs(root.theta.imag - math.asinh(3)) / math.asinh(3), 0.02)

    def test_wrong_boundary(self):
        self.assertRaises(ConfigError, quantization.solve_open_chain, ChainSpec(N=6, boundary='closed', J=1, Delta=1, g=1))


class TestClosedChain(TestCase):

    def test_energies_match_spectrum(self):
        for spec in (ChainSpec(N=8, boundary='closed', J=1.0, Delta=0.0, g=0.6, n0=3),
                     ChainSpec(N=9, boundary='closed', J=1.0, Delta=2.0, g=-0.9, n0=1),
                     ChainSpec(N=12, boundary='closed', J=0.5, Delta=0.0, g=3.0, n0=6)):
            with self.subTest(spec=spec):
                roots = quantization.solve_closed_chain(spec)
                self.assertEqual(len(roots), spec.N)
                np.testing.assert_allclose(energies(roots), spectrum(spec), atol=1e-7)

    def test_nodes(self):
        spec = ChainSpec(N=9, boundary='closed', J=1.0, Delta=0.0, g=0.5)
        nodes = [r for r in quantization.solve_closed_chain(spec) if r.source == RootSource.CLOSED_CHAIN_NODE]
        self.assertEqual(len(nodes), 4)
        np.testing.assert_allclose([r.theta.real for r in nodes], [2 * math.pi * k / 9 for k in range(1, 5)])

    def test_plane_waves(self):
        spec = ChainSpec(N=7, boundary='closed', J=1.0, Delta=0.0, g=0.0)
        roots = quantization.solve_closed_chain(spec)
        self.assertEqual(quantization.localized_count(roots), 0)
        np.testing.assert_allclose(energies(roots), spectrum(spec), atol=1e-12)
        for root in roots:
            self.assertGreaterEqual(root.theta.real, 0)
            self.assertLessEqual(root.theta.real, math.pi + 1e-12, 'Ring momenta should be folded into [0, pi]')
            self.assertEqual(root.theta.imag, 0)

    def test_large_defect(self):
        spec = ChainSpec(N=12, boundary='closed', J=1.0, Delta=0.0, g=3.0)
        root = quantization.defect_root(quantization.solve_closed_chain(spec), spec)
        self.assertLess(abs(root.theta.imag - math.asinh(3)) / math.asinh(3), 0.02)
        self.assertAlmostEqual(root.theta.real, 0, places=9)

    def test_small_defect_even(self):
        spec = ChainSpec(N=12, boundary='closed', J=1.0, Delta=0.0, g=0.01)
        (root,) = [r for r in quantization.solve_closed_chain(spec) if r.localized]
        expected = math.sqrt(2 * 0.01 / 12)
        self.assertLess(abs(root.theta.imag - expected) / expected, 0.05)

    def test_odd_threshold(self):
        N = 7
        below = ChainSpec(N=N, boundary='closed', J=1.0, Delta=0.0, g=-0.9 * 2 / N)
        above = below.with_changes(g=-1.1 * 2 / N)
        self.assertEqual(quantization.localized_count(quantization.solve_closed_chain(below)), 0)
        (root,) = [r for r in quantization.solve_closed_chain(above) if r.localized]
        self.assertAlmostEqual(root.theta.real, math.pi)

    def test_threshold_scan(self):
        onset = quantization.closed_chain_threshold(7, -np.arange(0.25, 0.32, 0.002))
        self.assertLessEqual(abs(onset.parameter - 2 / 7), 0.002)
        self.assertEqual(onset.count, 1)

    def test_spurious_odd(self):
        spec = ChainSpec(N=7, boundary='closed', J=1.0, Delta=0.0, g=0.5)
        roots = quantization.solve_closed_chain(spec, include_spurious=True)
        self.assertEqual(len(roots), 8)


class TestBoundPairRoots(TestCase):

    def spec(self, N, q, Delta=10.0):
        return ChainSpec(N=N, boundary='closed', J=1.0, Delta=Delta, g=Delta / (1 + q))

    def test_counts(self):
        for q, localized in ((1.5, 0), (-1.5, 0), (0.95, 1), (0.5, 2)):
            with self.subTest(q=q):
                roots = quantization.solve_bp_surface(self.spec(20, q))
                self.assertEqual(len(roots), 18)
                self.assertEqual(quantization.localized_count(roots), localized)

    def test_limit(self):
        roots = quantization.solve_bp_surface(self.spec(60, 0.5))
        strongest = max(r.theta.imag for r in roots)
        self.assertLess(abs(strongest - math.log(2)), 1e-3)

    def test_energies(self):
        spec = self.spec(20, 0.5)
        center = analytic.bp_band_center(spec)
        for root in quantization.solve_bp_surface(spec):
            self.assertAlmostEqual(root.energy, center + spec.J / (2 * spec.Delta) * math.cos(root.theta.real) * math.cosh(root.theta.imag), places=9)

    def test_resonance_rejected(self):
        self.assertRaises(RegimeError, quantization.solve_bp_surface, ChainSpec(N=10, boundary='closed', J=1.0, Delta=10.0, g=10.0))

    def test_bifurcations(self):
        N = 10
        grid = np.round(np.arange(0.705, 1.2, 0.01), 6)
        onsets = quantization.find_bp_bifurcations(N, grid)
        self.assertEqual([o.count for o in onsets], [1, 2])
        self.assertLessEqual(abs(onsets[0].parameter - 1), 0.01)
        self.assertLessEqual(abs(onsets[1].parameter - (1 - 2 / (N - 1))), 0.01)

    def test_invalid_q(self):
        self.assertRaises(ConfigError, quantization.bp_localized_counts, 10, [0.5, -1.0])


class TestHybridRoots(TestCase):

    def spec(self, N, x, Delta=10.0):
        return ChainSpec(N=N, boundary='closed', J=1.0, Delta=Delta, g=Delta - x / 2)

    def test_real(self):
        roots = quantization.solve_hybrid(self.spec(20, 0.8))
        self.assertEqual(len(roots), 19)
        self.assertEqual(quantization.localized_count(roots), 0)

    def test_limit(self):
        roots = quantization.solve_hybrid(self.spec(60, 4.0))
        (root,) = [r for r in roots if r.localized]
        self.assertLess(abs(root.theta.imag - math.log(4)), 1e-3)
        self.assertAlmostEqual(root.theta.real, 0, places=9)

    def test_oscillating(self):
        (root,) = [r for r in quantization.solve_hybrid(self.spec(30, -4.0)) if r.localized]
        self.assertAlmostEqual(root.theta.real, math.pi)

    def test_at_resonance(self):
        roots = quantization.solve_hybrid(self.spec(12, 0.0))
        self.assertEqual(len(roots), 11)
        self.assertEqual(quantization.localized_count(roots), 0)


class TestDispatch(TestCase):

    def test_default_source(self):
        spec = ChainSpec(N=8, boundary='closed', J=1.0, Delta=0.0, g=0.5)
        self.assertEqual(quantization.solve(spec), quantization.solve_closed_chain(spec))

    def test_by_name(self):
        spec = ChainSpec(N=8, boundary='closed', J=1.0, Delta=10.0, g=8.0)
        self.assertEqual(len(quantization.solve(spec, 'Hybrid')), 7)
        self.assertEqual(len(quantization.solve(spec, RootSource.BP_SURFACE)), 6)

    def test_unknown(self):
        spec = ChainSpec(N=8, boundary='closed', J=1.0, Delta=10.0, g=8.0)
        self.assertRaises(ConfigError, quantization.solve, spec, 'Bethe')

    def test_to_dict(self):
        spec = ChainSpec(N=8, boundary='closed', J=1.0, Delta=0.0, g=0.5)
        row = quantization.solve(spec)[0].to_dict()
        self.assertEqual(set(row), {'source', 'classification', 'theta_re', 'theta_im', 'z_re', 'z_im', 'energy', 'residual'})
