import logging
import os
from unittest import TestCase, mock
from unittest.mock import patch

from spinchain import config
from spinchain.config import Tolerances, get_tolerances, reset_tolerances, set_tolerances
from spinchain.errors import ConfigError


class TestConfig(TestCase):

    def tearDown(self):
        reset_tolerances()

    def test_defaults(self):
        tolerances = reset_tolerances()
        self.assertEqual(tolerances.tol_im, 1e-9)
        self.assertEqual(tolerances.residual_tol, 1e-8)
        self.assertEqual(tolerances.norm_tol, 1e-10)
        self.assertEqual(tolerances.workers, 1)

    def test_set_tolerances(self):
        set_tolerances(tol_im=1e-6, workers=4)
        self.assertEqual(get_tolerances().tol_im, 1e-6)
        self.assertEqual(get_tolerances().workers, 4)
        self.assertEqual(get_tolerances().residual_tol, Tolerances().residual_tol, 'Other knobs should keep their values')

    def test_set_unknown(self):
        self.assertRaises(ConfigError, set_tolerances, tol_real=1e-6)
        self.assertRaises(ConfigError, set_tolerances, spurious_tol=1e-7)

    def test_set_non_positive(self):
        self.assertRaises(ConfigError, set_tolerances, tol_im=0)
        self.assertRaises(ConfigError, set_tolerances, tol_im=-1e-9)
        self.assertRaises(ConfigError, set_tolerances, tol_im='small')
        self.assertRaises(ConfigError, set_tolerances, workers=True)

    def test_as_dict(self):
        self.assertEqual(Tolerances().as_dict()['band_widening'], 3.0)

    @mock.patch.dict(os.environ, {'SPINCHAIN_TOL_IM': '1e-7', 'SPINCHAIN_WORKERS': '3'})
    def test_environment_overrides(self):
        config.initialise()
        self.assertEqual(get_tolerances().tol_im, 1e-7)
        self.assertEqual(get_tolerances().workers, 3)

    @mock.patch.dict(os.environ, {'SPINCHAIN_WORKERS': 'many'})
    @patch('logging.StreamHandler.emit', lambda x, y: None) #disable stream handler
    def test_environment_malformed(self):
        with self.assertLogs(logging.getLogger('spinchain'), level='WARNING') as cm:
            config.initialise()
        self.assertTrue('SPINCHAIN_WORKERS' in ';'.join(cm.output))
        self.assertEqual(get_tolerances().workers, 1)

    @mock.patch.dict(os.environ, {'SPINCHAIN_TOL_IM': '-1'})
    @patch('logging.StreamHandler.emit', lambda x, y: None) #disable stream handler
    def test_environment_invalid(self):
        with self.assertLogs(logging.getLogger('spinchain'), level='WARNING') as cm:
            config.initialise()
        self.assertTrue('Ignoring environment tolerances' in ';'.join(cm.output))
        self.assertEqual(get_tolerances().tol_im, 1e-9)

    def test_single_handler(self):
        config.initialise()
        config.initialise()
        handlers = [h for h in logging.getLogger('spinchain').handlers if getattr(h, '_spinchain_default', False)]
        self.assertEqual(len(handlers), 1, 'Repeated initialise should not stack handlers')
