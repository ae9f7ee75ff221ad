"""
Tests for configuration loading, run flags and temporary overrides.
"""

import os
import tempfile
import unittest
from unittest import mock

from config_manager import ConfigManager, RunConfig, config
from utils.microlocal import get_microlocal_settings
from utils.solver import get_solver_settings
from utils.spectral import get_spectral_settings


def _build_manager(text):
    tmp = tempfile.NamedTemporaryFile('w', suffix='.yaml', delete=False)
    tmp.write(text)
    tmp.close()
    manager = ConfigManager(tmp.name)
    os.unlink(tmp.name)
    return manager


class TestConfigManager(unittest.TestCase):
    def test_defaults_are_loaded(self):
        self.assertEqual(config.get_diophantine_defaults()['witness_depth'], 4)
        self.assertEqual(config.get_cli_defaults()['workers_env'], 'HYPOCALC_WORKERS')
        self.assertIn(config.get_logging_config()['level'], ('DEBUG', 'INFO', 'WARNING', 'ERROR'))

    def test_missing_key_returns_default(self):
        self.assertEqual(config.get('nowhere.at.all', 17), 17)

    def test_missing_file_falls_back_to_defaults(self):
        manager = ConfigManager('/nonexistent/hypocalc.yaml')
        self.assertEqual(manager.get('solver.divisor_floor'), 1e-8)

    def test_custom_file(self):
        manager = _build_manager("diophantine:\n  xi_max: 99\n")
        self.assertEqual(manager.get('diophantine.xi_max'), 99)
        self.assertIsNone(manager.get('solver.divisor_floor'))

    def test_reload_picks_up_edits(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'hypocalc.yaml')
            with open(path, 'w') as f:
                f.write("solver:\n  divisor_floor: 0.001\n")
            manager = ConfigManager(path)
            self.assertEqual(manager.get_solver_defaults()['divisor_floor'], 0.001)
            with open(path, 'w') as f:
                f.write("solver:\n  divisor_floor: 0.002\n")
            manager.reload_config()
            self.assertEqual(manager.get_solver_defaults()['divisor_floor'], 0.002)
            self.assertEqual(manager.get_solver_defaults()['rapid_threshold'], 4)

    def test_module_settings_follow_overrides(self):
        with config.overrides({'solver.divisor_floor': 0.25, 'microlocal.k_max': 3,
                               'spectral.phase_guard': 7}):
            self.assertEqual(get_solver_settings()['divisor_floor'], 0.25)
            self.assertEqual(get_microlocal_settings()['k_max'], 3.0)
            self.assertEqual(get_spectral_settings()['phase_guard'], 7)
        self.assertEqual(get_spectral_settings()['phase_guard'], config.get_spectral_defaults()['phase_guard'])

    def test_overrides_are_restored(self):
        before = config.get('solver.divisor_floor')
        with config.overrides({'solver.divisor_floor': 0.25, 'solver.brand_new': 1}):
            self.assertEqual(config.get('solver.divisor_floor'), 0.25)
            self.assertEqual(config.get('solver.brand_new'), 1)
        self.assertEqual(config.get('solver.divisor_floor'), before)
        self.assertIsNone(config.get('solver.brand_new'))


class TestRunConfig(unittest.TestCase):
    def test_flags_fall_back_to_configuration(self):
        run = RunConfig.from_options('scan')
        self.assertEqual(run.xi_max, config.get('diophantine.xi_max'))
        self.assertEqual(run.output_format, 'json')
        self.assertEqual(run.workers, 1)

    def test_extra_options_are_kept(self):
        run = RunConfig.from_options('microlocal', check='singular', dim=2)
        self.assertEqual(run.options, {'check': 'singular', 'dim': 2})

    def test_invalid_flags(self):
        for options in ({'xi_max': 0}, {'t_window': 0}, {'divisor_floor': 1.5}, {'fan_resolution': 1},
                        {'k_max': 0}, {'output_format': 'xml'}, {'xi_max': 'many'},
                        {'system_path': '/nonexistent/system.json'}):
            with self.subTest(options=options):
                with self.assertRaises(ValueError):
                    RunConfig.from_options('classify', **options)

    def test_unknown_subcommand(self):
        with self.assertRaises(ValueError):
            RunConfig.from_options('plot')

    def test_workers_from_environment(self):
        with mock.patch.dict(os.environ, {'HYPOCALC_WORKERS': '3'}):
            self.assertEqual(RunConfig.from_options('scan').workers, 3)
        with mock.patch.dict(os.environ, {'HYPOCALC_WORKERS': 'lots'}):
            with self.assertRaises(ValueError):
                RunConfig.from_options('scan')
        with mock.patch.dict(os.environ, {'HYPOCALC_WORKERS': '0'}):
            with self.assertRaises(ValueError):
                RunConfig.from_options('scan')


if __name__ == '__main__':
    unittest.main()
