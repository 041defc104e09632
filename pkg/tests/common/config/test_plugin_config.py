import os
import unittest
from pathlib import Path
from unittest import mock

from src.common.config import PluginConfig, plugin_config


class TestPluginConfig(unittest.TestCase):
    def test_defaults(self):
        self.assertEqual(plugin_config.region_grid, 64)
        self.assertEqual(plugin_config.fallback_steps, 10)
        self.assertEqual(plugin_config.presets_dir, Path('resource/presets'))

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {'SEEKER_REGION_GRID': '128', 'SEEKER_LOG_LEVEL': 'DEBUG'}):
            config = PluginConfig()
        self.assertEqual(config.region_grid, 128)
        self.assertEqual(config.log_level, 'DEBUG')

    def test_unknown_keys_ignored(self):
        config = PluginConfig(shape_gain=2.0, no_such_setting=1)
        self.assertEqual(config.shape_gain, 2.0)
        self.assertFalse(hasattr(config, 'no_such_setting'))
