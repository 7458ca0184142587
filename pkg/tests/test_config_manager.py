"""
Unit tests for ConfigManager module
"""

import os
import tempfile
from pathlib import Path

import pytest
import yaml

from src.jcwitness.config_manager import ConfigManager
from src.jcwitness.detect import OptimizerSettings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    """Isolate tests from JCW_ variables and any .env file in the working directory."""
    for name in ConfigManager.ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


class TestConfigManager:
    """Test cases for ConfigManager class"""

    def setup_method(self):
        """Set up test fixtures"""
        self.config_manager = ConfigManager()

    def test_initialization(self):
        """Test ConfigManager initialization"""
        manager = ConfigManager()
        for section in ('physics', 'grid', 'optimizer', 'series', 'output', 'logging'):
            assert section in manager.config

    def test_default_config_values(self):
        """Test default configuration values"""
        assert self.config_manager.get('optimizer.restarts') == 32
        assert self.config_manager.get('optimizer.seed') == 0
        assert self.config_manager.get('grid.t_steps') == 200
        assert self.config_manager.get('series.k_max') == 60
        assert self.config_manager.get('output.format') == 'csv'

    def test_defaults_not_shared(self):
        """Test that instances do not share mutable defaults"""
        self.config_manager.set('optimizer.restarts', 5)
        assert ConfigManager().get('optimizer.restarts') == 32
        assert ConfigManager.DEFAULT_CONFIG['optimizer']['restarts'] == 32

    def test_get_with_default(self):
        """Test getting config value with default"""
        assert self.config_manager.get('nonexistent.key', 'default_value') == 'default_value'
        assert self.config_manager.get('optimizer.restarts.deeper', 7) == 7

    def test_set_nested_key(self):
        """Test setting nested configuration key"""
        self.config_manager.set('new.nested.key', 'value')
        assert self.config_manager.get('new.nested.key') == 'value'

    def test_get_all_is_a_copy(self):
        """Test that get_all returns a detached copy"""
        config = self.config_manager.get_all()
        config['optimizer']['restarts'] = 1
        assert self.config_manager.get('optimizer.restarts') == 32

    def test_optimizer_settings(self):
        """Test building OptimizerSettings from the optimizer section"""
        self.config_manager.set('optimizer.restarts', 16)
        self.config_manager.set('optimizer.workers', 4)
        settings = self.config_manager.optimizer_settings()
        assert isinstance(settings, OptimizerSettings)
        assert settings.restarts == 16
        assert settings.xatol == pytest.approx(1e-9)

    def test_load_from_file(self):
        """Test loading configuration from YAML file"""
        test_config = {'physics': {'gamma': 0.3}, 'optimizer': {'restarts': 8}}

        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump(test_config, f)
            temp_path = f.name

        try:
            assert self.config_manager.load_from_file(temp_path) is True
            assert self.config_manager.get('physics.gamma') == pytest.approx(0.3)
            assert self.config_manager.get('physics.g') == pytest.approx(1.0)
            assert self.config_manager.get('optimizer.restarts') == 8
        finally:
            os.unlink(temp_path)

    def test_load_from_file_not_found(self):
        """Test loading from non-existent file"""
        assert self.config_manager.load_from_file('/nonexistent/config.yaml') is False

    def test_save_to_file(self):
        """Test saving configuration to file"""
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            temp_path = f.name

        try:
            self.config_manager.set('physics.delta', 5.0)
            assert self.config_manager.save_to_file(temp_path) is True
            with open(temp_path, 'r') as f:
                saved_config = yaml.safe_load(f)
            assert saved_config['physics']['delta'] == 5.0
            assert ConfigManager(temp_path).get('physics.delta') == 5.0
        finally:
            if os.path.exists(temp_path):
                os.unlink(temp_path)

    def test_load_from_env(self, monkeypatch):
        """Test loading configuration from environment variables"""
        monkeypatch.setenv('JCW_RESTARTS', '64')
        monkeypatch.setenv('JCW_SEED', '9')
        monkeypatch.setenv('JCW_OUTPUT_FORMAT', 'json')
        monkeypatch.setenv('JCW_LOG_LEVEL', 'DEBUG')

        manager = ConfigManager()

        assert manager.get('optimizer.restarts') == 64
        assert manager.get('optimizer.seed') == 9
        assert manager.get('output.format') == 'json'
        assert manager.get('logging.level') == 'DEBUG'

    def test_malformed_env_ignored(self, monkeypatch):
        """Test that unparsable environment values keep the default"""
        monkeypatch.setenv('JCW_WORKERS', 'many')
        assert ConfigManager().get('optimizer.workers') == 1

    def test_dotenv_file(self, tmp_path):
        """Test reading JCW_ variables from a .env file"""
        (tmp_path / '.env').write_text('JCW_RESTARTS=12\n')
        try:
            assert ConfigManager().get('optimizer.restarts') == 12
        finally:
            os.environ.pop('JCW_RESTARTS', None)

    def test_env_overrides_file(self, monkeypatch):
        """Test that the environment wins over the config file"""
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump({'optimizer': {'seed': 3}}, f)
            temp_path = f.name

        try:
            monkeypatch.setenv('JCW_SEED', '11')
            assert ConfigManager(temp_path).get('optimizer.seed') == 11
        finally:
            os.unlink(temp_path)

    def test_working_directory_config_loaded_by_default(self, tmp_path):
        """Test that ./config.yaml is read when no file is given"""
        (tmp_path / 'config.yaml').write_text(yaml.dump({'physics': {'gamma': 0.3}}))
        manager = ConfigManager()
        assert manager.get('physics.gamma') == pytest.approx(0.3)
        assert manager.config_file == 'config.yaml'
        other = tmp_path / 'other.yaml'
        other.write_text(yaml.dump({'physics': {'gamma': 0.1}}))
        assert ConfigManager(str(other)).get('physics.gamma') == pytest.approx(0.1)

    def test_shipped_config_matches_defaults(self):
        """Test that the repository config.yaml restates the built-in defaults"""
        shipped = Path(__file__).resolve().parents[1] / 'config.yaml'
        with open(shipped) as f:
            assert yaml.safe_load(f) == ConfigManager.DEFAULT_CONFIG
