import pytest

from src.config_manager import ConfigManager, VerifySettings, parse_dims
from src.exceptions import ConfigurationError


@pytest.fixture
def clean_env(monkeypatch):
    """Remove HYPERHARM_* variables and restore them (including .env additions) afterwards."""
    for name in ConfigManager.env_mappings:
        monkeypatch.setenv(name, '')
        monkeypatch.delenv(name)
    return monkeypatch


@pytest.fixture
def config_dir(tmp_path):
    directory = tmp_path / 'config'
    directory.mkdir()
    (directory / 'default.yml').write_text(
        "verify:\n  seed: 7\n  dims: '3..5'\nfinite_difference:\n  step: 0.002\n"
        "logging:\n  level: INFO\n"
    )
    return directory


def test_repository_defaults_match_acceptance_settings(clean_env):
    config = ConfigManager()
    assert config.verify_settings() == VerifySettings()
    assert config.get('table.count') == 201
    assert config.get('logging.level') == 'WARNING'


def test_yaml_layers_merge(clean_env, config_dir):
    (config_dir / 'local.yml').write_text("verify:\n  seed: 11\n")
    config = ConfigManager(str(config_dir))
    assert config.get('verify.seed') == 11
    assert config.get('verify.dims') == '3..5'
    assert config.get_section('finite_difference') == {'step': 0.002}


def test_environment_overrides_files(clean_env, config_dir):
    clean_env.setenv('HYPERHARM_VERIFY_SEED', '99')
    clean_env.setenv('HYPERHARM_FD_RICHARDSON', 'false')
    settings = ConfigManager(str(config_dir)).verify_settings()
    assert settings.seed == 99
    assert settings.richardson is False
    assert settings.step == 0.002
    assert settings.dims == (3, 5)


def test_dotenv_next_to_config_dir(clean_env, config_dir):
    (config_dir.parent / '.env').write_text("HYPERHARM_ODE_TOLERANCE=1e-7\n")
    config = ConfigManager(str(config_dir))
    assert config.get('verify.ode_tolerance') == pytest.approx(1e-7)


def test_malformed_yaml(clean_env, config_dir):
    (config_dir / 'config.yml').write_text("verify: [unclosed\n")
    with pytest.raises(ConfigurationError):
        ConfigManager(str(config_dir))


def test_non_mapping_yaml(clean_env, config_dir):
    (config_dir / 'config.yml').write_text("- just\n- a list\n")
    with pytest.raises(ConfigurationError):
        ConfigManager(str(config_dir))


def test_invalid_settings(clean_env, config_dir):
    config = ConfigManager(str(config_dir))
    config.set('finite_difference.step', -1.0)
    with pytest.raises(ConfigurationError):
        config.verify_settings()
    config.set('finite_difference.step', 'large')
    with pytest.raises(ConfigurationError):
        config.verify_settings()


def test_get_set_and_required(clean_env, config_dir):
    config = ConfigManager(str(config_dir))
    assert config.get('missing.key', 'fallback') == 'fallback'
    config.set('table.count', 11)
    assert config.to_dict()['table'] == {'count': 11}
    config.validate_required(['verify.seed', 'table.count'])
    with pytest.raises(ConfigurationError):
        config.validate_required(['verify.nothing'])


@pytest.mark.parametrize('value,expected', [('2..8', (2, 8)), ('5', (5, 5)), (4, (4, 4)), ((3, 6), (3, 6))])
def test_parse_dims(value, expected):
    assert parse_dims(value) == expected


@pytest.mark.parametrize('value', ['8..2', '1..4', 'two..three', '2-8'])
def test_parse_dims_rejects(value):
    with pytest.raises(ConfigurationError):
        parse_dims(value)
