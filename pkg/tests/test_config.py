import pytest

from ctql import PolicyMode, Vec2
from ctql.config import ConfigError, config_from_dict, config_to_dict, \
    parse_config


def write_yaml(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


class TestParseConfig:
    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            parse_config("/nonexistent/config.yaml")

    def test_empty_file_gives_defaults(self, tmp_path):
        cfg = parse_config(write_yaml(tmp_path, ""))
        assert cfg.env.mu == 0.5
        assert cfg.mode is PolicyMode.CTQL
        assert cfg.n_trials == 50
        assert cfg.learn.epsilon == cfg.tutor.epsilon

    def test_minimal_config_fills_defaults(self, tmp_path):
        cfg = parse_config(write_yaml(tmp_path, "run:\n  seed: 9\n"))
        assert cfg.seed == 9
        assert cfg.grid.angle_bins == 8
        assert cfg.action_speeds == (1.0, 2.0)

    def test_gain_constraint_named_in_error(self, tmp_path):
        path = write_yaml(tmp_path, "tutor:\n  k: 0.5\n")
        with pytest.raises(ConfigError, match=r"k > 1"):
            parse_config(path)

    def test_conservative_radius_error(self, tmp_path):
        path = write_yaml(tmp_path, "tutor:\n  rho_t_hat: 3.0\nenv:\n  rho_t: 2.0\n")
        with pytest.raises(ConfigError, match="conservative"):
            parse_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_yaml(tmp_path, "env:\n  warp_speed: 9\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = write_yaml(tmp_path, "rocket:\n  fuel: 1\n")
        with pytest.raises(ConfigError, match="unknown section"):
            parse_config(path)

    def test_bad_mode_lists_permitted(self, tmp_path):
        path = write_yaml(tmp_path, "run:\n  mode: dance\n")
        with pytest.raises(ConfigError, match="pureq"):
            parse_config(path)

    def test_invalid_yaml(self, tmp_path):
        path = write_yaml(tmp_path, "env: [unclosed\n")
        with pytest.raises(ConfigError, match="YAML"):
            parse_config(path)

    def test_goal_center_coercion(self, tmp_path):
        cfg = parse_config(write_yaml(tmp_path, "env:\n  x_g: [1.5, -2]\n"))
        assert cfg.env.x_g == Vec2(1.5, -2.0)

    def test_step_ratio_validated(self, tmp_path):
        path = write_yaml(
            tmp_path, "env:\n  sim_dt: 0.03\nrun:\n  control_dt: 0.1\n")
        with pytest.raises(ConfigError, match="control_dt"):
            parse_config(path)

    def test_speed_above_cap(self, tmp_path):
        path = write_yaml(
            tmp_path, "actions:\n  speeds: [1.0, 5.0]\nenv:\n  v_h_max: 2.0\n")
        with pytest.raises(ConfigError, match="v_h_max"):
            parse_config(path)

    def test_multiple_violations_all_reported(self, tmp_path):
        path = write_yaml(
            tmp_path,
            "tutor:\n  k: 0.5\nlearn:\n  alpha: 0\nrun:\n  n_trials: 0\n")
        with pytest.raises(ConfigError) as err:
            parse_config(path)
        text = str(err.value)
        assert "tutor.k" in text
        assert "learn.alpha" in text
        assert "run.n_trials" in text

    def test_share_table_flag(self, tmp_path):
        cfg = parse_config(write_yaml(tmp_path, "run:\n  share_table: true\n"))
        assert cfg.share_table

    def test_type_errors_report_offending_value(self, tmp_path):
        path = write_yaml(tmp_path, "env:\n  mu: fast\n")
        with pytest.raises(ConfigError, match="'fast'"):
            parse_config(path)


class TestRoundTrip:
    def test_dict_round_trip(self):
        from ctql import RunConfig
        cfg = RunConfig(seed=77, n_trials=3)
        assert config_from_dict(config_to_dict(cfg)) == cfg

    def test_none_is_defaults(self):
        from ctql import RunConfig
        assert config_from_dict(None) == RunConfig()
