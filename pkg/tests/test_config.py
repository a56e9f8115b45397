import pytest

from femtoreuse.config import (
    ConfigError, ScenarioConfig, apply_overrides, dump_config, load_config, parse_config,
)
from femtoreuse.schemes import SchemeKind


def test_empty_file_gives_defaults(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("")
    cfg = load_config(p)
    assert cfg == ScenarioConfig()
    assert (cfg.macro_radius, cfg.femto_radius, cfg.reference_fap_distance) == (1000.0, 10.0, 200.0)
    assert (cfg.carrier, cfg.macro_tx_power, cfg.fap_tx_power_max) == (900.0, 1500.0, 0.01)
    assert (cfg.bs_height, cfg.fap_height, cfg.gamma_db) == (50.0, 2.0, 9.0)
    assert cfg.ue_distance == 5.0 and cfg.neighbor_threshold == 60.0
    assert cfg.dense_threshold == 1000


def test_negative_gamma_accepted():
    assert parse_config("gamma_db = -3").gamma_db == -3.0


def test_zero_radius_rejected_with_key():
    with pytest.raises(ConfigError) as info:
        parse_config("femto_radius = 0")
    assert info.value.key == "femto_radius"
    assert "femto_radius" in str(info.value)


def test_unknown_and_duplicate_keys():
    with pytest.raises(ConfigError, match="bogus"):
        parse_config("bogus = 1")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("seed = 1\nseed = 2")
    with pytest.raises(ConfigError, match="expected"):
        parse_config("seed 1")


def test_parse_errors_name_key():
    with pytest.raises(ConfigError) as info:
        parse_config("trials = many")
    assert info.value.key == "trials"
    with pytest.raises(ConfigError) as info:
        parse_config("schemes = shared, cognitive")
    assert info.value.key == "schemes"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")


def test_comments_lists_and_schemes():
    cfg = parse_config("""
    # sweep definition
    seed = 7            # inline comment
    schemes = static, dynamic
    counts = 10, 100
    """)
    assert cfg.seed == 7
    assert cfg.schemes == (SchemeKind.STATIC, SchemeKind.DYNAMIC)
    assert cfg.counts == (10, 100)


@pytest.mark.parametrize("text, key", [
    ("dedicated_femto_fraction = 1.2", "dedicated_femto_fraction"),
    ("eta2 = 1.5", "eta2"),
    ("counts = 10,-1", "counts"),
    ("first_tier_bands = 2,3,2,3,2", "first_tier_bands"),
    ("static_policy = clever", "static_policy"),
    ("aggregate_metric = median", "aggregate_metric"),
    ("min_radius = 12", "min_radius"),
    ("reference_fap_distance = 1500", "reference_fap_distance"),
])
def test_invariants(text, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key


def test_round_trip_defaults(tmp_path):
    p = tmp_path / "defaults.cfg"
    p.write_text(dump_config(ScenarioConfig()))
    assert load_config(p) == ScenarioConfig()


def test_round_trip_custom(tmp_path):
    cfg = ScenarioConfig(seed=99, counts=(5, 50), schemes=(SchemeKind.SHARED,), wall_loss=7.5)
    p = tmp_path / "c.cfg"
    p.write_text(dump_config(cfg))
    assert load_config(p) == cfg


def test_overrides():
    cfg = apply_overrides(ScenarioConfig(), {"seed": 3})
    assert cfg.seed == 3
    with pytest.raises(ConfigError):
        apply_overrides(cfg, {"colour": "red"})
