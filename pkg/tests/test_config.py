import pytest

from haariso.config import DEFAULT, Config


def test_defaults():
    assert DEFAULT.group_bound == 64
    assert DEFAULT.aut_element_cap == 2_000_000
    assert DEFAULT.subset_enum_bound == 16


def test_environment_then_overrides():
    env = {"HAARISO_GROUP_BOUND": "32", "HAARISO_BUDGET": "1e5", "HAARISO_SEED": ""}
    cfg = Config.from_env(env)
    assert cfg.group_bound == 32 and cfg.backtrack_budget == 100_000 and cfg.seed == 0
    assert Config.from_env(env, group_bound=12, seed=None).group_bound == 12


def test_validation():
    with pytest.raises(ValueError):
        Config(group_bound=0)
    with pytest.raises(ValueError):
        Config(seed=-1)
    assert DEFAULT.with_(subset_enum_bound=8, seed=None).subset_enum_bound == 8
