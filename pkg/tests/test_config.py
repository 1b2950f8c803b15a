import pytest

from gradex import ConfigError, ExchangeMode, NetworkConfig


def test_defaults_are_reference_scenario():
    cfg = NetworkConfig()
    assert (cfg.radius, cfg.power_dbm, cfg.noise_psd_dbm_hz) == (100.0, 30.0, -174.0)
    assert (cfg.bandwidth_hz, cfg.alpha, cfg.ref_gain) == (10e6, 2.0, 1e-7)
    assert cfg.exchange_mode is ExchangeMode.EDGE


@pytest.mark.parametrize(
    "changes",
    [
        {"n": 1},
        {"n": 2.5},
        {"radius": 0.0},
        {"beta": 0.0},
        {"beta": 0.5},
        {"alpha": 1.9},
        {"bandwidth_hz": 0.0},
        {"ref_gain": -1.0},
        {"seed": -1},
        {"seed": 2**64},
        {"exchange_mode": "both"},
    ],
)
def test_invalid_configs_rejected(changes):
    with pytest.raises(ConfigError):
        NetworkConfig(**changes)


def test_exchange_mode_accepts_strings():
    assert NetworkConfig(exchange_mode="direction").exchange_mode is ExchangeMode.DIRECTION


def test_with_and_to_dict_round_trip():
    cfg = NetworkConfig().with_(n=50, beta=0.2, exchange_mode="direction")
    assert NetworkConfig(**cfg.to_dict()) == cfg
