import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockcm import ExperimentConfig, ParseError, Scheme, ValidationError
from fockcm.config import apply_overrides, format_config, parse_config
from fockcm.presets import PRESETS, get_preset


def test_empty_file_gives_defaults():
    assert parse_config("# nothing here\n\n") == ExperimentConfig()


def test_all_value_kinds():
    text = """
    # interference run
    scheme = interference_epg
    alpha_init = 1.5,-0.5   # complex as re,im
    n_target = 4
    tau_mean = 2.0
    spread = 0.25
    distribution = gaussian
    n_max = 40
    final_rabi_frequency = auto
    tail_threshold = off
    selection = born_sampled
    correlation = uncorrelated
    """
    cfg = parse_config(text)
    assert cfg.scheme is Scheme.INTERFERENCE_EPG
    assert cfg.alpha_init == complex(1.5, -0.5)
    assert (cfg.n_target, cfg.tau_mean, cfg.spread, cfg.n_max) == (4, 2.0, 0.25, 40)
    assert cfg.final_rabi_frequency is None and cfg.tail_threshold is None


def test_real_alpha_shorthand():
    assert parse_config("alpha_init = 2").alpha_init == 2 + 0j


def test_negative_spread_is_validation_error():
    with pytest.raises(ValidationError, match="spread"):
        parse_config("spread = -1")


@pytest.mark.parametrize(
    "text,line",
    [
        ("tau_mean = 1\nspred = 0.1\n", 2),
        ("g = 1\ng = 2\n", 2),
        ("just words\n", 1),
        ("\n\nn_atoms = many\n", 3),
        ("alpha_init = 1,2,3\n", 1),
        ("seed =\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_config(text, source="run.cfg")
    assert info.value.line == line
    assert f"run.cfg:{line}:" in str(info.value)


def test_bad_enum_is_validation_error():
    with pytest.raises(ValidationError, match="scheme"):
        parse_config("scheme = magic")


def test_base_config_layering():
    cfg = parse_config("seed = 9", base=get_preset("fig2-large"))
    assert cfg.seed == 9
    assert cfg.scheme is Scheme.INTERFERENCE_EPG


def test_fig2_large_preset_file():
    text = format_config(get_preset("fig2-large"))
    cfg = parse_config(text)
    assert cfg.scheme is Scheme.INTERFERENCE_EPG
    assert cfg.spread == 2 * math.pi / (2 * math.sqrt(22))
    assert cfg.final_phase == -math.pi / 2


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_round_trip(name):
    cfg = get_preset(name)
    assert parse_config(format_config(cfg, f"preset: {name}")) == cfg


@given(
    st.floats(1e-3, 1e3),
    st.floats(-5, 5),
    st.floats(-5, 5),
    st.integers(0, 2**40),
    st.one_of(st.none(), st.integers(10, 500)),
)
def test_round_trip_is_exact(tau, re, im, seed, n_max):
    cfg = ExperimentConfig(tau_mean=tau, alpha_init=complex(re, im), seed=seed, n_max=n_max)
    assert parse_config(format_config(cfg)) == cfg


def test_overrides():
    cfg = apply_overrides(ExperimentConfig(), ["seed=4", "scheme = nsm", "seed=5"])
    assert cfg.seed == 5 and cfg.scheme is Scheme.NSM
    with pytest.raises(ParseError, match="--set"):
        apply_overrides(cfg, ["nope=1"])
