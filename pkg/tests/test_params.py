import pytest
from hypothesis import given, settings, strategies as st

from teamassembly.params import (
    CONFIG_KEYS, ConfigError, Culture, CultureParams, InvalidParams, ModelParams, apply_overrides,
    check_params, default_params, format_config, load_config, params_from_values,
    parse_config_text, validate_params,
)
from teamassembly.rng import RngStream, derive_seed

from conftest import INGER_CFG


def test_culture_enumeration():
    assert list(Culture) == [Culture.BASIC, Culture.CLINICAL]
    assert Culture.BASIC < Culture.CLINICAL
    assert Culture.BASIC.other is Culture.CLINICAL and Culture.CLINICAL.other is Culture.BASIC
    assert Culture.parse(" Clinical ") is Culture.CLINICAL
    with pytest.raises(ValueError, match="biomedical"):
        Culture.parse("biomedical")


def test_inger_profile_is_valid():
    params = default_params()
    assert params.mixing == 0.14
    assert params.culture(Culture.BASIC).p_incumbent == 0.22
    assert params.culture(Culture.CLINICAL).p_incumbent == 0.45
    assert params.culture(Culture.BASIC).mean_team_size == 7.48
    assert params.culture(Culture.CLINICAL).mean_team_size == 4.78
    assert validate_params(params) is params


def test_mixing_out_of_range():
    with pytest.raises(InvalidParams) as err:
        validate_params(default_params(mixing=1.5))
    assert [v.field for v in err.value.violations] == ["mixing"]
    assert "mixing out of [0,1]" in str(err.value)


def test_minimum_team_size():
    params = default_params().with_culture(Culture.CLINICAL, mean_team_size=2.0, team_size_jitter=1)
    with pytest.raises(InvalidParams, match="minimum drawn team size below 2"):
        validate_params(params)


def test_all_violations_reported():
    params = default_params(mixing=-0.1, max_downtime=0, seed=-1).with_culture(
        Culture.BASIC, p_incumbent=1.2, q_repeat=-0.5)
    fields = {v.field for v in check_params(params)}
    assert fields == {"mixing", "max_downtime", "seed", "basic.p_incumbent", "basic.q_repeat"}


def test_missing_culture():
    params = ModelParams(per_culture={Culture.BASIC: CultureParams(0.2, 0.5, 5.0)})
    assert [v.field for v in check_params(params)] == ["clinical.*"]


@given(
    p=st.floats(0, 1), q=st.floats(0, 1), size=st.floats(2, 20), jitter=st.integers(0, 3),
    mixing=st.floats(-0.5, 1.5), mj=st.floats(0, 0.5), w=st.floats(0, 1), downtime=st.integers(-2, 100),
)
def test_validation_idempotent(p, q, size, jitter, mixing, mj, w, downtime):
    cp = CultureParams(p, q, size, jitter)
    params = ModelParams({Culture.BASIC: cp, Culture.CLINICAL: cp}, mixing, mj, w, downtime, 7)
    try:
        once = validate_params(params)
    except InvalidParams:
        assert check_params(params)
    else:
        assert validate_params(once) == once == params


# -- config ---------------------------------------------------------------------

def test_config_roundtrip():
    params = default_params()
    text = format_config(params)
    assert [line.split(" = ")[0] for line in text.splitlines()] == list(CONFIG_KEYS)
    assert params_from_values(parse_config_text(text)) == params


def test_shipped_config_matches_defaults():
    assert load_config(INGER_CFG) == default_params()


def test_config_comments_and_unknown_keys():
    values = parse_config_text("# header\nmixing = 0.46   # note\n\nbasic.q_repeat=0.9\n")
    assert values == {"mixing": 0.46, "basic.q_repeat": 0.9}
    with pytest.raises(ConfigError, match="unknown key 'homophily'"):
        parse_config_text("homophily = 0.14\n")
    with pytest.raises(ConfigError, match=":1:"):
        parse_config_text("mixing 0.14\n")
    with pytest.raises(ConfigError, match="max_downtime"):
        parse_config_text("max_downtime = 4.5\n")


def test_overrides_last_wins_and_order_independent():
    base = {"mixing": 0.14}
    assert apply_overrides(base, ["mixing=0.2", "mixing=0.3"])["mixing"] == 0.3
    a = apply_overrides(base, ["seed=5", "basic.q_repeat=0.1"])
    b = apply_overrides(base, ["basic.q_repeat=0.1", "seed=5"])
    assert a == b
    with pytest.raises(ConfigError):
        apply_overrides(base, ["nonsense=1"])


# -- rng ------------------------------------------------------------------------

def test_stream_reproducible():
    a, b = RngStream(42, 3), RngStream(42, 3)
    assert [a.random() for _ in range(10_000)] == [b.random() for _ in range(10_000)]


def test_streams_differ_across_replicates():
    first = [[RngStream(42, r).random() for _ in range(100)] for r in range(50)]
    for i in range(len(first)):
        for j in range(i + 1, len(first)):
            assert first[i] != first[j]


def test_derivation_is_frozen():
    # pins the cross-platform derivation; a change here changes every stored run
    assert derive_seed(20180101, 0, 0) == 183350811462102240813065730120243280988
    s = RngStream(1, 0)
    assert (s.random(), s.random()) == (0.02919199406414852, 0.8718367272370064)
    assert derive_seed(0, 0) != derive_seed(0, 1) != derive_seed(1, 0)


@settings(max_examples=50)
@given(lo=st.integers(-5, 5), width=st.integers(0, 5), seed=st.integers(0, 2**64 - 1))
def test_randint_closed_interval(lo, width, seed):
    rng = RngStream(seed)
    draws = {rng.randint(lo, lo + width) for _ in range(200)}
    assert min(draws) >= lo and max(draws) <= lo + width
