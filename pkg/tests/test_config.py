import pytest

from lexforge.config import PipelineConfig, coerce, field_name, load_config, parse_config_text


def test_defaults_valid():
    cfg = PipelineConfig()
    assert cfg.min_freq == 10 and cfg.t_threshold == 1.65 and cfg.top_n == 3
    assert cfg.noun_tags == ("NN", "NNP", "NNPS", "NNS")


@pytest.mark.parametrize("kwargs", [
    {"top_n": 0},
    {"min_freq": 1},
    {"euclid_threshold": None, "euclid_relative": None},
    {"dtw_threshold": None, "dtw_relative": None},
    {"t_threshold": 0},
    {"slope_band": -0.1},
    {"jump_growth": -1},
    {"noun_tags": ()},
])
def test_invalid(kwargs):
    with pytest.raises(ValueError):
        PipelineConfig(**kwargs)


def test_resolve_fills_anchor_constants():
    cfg = PipelineConfig().resolve(100_000, 80_000)
    assert (cfg.min_gap_source, cfg.max_jump_target) == (200, 400)
    fixed = PipelineConfig(min_gap_source=30).resolve(100_000, 80_000)
    assert fixed.min_gap_source == 30


def test_parse_config_text():
    text = """
    # comment
    min-freq = 12
    euclid_threshold = 40.5   # trailing comment
    dtw_relative = none
    dtw_threshold = 300
    noun_tags = NN, NNP
    max_start_offset_ratio = 0.25
    """
    assert parse_config_text(text) == {
        "min_freq": 12,
        "euclid_threshold": 40.5,
        "dtw_relative": None,
        "dtw_threshold": 300.0,
        "noun_tags": ("NN", "NNP"),
        "max_start_offset": 0.25,
    }


@pytest.mark.parametrize("text", ["nonsense", "bogus_key = 1", "min_freq = ten"])
def test_parse_errors_name_line(text):
    with pytest.raises(ValueError, match="line 1"):
        parse_config_text(text)


def test_cli_overrides_file(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("top_n = 5\nmin_freq = 12\n", encoding="utf-8")
    cfg = load_config(path, {"top-n": 2, "t_threshold": None, "--slope-band": "0.2"})
    assert cfg.top_n == 2 and cfg.min_freq == 12 and cfg.slope_band == 0.2
    assert cfg.t_threshold == 1.65


def test_field_name_and_coerce():
    assert field_name("--min-gap-source") == "min_gap_source"
    with pytest.raises(KeyError):
        field_name("nope")
    assert coerce("dtw_band", "auto") is None
    assert coerce("workers", "3") == 3
    assert coerce("noun_tags", ["NN"]) == ("NN",)


def test_as_dict_round_trips():
    cfg = PipelineConfig(top_n=2)
    assert PipelineConfig(**{**cfg.as_dict(), "noun_tags": tuple(cfg.as_dict()["noun_tags"])}) == cfg
