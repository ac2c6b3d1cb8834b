import pytest
from pynormality.main import RunConfig
from pynormality.general.logger import adjust_logger

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    config = RunConfig("digits", predicate = "div(y, x)", bases = (2, 10), count = 12, max_rounds = 4)
    assert config.validate()
    fh = str(tmp_path / "config.json")
    config.to_json(fh)
    loaded = RunConfig.from_json(fh)
    assert loaded.bases == (2, 10)
    assert loaded.predicate == "div(y, x)"
    assert loaded.max_rounds == 4
    assert loaded.control_source().take(4) == config.control_source().take(4)

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    bad = [
        RunConfig("digits", count = 5),
        RunConfig("digits", builtin = "true", predicate = "x = 1", count = 5),
        RunConfig("digits", builtin = "maybe", count = 5),
        RunConfig("digits", builtin = "true", bases = (1,), count = 5),
        RunConfig("digits", builtin = "true", bases = (2,), count = 0),
        RunConfig("reduce", control = (1, 0), count = 3),
        RunConfig("analyze", base = 2, ell = 0),
        RunConfig("analyze", input = str(tmp_path / "missing.txt")),
        RunConfig("verify"),
        RunConfig("params", max_index = 0),
        RunConfig("unknown"),
    ]
    for config in bad:
        with pytest.raises(ValueError):
            config.validate()

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "predicate.txt"
    fh.write_text("x = 1\n", encoding = "utf8")
    config = RunConfig("reduce", predicate_file = str(fh), count = 6)
    assert config.validate()
    assert config.control_source().take(6) == [1, 2, 1, 2, 3, 1]
    config = RunConfig("reduce", control = (5, 5), count = 4)
    assert config.control_source().take(4) == [5, 5, 1, 2]
    with pytest.warns(UserWarning):
        assert not RunConfig("digits", builtin = "true", count = 3, toy_params = "k=2,ell=8").params_table().conforming
