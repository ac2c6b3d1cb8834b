import ast
import logging
from pathlib import Path
from pynormality.general.logger import log, log_settings, adjust_logger
from pynormality.general.log_indenter import IndentedLoggerAdapter

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    adapter = IndentedLoggerAdapter(log_settings)
    assert adapter.info("--> Refining.").add() is adapter
    adapter.info("> round 1").add(2).info("deep").sub(2).sub().info("back")
    adapter.sub(5)
    assert adapter.indent() == ""
    lines = (tmp_path / "log.txt").read_text(encoding = "utf-8").splitlines()
    messages = [x.split(": ", 1)[1] for x in lines[-4:]]
    assert messages == ["--> Refining.", "    > round 1", "            deep", "back"]

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "DEBUG", testing = True)
    adapter = IndentedLoggerAdapter(log_settings, spaces = 2, indent_char = ".")
    adapter.add().debug("d").error("e")
    lines = (tmp_path / "log.txt").read_text(encoding = "utf-8").splitlines()
    assert lines[-2].endswith("DEBUG: ..d")
    assert lines[-1].endswith("ERROR: ..e")
    assert not hasattr(log, "mem_save") and not hasattr(log, "indent_set")
    adjust_logger(True, tmp_path, "INFO", testing = True)

def test_3():
    # conftest writes an html report when the plugin from the test extra is present
    tree = ast.parse((Path(__file__).parents[1] / "setup.py").read_text(encoding = "utf8"))
    call = next(x for x in ast.walk(tree) if isinstance(x, ast.Call) and getattr(x.func, "id", "") == "setup")
    kwargs = {x.arg: ast.literal_eval(x.value) for x in call.keywords if x.arg in ("extras_require", "install_requires")}
    assert {"pytest", "pytest-html", "hypothesis"} <= set(kwargs["extras_require"]["test"])
    assert logging.getLogger("pynormality.general.logger") is log_settings
