import os
from datetime import datetime
import pytest
import pynormality

@pytest.hookimpl(tryfirst=True)
def pytest_configure(config):

    if config.pluginmanager.hasplugin("html"):
        folder = os.path.join(os.path.split(pynormality.__path__[0])[0], "tests", "results")
        if not os.path.exists(folder):
            os.makedirs(folder)
        config.option.htmlpath = os.path.join(folder, f"{datetime.now():%Y%m%d_%H%M%S}.html")
        config.option.self_contained_html = True

def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run tests marked as slow.")

def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
