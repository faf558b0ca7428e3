import os

import pytest


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MTEA_DADOS"):
        return
    pular = pytest.mark.skip(reason="MTEA_DADOS não definido")
    for item in items:
        if "lento" in item.keywords:
            item.add_marker(pular)
