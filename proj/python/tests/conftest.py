import json
import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("QVDP_CLI") or shutil.which("qvdp")
    if not path:
        pytest.skip("qvdp executable not available")
    return path


@pytest.fixture(scope="session")
def schema():
    def load(name):
        return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())

    return load
