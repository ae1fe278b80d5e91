import subprocess
import sys

import pytest

SMALL_GRID = """\
# torharm-grid v1
# 0 1 2 -1 1 2 0.86602540378443865
0,-1,0.25,OK
0,1,0.5,SLOW
1,-1,nan,DIV
1,1,2,INSIDE
"""


@pytest.fixture
def small_grid_text():
    return SMALL_GRID


@pytest.fixture(scope="session")
def default_error_map(tmp_path_factory):
    """GridFileV1 fixture produced by the primary suite's CLI (the external
    interface; no library linkage)."""
    path = tmp_path_factory.mktemp("fixtures") / "error_map_default.grid"
    cmd = [sys.executable, "-m", "torharm.cli", "torus-map", "--out", str(path)]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    except FileNotFoundError:
        pytest.skip("primary torharm CLI not available")
    if proc.returncode != 0:
        pytest.skip(f"primary torharm CLI failed: {proc.stderr.strip()}")
    return path
