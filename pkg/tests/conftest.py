import pytest

from appbench.layout import load_layout


@pytest.fixture(scope="session")
def heavy_hex():
    return load_layout("heavy-hex-127")
