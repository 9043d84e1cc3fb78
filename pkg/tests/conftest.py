import os
import tempfile

# Before any project import: config reads the environment once.
os.environ.setdefault("MONOMIX_WORKERS", "1")
os.environ.setdefault("LOG_DIR", tempfile.mkdtemp(prefix="monomix-logs-"))

import pytest

from src.catalog.specs import build
from src.chain.rng import make_rng
from src.core.sets import ExplicitSet


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def coord0_zero():
    """{x : x_0 = 0} in n = 2, the standard non-monotone example."""
    return ExplicitSet.from_strings(["00", "01"], n=2)


@pytest.fixture
def coord0_one():
    return build("dictator(2,0)")
