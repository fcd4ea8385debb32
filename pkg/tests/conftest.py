import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from helpers import make_rng  # noqa: E402

# example generation is derandomized so runs are reproducible; numpy draws follow STOQDYN_SEED
settings.register_profile("stoqdyn", deadline=None, derandomize=True)
settings.load_profile("stoqdyn")


@pytest.fixture
def rng():
    return make_rng()
