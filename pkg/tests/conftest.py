import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from indexforge.dataset import IndicatorMatrix  # noqa: E402


@pytest.fixture
def scaled():
    def make(values, **kw):
        return IndicatorMatrix.from_array(np.asarray(values, dtype=float), scaled=True, **kw)

    return make
