import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tsxplain.timeseries import TimeSeriesFrame, month_label


def random_frame(rng, n_periods, n_columns, start=24240):
    """Frame with positive random values; last column is the target."""
    names = tuple(f"col{j}" for j in range(n_columns))
    periods = tuple(month_label(start + t) for t in range(n_periods))
    values = rng.uniform(1.0, 100.0, size=(n_periods, n_columns))
    return TimeSeriesFrame(periods, names, values, names[-1])


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
