from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from quickview.corpus import load_clusters

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def synthetic_path() -> Path:
    return DATA_DIR / "synthetic.jsonl"


@pytest.fixture(scope="session")
def synthetic_clusters(synthetic_path):
    return load_clusters(synthetic_path)
