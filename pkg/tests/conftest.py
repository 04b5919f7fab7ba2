from pathlib import Path

import pytest

from src.services.graphs import DatasetService, GraphDataset, make_cycles_vs_stars, write_tu_dataset

CASES_DIR = Path(__file__).parent / 'cases'


@pytest.fixture
def toy_dir() -> Path:
    return CASES_DIR / 'TOY'


@pytest.fixture(scope='session')
def cycles_vs_stars() -> GraphDataset:
    return DatasetService().prepare(make_cycles_vs_stars(per_class=20, seed=0))


@pytest.fixture(scope='session')
def synthetic_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    directory = tmp_path_factory.mktemp('datasets') / 'CYCLES_VS_STARS'
    write_tu_dataset(make_cycles_vs_stars(per_class=30, seed=0), directory)
    return directory
