import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from dynatomic.cache import WorkspaceConfig  # noqa: E402


@pytest.fixture(scope="session")
def config(tmp_path_factory):
    """Shared workspace so expensive artifacts are computed once per run."""
    return WorkspaceConfig(cache_dir=tmp_path_factory.mktemp("cache"))
