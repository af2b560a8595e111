import sys
from pathlib import Path

import pytest
from hypothesis import settings

# make `import strategies` work when pytest is invoked from anywhere
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

from condpref import walk_museum_instance  # noqa: E402


@pytest.fixture
def walk_museum():
    return walk_museum_instance()
