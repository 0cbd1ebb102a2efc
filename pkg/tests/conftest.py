"""
Shared fixtures for the lab's test-suite.
"""

import logging
import math
import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from core.kinematics import SearchConfig


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop handlers bound to streams a test runner may have closed."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)


@pytest.fixture
def hbar_unit_h():
    """Reduced Planck constant for h = 1."""
    return 1.0 / (2.0 * math.pi)


@pytest.fixture
def table_config():
    """x = 0.8, gamma = 1.1, h = E = 1."""
    return SearchConfig.from_h(0.8, 1.1, 1.0, 1.0)
