"""
conftest.py  –  Repository root on sys.path for the test tree; loguru kept
at WARNING so suite and pipeline banners stay out of pytest output.
"""

import sys

import pytest
from loguru import logger


@pytest.fixture(autouse=True, scope="session")
def _quiet_logs():
    logger.remove()
    handler = logger.add(sys.stderr, level="WARNING")
    yield
    logger.remove(handler)
