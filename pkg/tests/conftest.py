"""
Shared fixtures for the hq test suite.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from qscalar import NUMERIC, SYMBOLIC, GroundField, set_field

@pytest.fixture(autouse=True)
def symbolic_field():
    """Every test starts in the symbolic field ℚ(q)"""
    previous = set_field(GroundField(SYMBOLIC))
    yield
    set_field(previous)

@pytest.fixture
def numeric_field():
    """Switch to ℚ with q = 2 for one test"""
    field_ = GroundField(NUMERIC, 2)
    set_field(field_)
    return field_
