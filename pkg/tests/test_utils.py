"""
Unit tests for utils.py

Tests for exact row reduction, kernel bases and JSON file helpers.
"""

import json
import pytest
from fractions import Fraction

from qscalar import Q
from utils import load_json_argument, nullspace, row_reduce, save_json_atomic

ONE = Fraction(1)

# ============================================================================
# Row Reduction Tests
# ============================================================================

@pytest.mark.unit
class TestRowReduce:
    """Tests for row_reduce()"""

    def test_identity_rows(self):
        """Test independent unit rows stay put"""
        reduced, pivots = row_reduce([{"a": ONE}, {"b": 2 * ONE}], ["a", "b"], ONE)
        assert reduced == [{"a": 1}, {"b": 1}]
        assert pivots == ["a", "b"]

    def test_dependent_rows_dropped(self):
        """Test a multiple of another row reduces to nothing"""
        rows = [{"a": ONE, "b": ONE}, {"a": 2 * ONE, "b": 2 * ONE}]
        reduced, pivots = row_reduce(rows, ["a", "b"], ONE)
        assert reduced == [{"a": 1, "b": 1}]
        assert pivots == ["a"]

    def test_back_substitution(self):
        """Test earlier rows are cleared above later pivots"""
        rows = [{"a": ONE, "b": ONE}, {"b": ONE}]
        reduced, _ = row_reduce(rows, ["a", "b"], ONE)
        assert reduced == [{"a": 1}, {"b": 1}]

    def test_column_order_chooses_pivots(self):
        """Test pivots follow the given column order"""
        _, pivots = row_reduce([{"a": ONE, "b": ONE}], ["b", "a"], ONE)
        assert pivots == ["b"]

    def test_unknown_column(self):
        """Test rows outside the column order raise KeyError"""
        with pytest.raises(KeyError):
            row_reduce([{"z": ONE}], ["a"], ONE)

# ============================================================================
# Kernel Tests
# ============================================================================

@pytest.mark.unit
class TestNullspace:
    """Tests for nullspace()"""

    def test_one_relation(self):
        """Test the kernel of a + b = 0"""
        assert nullspace([{"a": ONE, "b": ONE}], ["a", "b"], ONE) == [{"a": 1, "b": -1}]

    def test_full_rank(self):
        """Test a full-rank system has a trivial kernel"""
        assert nullspace([{"a": ONE}, {"b": ONE}], ["a", "b"], ONE) == []

    def test_no_rows(self):
        """Test every column is free without rows"""
        assert nullspace([], ["a", "b"], ONE) == [{"a": 1}, {"b": 1}]

    def test_rational_functions(self):
        """Test exact elimination over Q(q)"""
        one = Q ** 0
        kernel = nullspace([{"a": Q, "b": one + Q}], ["a", "b"], one)
        assert kernel == [{"a": one, "b": -Q / (one + Q)}]

    def test_canonical_basis(self):
        """Test equal kernels give equal bases"""
        first = nullspace([{"a": ONE, "b": ONE, "c": ONE}], ["a", "b", "c"], ONE)
        second = nullspace([{"a": 3 * ONE, "b": 3 * ONE, "c": 3 * ONE}], ["a", "b", "c"], ONE)
        assert first == second
        assert len(first) == 2

# ============================================================================
# JSON File Tests
# ============================================================================

@pytest.mark.unit
class TestJsonFiles:
    """Tests for save_json_atomic() and load_json_argument()"""

    def test_save_and_load(self, tmp_path):
        """Test an atomic write reads back through an @ argument"""
        path = tmp_path / "out.json"
        save_json_atomic(str(path), {"b": 1, "a": [1, 2]})
        assert not (tmp_path / "out.json.tmp").exists()
        assert load_json_argument(f"@{path}") == {"a": [1, 2], "b": 1}

    def test_inline_argument(self):
        """Test inline JSON text"""
        assert load_json_argument('{"word": []}') == {"word": []}

    def test_invalid_inline(self):
        """Test malformed JSON raises JSONDecodeError"""
        with pytest.raises(json.JSONDecodeError):
            load_json_argument("{word")

    def test_missing_file(self, tmp_path):
        """Test a missing @file raises OSError"""
        with pytest.raises(OSError):
            load_json_argument(f"@{tmp_path / 'absent.json'}")
