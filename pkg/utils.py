"""
hq Utility Functions

This module contains utility functions for:
- Exact sparse row reduction and kernel bases
- Atomic JSON file output
"""

import os
import json
import logging
from typing import Any, Hashable, Sequence

logger = logging.getLogger(__name__)

SparseRow = dict[Hashable, Any]

# ============================================================================
# Exact Linear Algebra
# ============================================================================

def row_reduce(rows: Sequence[SparseRow], columns: Sequence[Hashable], one: Any) -> tuple[list[SparseRow], list[Hashable]]:
    """
    Reduced row echelon form of a sparse matrix over an exact field.

    Rows are {column: scalar} maps with no zero entries. Scalars only need
    +, -, *, / and truthiness, so both Fraction and rational functions work.

    Args:
        rows: Matrix rows
        columns: Column order used to choose pivots
        one: Multiplicative identity of the scalar field

    Returns:
        Tuple of (reduced nonzero rows, pivot column of each row)
    """
    known = set(columns)
    pending = [dict(row) for row in rows if row]
    for row in pending:
        if not known.issuperset(row):
            raise KeyError(f"Row references columns outside the column order: {sorted(map(str, set(row) - known))}")

    reduced: list[SparseRow] = []
    pivots: list[Hashable] = []

    for column in columns:
        pivot_index = next((i for i, row in enumerate(pending) if row.get(column)), None)
        if pivot_index is None:
            continue

        pivot_row = pending.pop(pivot_index)
        inverse = one / pivot_row[column]
        pivot_row = {c: v * inverse for c, v in pivot_row.items()}

        pending = [_eliminate(row, pivot_row, column) for row in pending]
        pending = [row for row in pending if row]
        reduced = [_eliminate(row, pivot_row, column) for row in reduced]

        reduced.append(pivot_row)
        pivots.append(column)

    return reduced, pivots

def _eliminate(row: SparseRow, pivot_row: SparseRow, column: Hashable) -> SparseRow:
    factor = row.get(column)
    if not factor:
        return row
    result = dict(row)
    for c, v in pivot_row.items():
        value = result.get(c, 0) - factor * v
        if value:
            result[c] = value
        else:
            result.pop(c, None)
    return result

def nullspace(rows: Sequence[SparseRow], columns: Sequence[Hashable], one: Any) -> list[SparseRow]:
    """
    Basis of the right kernel {v : row · v = 0 for every row}.

    The basis is returned in reduced echelon form over the same column order,
    pivots normalized to 1, so equal kernels give equal output.

    Args:
        rows: Matrix rows
        columns: Column order (the unknowns)
        one: Multiplicative identity of the scalar field

    Returns:
        List of kernel vectors as {column: scalar} maps
    """
    reduced, pivots = row_reduce(rows, columns, one)
    pivot_set = set(pivots)

    basis: list[SparseRow] = []
    for free in columns:
        if free in pivot_set:
            continue
        vector: SparseRow = {free: one}
        for row, pivot in zip(reduced, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)

    if not basis:
        return []

    echelon, _ = row_reduce(basis, columns, one)
    logger.debug(f"Kernel of {len(rows)} rows over {len(columns)} unknowns has dimension {len(echelon)}")
    return echelon

# ============================================================================
# JSON Output
# ============================================================================

def save_json_atomic(path: str, payload: Any) -> None:
    """
    Write JSON with an atomic rename.

    Args:
        path: Destination file
        payload: JSON-serializable data
    """
    temp_path = path + ".tmp"
    try:
        with open(temp_path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        os.replace(temp_path, path)
        logger.info(f"Wrote {path}")
    except Exception as e:
        logger.error(f"Error writing {path}: {e}")
        raise

def load_json_argument(text: str) -> Any:
    """
    Decode a JSON command-line argument, reading from a file when it starts with '@'.

    Raises:
        json.JSONDecodeError: If the text is not valid JSON
    """
    if text.startswith("@"):
        path = text[1:]
        with open(path, 'r', encoding='utf-8') as f:
            logger.info(f"Reading JSON argument from {path}")
            return json.load(f)
    return json.loads(text)
