"""
hq Configuration

This module contains all configuration settings for the package including:
- Ground field selection (symbolic or numeric q)
- Default verification window and tower depth
- Randomized verification parameters
- Logging configuration
- JSON config file loading and settings resolution
"""

import os
import json
import logging
from dataclasses import dataclass
from typing import Any, Optional
from dotenv import load_dotenv

# validators imports this module; only its attributes are read here, at call time
import validators

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

# ============================================================================
# Ground Field Configuration
# ============================================================================

FIELD_MODES: tuple[str, ...] = ("symbolic", "numeric")
"""Supported ground field modes"""

FIELD_MODE: str = os.environ.get("HQ_FIELD_MODE", "symbolic")
"""Ground field mode: rational functions in q, or rationals with q fixed"""

FIELD_Q: str = os.environ.get("HQ_FIELD_Q", "2")
"""Rational value of q used in numeric mode ("p" or "p/r")"""

# ============================================================================
# Window and Depth Configuration
# ============================================================================

DEFAULT_WINDOW: str = os.environ.get("HQ_WINDOW", "-4,4,6")
"""Default verification window as nlo,nhi,mmax"""

REDUCED_WINDOW: str = "-2,2,3"
"""Window used for triple-product associativity sweeps"""

PRIMITIVE_WINDOW: str = "-3,4,5"
"""Window used by the primitive-space suite"""

DEFAULT_DEPTH: int = int(os.environ.get("HQ_DEPTH", "3"))
"""Default tower depth for group commands and decomposition"""

MAX_DEPTH: int = 12
"""Largest tower depth accepted from user input"""

GROUP_INDEX_WINDOW: str = os.environ.get("HQ_INDEX_WINDOW", "-16,16")
"""Index range every tower support must stay inside for group computations"""

DECOMPOSITION_MARGIN_EXTRA: int = 1
"""Extra padding added around tower supports when windows are sized automatically"""

# ============================================================================
# Randomized Verification Configuration
# ============================================================================

RNG_SEED: int = int(os.environ.get("HQ_SEED", "20240611"))
"""Seed for randomized verification draws"""

RANDOM_SUPPORT: tuple[int, int] = (-2, 2)
"""Index range for randomly drawn sequence supports"""

RANDOM_NUMERATOR_BOUND: int = 3
"""Random scalars are p/r with |p| and r at most this bound"""

TRIALS_COALGEBRA_MAPS: int = 20
"""Random parameter draws per generator family"""

TRIALS_GRADED_ISO: int = 20
"""Random pairs for the graded automorphism checks"""

TRIALS_FILTRATION: int = 10
"""Random Aut_0 words for the filtration checks"""

TRIALS_F_HOMOMORPHISMS: int = 20
"""Random pairs per level for the defect additivity checks"""

TRIALS_CONJUGATION: int = 20
"""Random cases per level for the conjugation checks"""

TRIALS_G_LAW_CLOSED: int = 50
"""Random tower pairs for the closed-form cross-check"""

TRIALS_G_LAW_ASSOCIATIVITY: int = 20
"""Random tower triples for the associativity check"""

TRIALS_TOWER_CONSISTENCY: int = 10
"""Random tower pairs for the truncation checks"""

TRIALS_DECOMPOSITION: int = 20
"""Random construct-then-decompose cases"""

VERIFY_WORKERS: int = int(os.environ.get("HQ_VERIFY_WORKERS", "1"))
"""Worker processes used by verify all (1 runs inline)"""

# ============================================================================
# Config File
# ============================================================================

CONFIG_FILE_PATH: str = os.environ.get("HQ_CONFIG_FILE", "hq.json")
"""Path to the optional JSON config file"""

CONFIG_FILE_KEYS: tuple[str, ...] = ("field", "window", "depth", "seed", "index_window", "workers")
"""Keys accepted in the JSON config file"""

# ============================================================================
# Logging Configuration
# ============================================================================

LOG_LEVEL: str = os.environ.get("HQ_LOG_LEVEL", "WARNING").upper()
"""Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"""

LOG_FORMAT: str = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
"""Format string for log messages"""

# ============================================================================
# Settings Resolution
# ============================================================================

@dataclass(frozen=True)
class Settings:
    """Resolved settings for one command invocation"""
    field_mode: str
    field_q: str
    window: str
    depth: int
    seed: int
    index_window: str
    workers: int

def load_config_file(path: Optional[str] = None) -> dict[str, Any]:
    """
    Load the JSON config file.

    Args:
        path: File path, defaults to CONFIG_FILE_PATH

    Returns:
        The parsed mapping, or {} when the file does not exist

    Raises:
        ConfigFileError: If the file is not valid JSON or has unknown keys
    """
    path = path or CONFIG_FILE_PATH
    if not os.path.exists(path):
        logger.info(f"Config file {path} not found, using defaults")
        return {}

    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"Failed to parse config file {path}: {e}")
        raise validators.ConfigFileError(f"Config file {path} is not valid JSON: {e}")

    if not isinstance(data, dict):
        raise validators.ConfigFileError(f"Config file {path} must contain a JSON object")

    unknown = sorted(set(data) - set(CONFIG_FILE_KEYS))
    if unknown:
        raise validators.ConfigFileError(f"Unknown keys in config file {path}: {', '.join(unknown)}")

    logger.info(f"Loaded config file {path}")
    return data

def resolve_settings(file_data: Optional[dict[str, Any]] = None,
                     overrides: Optional[dict[str, Any]] = None) -> Settings:
    """
    Merge defaults, config file values and command-line overrides.

    Later sources win: module defaults, then the config file, then overrides
    whose value is not None.

    Args:
        file_data: Mapping returned by load_config_file
        overrides: Values taken from command-line flags

    Returns:
        The resolved Settings
    """
    file_data = file_data or {}
    overrides = overrides or {}

    field = file_data.get("field") or {}
    merged: dict[str, Any] = {
        "field_mode": field.get("mode", FIELD_MODE),
        "field_q": str(field.get("q", FIELD_Q)),
        "window": file_data.get("window", DEFAULT_WINDOW),
        "depth": file_data.get("depth", DEFAULT_DEPTH),
        "seed": file_data.get("seed", RNG_SEED),
        "index_window": file_data.get("index_window", GROUP_INDEX_WINDOW),
        "workers": file_data.get("workers", VERIFY_WORKERS),
    }

    for key, value in overrides.items():
        if value is not None:
            merged[key] = value

    if isinstance(merged["window"], (list, tuple)):
        merged["window"] = ",".join(str(v) for v in merged["window"])
    if isinstance(merged["index_window"], (list, tuple)):
        merged["index_window"] = ",".join(str(v) for v in merged["index_window"])

    return Settings(
        field_mode=str(merged["field_mode"]),
        field_q=str(merged["field_q"]),
        window=str(merged["window"]),
        depth=int(merged["depth"]),
        seed=int(merged["seed"]),
        index_window=str(merged["index_window"]),
        workers=int(merged["workers"]),
    )
