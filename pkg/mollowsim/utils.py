#!/usr/bin/env python3
"""
Utility Functions for mollowsim

Hashing, JSON/CSV output and small formatting helpers shared by the
orchestrator and the CLI.
"""

import csv
import hashlib
import json
import logging
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '{:.12e}'


def to_jsonable(value: Any) -> Any:
    """Convert dataclasses, enums and numpy values into plain JSON types; non-finite floats become None"""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return to_jsonable(value.item())
    if isinstance(value, complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, float) and not np.isfinite(value):
        # NaN and inf are not JSON
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def canonical_json(data: Any) -> str:
    """Stable serialisation used for hashing"""
    return json.dumps(to_jsonable(data), sort_keys=True, separators=(',', ':'), allow_nan=False)


def get_digest(data: Any, length: int = 16) -> str:
    """Short sha256 digest of any JSON-able structure"""
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()[:length]


def load_json_file(filepath: Path) -> Dict[str, Any]:
    """Load a JSON file; raises the underlying error so callers can classify it"""
    with open(filepath, 'r', encoding='utf-8') as f:
        return json.load(f)


def save_json_file(filepath: Path, data: Any) -> bool:
    """Save data to JSON file with error handling"""
    try:
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(to_jsonable(data), f, indent=2, ensure_ascii=False, sort_keys=True, allow_nan=False)
            f.write('\n')
        return True
    except OSError as e:
        logger.warning("Could not save %s: %s", filepath, e)
        return False


def format_cell(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def write_csv(filepath: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]],
              config_hash: str, comments: Optional[Dict[str, Any]] = None) -> Path:
    """Write a CSV with a leading hash comment and a mandatory header row

    Floats are written with a fixed format so that identical inputs produce
    byte-identical files.
    """
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, 'w', encoding='utf-8', newline='') as f:
        f.write(f"# config_hash={config_hash}\n")
        for key, value in (comments or {}).items():
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
    return filepath


def read_csv_columns(filepath: Path) -> Dict[str, np.ndarray]:
    """Read a CSV written by ``write_csv`` back into float columns"""
    with open(filepath, 'r', encoding='utf-8') as f:
        lines = [line for line in f if not line.startswith('#')]
    reader = csv.reader(lines)
    header = next(reader)
    data: Dict[str, list] = {name: [] for name in header}
    for row in reader:
        for name, cell in zip(header, row):
            data[name].append(cell)
    out = {}
    for name, cells in data.items():
        try:
            out[name] = np.array([float(c) for c in cells])
        except ValueError:
            out[name] = np.array(cells)
    return out


def format_time_duration(seconds: float) -> str:
    """Format duration in seconds to human readable format"""
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f}m"
    else:
        hours = seconds / 3600
        return f"{hours:.1f}h"


def print_run_summary(name: str, outputs: Dict[str, Path], elapsed: float,
                      title: str = "Run Summary"):
    """Print formatted summary of one subcommand"""
    print(f"\n📊 {title}:")
    print(f"   • Subcommand: {name}")
    print(f"   • Files written: {len(outputs)}")
    for label, path in outputs.items():
        print(f"     - {label}: {path}")
    print(f"   • Elapsed: {format_time_duration(elapsed)}")
