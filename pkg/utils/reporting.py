"""
Report assembly for hypocalc.
Canonical JSON documents with certificate hashes, and CSV tables through pandas.
"""

import hashlib
import json
import logging
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from _version import __version__


def to_jsonable(obj: Any) -> Any:
    """Plain JSON values; non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(obj, (complex, np.complexfloating)):
        return {'re': to_jsonable(obj.real), 'im': to_jsonable(obj.imag)}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    return obj


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indentation, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def certificate_hash(certificate: Any) -> str:
    compact = json.dumps(to_jsonable(certificate), sort_keys=True, separators=(',', ':'), allow_nan=False)
    return hashlib.sha256(compact.encode('utf-8')).hexdigest()


def build_report(command: str, result: Dict[str, Any], certificates: Optional[Dict[str, Any]] = None,
                 tags: Iterable[str] = (), flags: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Report document: result, tags used and every certificate with its hash."""
    certificates = certificates or {}
    return {
        'command': command,
        'version': __version__,
        'flags': to_jsonable(flags or {}),
        'tags': sorted(set(tags)),
        'certificates': {name: {'sha256': certificate_hash(body), 'body': to_jsonable(body)}
                         for name, body in certificates.items()},
        'result': to_jsonable(result),
    }


def write_report(report: Dict[str, Any], output_dir: str, stem: str, fmt: str = 'json',
                 tables: Optional[Dict[str, pd.DataFrame]] = None) -> List[Path]:
    """
    Write ``stem.json`` and, for the csv format, one ``stem_<table>.csv`` per table.

    Returns:
    --------
    list of Path : files written, in a fixed order
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / f"{stem}.json"
    path.write_text(canonical_json(report), encoding='utf-8')
    written.append(path)
    if fmt == 'csv':
        for name, frame in sorted((tables or {}).items()):
            table_path = out / f"{stem}_{name}.csv"
            frame.to_csv(table_path, index=False, lineterminator='\n', float_format='%.17g')
            written.append(table_path)
    logging.info(f"wrote {', '.join(p.name for p in written)} to {out}")
    return written
