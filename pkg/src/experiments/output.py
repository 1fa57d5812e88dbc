"""Machine-readable artifacts: JSON reports and CSV tables with a header.

Bodies never carry timestamps or host details, so identical invocations with
identical seeds produce identical bytes.
"""

import dataclasses
import io
import json
import math
import os
from enum import Enum
from typing import Any, Dict, Mapping, Optional

import numpy as np
import pandas as pd

TOOL_NAME = 'strichartz-radon'
TOOL_VERSION = '1.0.0'


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, arrays, dataclasses and enums to JSON types.

    Non-finite floats become the strings 'nan', 'inf' and '-inf'.
    """
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, 'as_dict'):
        return jsonable(value.as_dict())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return jsonable(dataclasses.asdict(value))
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        x = float(value)
        if math.isnan(x):
            return 'nan'
        if math.isinf(x):
            return 'inf' if x > 0 else '-inf'
        return x
    return value


def build_header(config: Mapping[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    """Reproducibility header: tool version, seed, tolerances and resolved config."""
    settings = config.get('settings', {})
    return {
        'tool': TOOL_NAME,
        'version': TOOL_VERSION,
        'seed': seed,
        'tolerances': settings.get('tolerances', {}),
        'config': config,
    }


def render_json(header: Mapping[str, Any], body: Any) -> str:
    document = {'header': jsonable(header), 'body': jsonable(body)}
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + '\n'


def _header_value(value: Any) -> str:
    if isinstance(value, (Mapping, list, tuple)):
        return json.dumps(jsonable(value), sort_keys=True)
    return str(jsonable(value))


def render_csv(header: Mapping[str, Any], table: pd.DataFrame) -> str:
    """'# key=value' header lines followed by the table."""
    buffer = io.StringIO()
    for key in sorted(header):
        buffer.write(f"# {key}={_header_value(header[key])}\n")
    table.to_csv(buffer, index=False, float_format='%.17g', lineterminator='\n')
    return buffer.getvalue()


def write_text(text: str, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        handle.write(text)
    return path


def body_of(document: str) -> Any:
    """The 'body' part of a rendered JSON artifact."""
    return json.loads(document)['body']
