"""JSON report writing shared by the CLI and the benchmark scripts."""

import json
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd


class NumpyEncoder(json.JSONEncoder):
    """Custom JSON encoder for numpy types."""

    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, (set, frozenset)):
            return sorted(obj)
        elif isinstance(obj, Path):
            return str(obj)
        elif isinstance(obj, pd.DataFrame):
            return obj.to_dict(orient="records")
        return json.JSONEncoder.default(self, obj)


def dumps(data: Any) -> str:
    """Byte-stable JSON text: sorted keys, four-space indent."""
    return json.dumps(data, indent=4, sort_keys=True, cls=NumpyEncoder, ensure_ascii=False)


def write_json(data: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data) + "\n", encoding="utf-8")
    return path
