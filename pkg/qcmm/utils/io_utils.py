import io, json, math, sys
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

def ensure_dir(p: str):
    Path(p).mkdir(parents=True, exist_ok=True)

def json_safe(value: Any) -> Any:
    """Recursively replace non-finite floats by the CSV sentinels inf / -inf / nan."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value + 0.0  # -0.0 -> 0.0
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value

def clear_negative_zero(df: pd.DataFrame) -> pd.DataFrame:
    floats = df.select_dtypes(include="float").columns
    if len(floats) == 0:
        return df
    out = df.copy()
    out[floats] = out[floats] + 0.0
    return out

def frame_to_csv(df: pd.DataFrame) -> str:
    # floats are written with their shortest round-trip repr
    buf = io.StringIO()
    clear_negative_zero(df).to_csv(buf, index=False, lineterminator="\n", na_rep="nan")
    return buf.getvalue()

def frame_to_json(df: pd.DataFrame, meta: Optional[Dict[str, Any]] = None) -> str:
    rows = [
        {k: (v.item() if hasattr(v, "item") else v) for k, v in rec.items()}
        for rec in df.to_dict(orient="records")
    ]
    return dumps_json({"meta": meta or {}, "rows": rows})

def dumps_json(obj: Any) -> str:
    return json.dumps(json_safe(obj), indent=2, allow_nan=False) + "\n"

def write_text(text: str, out_path: Optional[str] = None):
    """Write to a file (creating parents) or to stdout when no path is given."""
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out_path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
