"""
Result rows and their CSV and JSON metadata outputs
"""

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["tag", "d", "beta_norm", "density", "estimate", "se", "n", "seed", "x1", "x2", "error"]


@dataclass(frozen=True)
class ResultRow:
    """One estimate at one sweep point; a nonempty ``error`` marks a failed point."""

    tag: str
    d: int
    beta_norm: float
    density: str
    estimate: float
    se: float
    n: int
    seed: int
    x1: Optional[float] = None
    x2: Optional[float] = None
    error: str = ""

    @classmethod
    def failed(cls, tag: str, d: int, beta_norm: float, density: str, seed: int, error: Exception,
               x1: Optional[float] = None, x2: Optional[float] = None) -> "ResultRow":
        return cls(tag=tag, d=d, beta_norm=beta_norm, density=density, estimate=float("nan"),
                   se=float("nan"), n=0, seed=seed, x1=x1, x2=x2,
                   error=f"{type(error).__name__}: {error}".replace("\n", " "))

    @property
    def key(self) -> Tuple:
        return (self.tag, self.d, self.beta_norm, self.x1, self.x2, self.density)


def rows_to_frame(rows: List[ResultRow]) -> pd.DataFrame:
    keys = [row.key for row in rows]
    if len(set(keys)) != len(keys):
        raise InvalidInputError("Result rows are not uniquely keyed by (tag, coordinates, density)")
    return pd.DataFrame([asdict(row) for row in rows], columns=CSV_COLUMNS)


def _json_default(value: Any):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def write_results(rows: List[ResultRow], out_dir: Path, tag: str, metadata: Dict[str, Any]) -> Tuple[Path, Path]:
    """Write ``<tag>.csv`` and ``<tag>.meta.json`` into out_dir.

    Returns:
        (csv path, metadata path)
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{tag}.csv"
    meta_path = out_dir / f"{tag}.meta.json"
    rows_to_frame(rows).to_csv(csv_path, index=False, float_format="%.17g")
    with open(meta_path, "w") as file:
        json.dump(metadata, file, indent=2, sort_keys=True, default=_json_default)
    logger.info(f"Wrote {len(rows)} rows to {csv_path}")
    return csv_path, meta_path
