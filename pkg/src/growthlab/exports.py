"""CSV and JSON artifact writers.

Every artifact embeds the configuration that produced it, so it can be
regenerated exactly (same implementation, same platform). Column layouts are
part of the external contract:

  shape estimates   model,law,x,y,n,replicates,mean,stderr,seed
  height snapshots  t,site,value,replicate,seed
  second-class runs t,Q,replicate,seed
  ulam counts       n,replicate,L,seed
  particle paths    t,i,z,replicate
  hydro comparison  t,x,u_hopf_lax,u_simulated,n,error
  ldp tails         n,x,tail,hits,reps,log_p_over_rate_scale,seed
  rap currents      n,t,r,Z,replicate,seed
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

HEADERS = {
    "shape": ["model", "law", "x", "y", "n", "replicates", "mean", "stderr", "seed"],
    "heights": ["t", "site", "value", "replicate", "seed"],
    "second_class": ["t", "Q", "replicate", "seed"],
    "ulam": ["n", "replicate", "L", "seed"],
    "particles": ["t", "i", "z", "replicate"],
    "hydro": ["t", "x", "u_hopf_lax", "u_simulated", "n", "error"],
    "ldp": ["n", "x", "tail", "hits", "reps", "log_p_over_rate_scale", "seed"],
    "rap": ["n", "t", "r", "Z", "replicate", "seed"],
}


def write_csv(path, kind: str, rows) -> Path:
    """Write rows (sequences matching HEADERS[kind]) to path."""
    header = HEADERS[kind]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row width {len(row)} != header {len(header)}")
            writer.writerow(row)
    return path


def write_summary(path, config: dict, payload: dict) -> Path:
    """JSON summary {config, ...payload}; config is echoed verbatim."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": config}
    doc.update(payload)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_coerce)
                    + "\n")
    return path


def _coerce(obj):
    try:
        import numpy as np

        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.floating,)):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
    except ImportError:
        pass
    if isinstance(obj, float):
        return obj
    return str(obj)
