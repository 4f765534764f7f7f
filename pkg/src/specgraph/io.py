"""Deterministic seed derivation and the package's file formats.

Formats: edge-list text ("n m" header then "u v" lines, u < v, sorted),
eigenvalue CSV with 17-significant-digit values, histogram/report JSON.
Report JSON is emitted with sorted keys so identical runs produce
byte-identical files (a timestamp field can be suppressed).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .errors import EdgeListParseError
from .graphgen import Graph, GraphModel
from .spectral_laws import Esd

__all__ = [
    "derive_trial_seed",
    "write_edge_list",
    "read_edge_list",
    "write_eigenvalues",
    "read_eigenvalues",
    "HistogramFile",
    "emit_histogram",
    "to_jsonable",
    "write_report",
    "parse_config_file",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

SCHEMA_VERSION = 1


def derive_trial_seed(master: int, index: int) -> int:
    """SplitMix64 finalizer applied to master + index * golden-gamma (mod 2^64).

    A bijective mixer, so distinct indices give distinct seeds; (0, 0)
    maps to 0 since zero is a fixed point of the finalizer.
    """
    z = (master + index * _GOLDEN) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def write_edge_list(g: Graph, path) -> None:
    """Line 1 is "n m"; then one "u v" line per edge, u < v, sorted."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_edge_list(path) -> Graph:
    """Parse an edge-list file; raises EdgeListParseError with a line number."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise EdgeListParseError("empty file", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise EdgeListParseError("header must be 'n m'", 1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise EdgeListParseError("header must contain two integers", 1) from None
    if n < 1 or m < 0:
        raise EdgeListParseError(f"bad header values n={n}, m={m}", 1)
    if len(lines) - 1 != m:
        raise EdgeListParseError(
            f"expected {m} edge lines, found {len(lines) - 1}", len(lines)
        )
    edges = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError("edge line must be 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError("vertices must be integers", lineno) from None
        if not 0 <= u < v < n:
            raise EdgeListParseError(
                f"edge ({u}, {v}) out of range or unordered for n={n}", lineno
            )
        if (u, v) in seen:
            raise EdgeListParseError(f"duplicate edge ({u}, {v})", lineno)
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n=n, edges=tuple(edges), model=GraphModel.external())


def _eigenvalue_sequence(source) -> np.ndarray:
    if isinstance(source, Esd):
        return source.values
    if hasattr(source, "eigenvalues"):
        return np.asarray(source.eigenvalues, dtype=np.float64)
    return np.asarray(source, dtype=np.float64)


def write_eigenvalues(decomp, path) -> None:
    """CSV "index,eigenvalue", ascending, 17 significant digits (round-trips)."""
    values = _eigenvalue_sequence(decomp)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{v:.17g}\n")


def read_eigenvalues(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "index,eigenvalue":
        raise ValueError("missing 'index,eigenvalue' header")
    return np.array([float(line.split(",")[1]) for line in lines[1:]])


@dataclass(frozen=True)
class HistogramFile:
    """Equal-width histogram; ``overflow`` counts values outside [lo, hi].

    density = counts / (n_total * bin_width) with n_total the in-range
    count, so density integrates to 1 whenever n_total > 0.
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    overflow: int
    n_total: int


def emit_histogram(esd, bins: int, lo: float, hi: float) -> HistogramFile:
    """Histogram with half-open bins [e_i, e_{i+1}), last bin closed."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    values = _eigenvalue_sequence(esd)
    edges = np.linspace(lo, hi, bins + 1)
    in_range = (values >= lo) & (values <= hi)
    kept = values[in_range]
    idx = np.searchsorted(edges, kept, side="right") - 1
    idx[kept == hi] = bins - 1
    counts = np.bincount(idx, minlength=bins)
    overflow = int(values.size - kept.size)
    n_total = int(kept.size)
    width = (hi - lo) / bins
    if n_total > 0:
        density = counts / (n_total * width)
    else:
        density = np.zeros(bins)
    return HistogramFile(
        bin_edges=edges,
        counts=counts,
        density=density,
        overflow=overflow,
        n_total=n_total,
    )


def to_jsonable(obj):
    """Recursively convert reports (dataclasses, numpy, complex) to JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def write_report(path, payload: dict, no_timestamp: bool = False) -> None:
    """Serialize a report dict as deterministic JSON (sorted keys).

    Python's json emits shortest round-trip decimals for floats. The
    timestamp is the only non-reproducible field and can be suppressed.
    """
    body = dict(to_jsonable(payload))
    body["schema_version"] = SCHEMA_VERSION
    if not no_timestamp:
        body["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def parse_config_file(path) -> dict:
    """Flat key=value file mirroring CLI flag names; '#' starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
