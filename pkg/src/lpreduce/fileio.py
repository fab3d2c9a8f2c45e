"""JSON and CSV file formats.

PointSet: ``{"p": .., "weights": [..], "values": [[..], ..]}``.
Embedding: ``{"p", "d", "points", "operator": {"density", "atoms", "scale"},
"achieved_eps"}`` plus the optional keys ``eps``, ``mode``, ``K``,
``theoretical_d`` and ``fallback``. Floats are written with ``repr``
precision, so reading a file back gives bit-identical arrays.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import PointSet, new_point_set
from .embed import Embedding, SelectionOperator
from .errors import InvalidParameter


def _floats(a) -> list:
    return np.asarray(a, dtype=np.float64).tolist()


def point_set_to_dict(ps: PointSet) -> dict:
    return {"p": ps.p, "weights": _floats(ps.weights), "values": _floats(ps.values)}


def point_set_from_dict(obj: dict) -> PointSet:
    try:
        return new_point_set(obj["p"], obj["weights"], obj["values"])
    except KeyError as exc:
        raise InvalidParameter(f"point set file lacks key {exc}") from None


def embedding_to_dict(emb: Embedding) -> dict:
    op = emb.operator
    return {
        "p": emb.p,
        "d": emb.d,
        "points": _floats(emb.points),
        "operator": {
            "density": _floats(op.density),
            "atoms": [int(k) for k in op.atoms],
            "scale": float(op.scale),
        },
        "achieved_eps": emb.achieved_epsilon,
        "eps": emb.epsilon,
        "mode": emb.mode,
        "K": emb.K,
        "theoretical_d": emb.theoretical_d,
        "fallback": emb.fallback,
    }


def embedding_from_dict(obj: dict) -> Embedding:
    try:
        p = float(obj["p"])
        op = obj["operator"]
        operator = SelectionOperator(
            p,
            np.asarray(op["density"], dtype=np.float64),
            np.asarray(op["atoms"], dtype=np.int64),
            float(op["scale"]),
        )
        points = np.asarray(obj["points"], dtype=np.float64).reshape(-1, int(obj["d"]))
        return Embedding(
            p=p,
            d=int(obj["d"]),
            points=points,
            operator=operator,
            achieved_epsilon=float(obj["achieved_eps"]),
            epsilon=obj.get("eps"),
            mode=obj.get("mode", "exact"),
            K=obj.get("K"),
            theoretical_d=obj.get("theoretical_d"),
            fallback=bool(obj.get("fallback", False)),
        )
    except KeyError as exc:
        raise InvalidParameter(f"embedding file lacks key {exc}") from None


def _dump(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, allow_nan=False) + "\n")


def _load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{path}: not valid JSON ({exc})") from None


def write_point_set(ps: PointSet, path) -> None:
    _dump(point_set_to_dict(ps), path)


def read_point_set(path, p: float | None = None, uniform_weights: bool = False) -> PointSet:
    """Read a JSON point set, or a CSV of values (one point per row).

    CSV input needs ``uniform_weights=True`` and an exponent ``p``.
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        if not uniform_weights or p is None:
            raise InvalidParameter("CSV input needs --uniform-weights and --p")
        with path.open(newline="") as fh:
            rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
        m = len(rows[0]) if rows else 0
        return new_point_set(p, np.full(m, 1.0 / max(m, 1)), rows)
    ps = point_set_from_dict(_load(path))
    if p is not None and p != ps.p:
        raise InvalidParameter(f"--p {p} conflicts with p={ps.p} in {path}")
    return ps


def write_embedding(emb: Embedding, path) -> None:
    _dump(embedding_to_dict(emb), path)


def read_embedding(path) -> Embedding:
    return embedding_from_dict(_load(path))
