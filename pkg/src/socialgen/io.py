"""Edge lists and key-value records.

Edge list: optional ``# nodes=N`` header, further ``#`` lines are
comments, then one ``src<TAB>dst`` line per directed entry. Written files
are canonical (entries sorted by source, then target).

Records (model configs, stats, results, run logs) are ``key = value``
lines with ``#`` comments. Values are parsed back to int, float, bool or
None where they look like one.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Mapping, Optional

from .degrees import CORRELATED, CorrelationTriple, DegreeModel, ScaledChiSquare
from .graph import DirectedGraph, GraphError


class FormatError(ValueError):
    pass


def read_edge_list(path) -> DirectedGraph:
    n: Optional[int] = None
    entries: list[tuple[int, int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("nodes="):
                    if n is not None or entries:
                        raise FormatError(f"line {lineno}: misplaced nodes header")
                    try:
                        n = int(body[len("nodes="):])
                    except ValueError:
                        raise FormatError(f"line {lineno}: bad nodes header {body!r}") from None
                    if n < 0:
                        raise FormatError(f"line {lineno}: negative node count")
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: expected two node IDs, got {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer node ID in {line!r}") from None
            if i < 0 or j < 0:
                raise FormatError(f"line {lineno}: negative node ID")
            if i == j:
                raise FormatError(f"self-loop at line {lineno}")
            entries.append((i, j, lineno))

    if n is None:
        n = 1 + max((max(i, j) for i, j, _ in entries), default=-1)
    g = DirectedGraph(n)
    for i, j, lineno in entries:
        if i >= n or j >= n:
            raise FormatError(f"line {lineno}: node ID out of range [0, {n})")
        try:
            g.add_directed_edge(i, j)
        except GraphError as exc:
            raise FormatError(f"line {lineno}: duplicate entry ({exc})") from None
    return g


def format_edge_list(g: DirectedGraph, meta: Optional[Mapping[str, object]] = None) -> str:
    lines = [f"# nodes={g.n}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={_fmt(value)}")
    lines.extend(f"{i}\t{j}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(g: DirectedGraph, path, meta: Optional[Mapping[str, object]] = None) -> None:
    _atomic_write(path, format_edge_list(g, meta))


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# key-value records


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(text: str):
    low = text.lower()
    if low == "none":
        return None
    if low in ("true", "false"):
        return low == "true"
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def format_record(record: Mapping[str, object], title: Optional[str] = None) -> str:
    lines = [f"# {title}"] if title else []
    for key, value in record.items():
        if "=" in key or key != key.strip():
            raise FormatError(f"bad record key {key!r}")
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def write_record(path, record: Mapping[str, object], title: Optional[str] = None) -> None:
    _atomic_write(path, format_record(record, title))


def read_record(path) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = _parse(value.strip())
    return out


# ---------------------------------------------------------------------------
# model config

MODEL_KEYS = ("n", "mode", "recip_k", "recip_c", "in_k", "in_c", "out_k", "out_c", "rho1", "rho2", "rho3")


def model_to_record(model: DegreeModel) -> dict:
    rec: dict[str, object] = {"n": model.n, "mode": model.mode}
    for prefix, dist in zip(("recip", "in", "out"), model.marginals):
        rec[f"{prefix}_k"] = float(dist.k)
        rec[f"{prefix}_c"] = float(dist.c)
        rec[f"{prefix}_mean"] = float(dist.mean)
        rec[f"{prefix}_sd"] = float(dist.variance**0.5)
    rec.update(rho1=model.corr.rho1, rho2=model.corr.rho2, rho3=model.corr.rho3)
    return rec


def _marginal(rec: Mapping[str, object], prefix: str) -> ScaledChiSquare:
    if f"{prefix}_k" in rec and f"{prefix}_c" in rec:
        return ScaledChiSquare(float(rec[f"{prefix}_k"]), float(rec[f"{prefix}_c"]))
    if f"{prefix}_mean" in rec and f"{prefix}_sd" in rec:
        mean = float(rec[f"{prefix}_mean"])
        var = float(rec[f"{prefix}_sd"]) ** 2
        if mean <= 0 or var <= 0:
            raise FormatError(f"{prefix}: mean and sd must be positive")
        return ScaledChiSquare(2.0 * mean**2 / var, var / (2.0 * mean))
    raise FormatError(f"model config needs {prefix}_k/{prefix}_c or {prefix}_mean/{prefix}_sd")


def model_from_record(rec: Mapping[str, object]) -> DegreeModel:
    if "n" not in rec:
        raise FormatError("model config is missing 'n'")
    corr = CorrelationTriple(
        *(None if rec.get(k) is None else float(rec[k]) for k in ("rho1", "rho2", "rho3"))
    )
    return DegreeModel(
        n=int(rec["n"]),
        recip=_marginal(rec, "recip"),
        indeg=_marginal(rec, "in"),
        outdeg=_marginal(rec, "out"),
        corr=corr,
        mode=str(rec.get("mode", CORRELATED)),
    )


def write_model(path, model: DegreeModel, extra: Optional[Mapping[str, object]] = None) -> None:
    rec = model_to_record(model)
    rec.update(extra or {})
    write_record(path, rec, "degree model")


def read_model(path) -> DegreeModel:
    return model_from_record(read_record(path))


def write_histogram(path, centers, counts) -> None:
    _atomic_write(path, "".join(f"{c:.4f}\t{int(k)}\n" for c, k in zip(centers, counts)))
