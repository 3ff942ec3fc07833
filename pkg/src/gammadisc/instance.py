"""Text instance files: JSON with matrices as nested ``[re, im]`` pairs.

Python's float repr round-trips exactly, so serialize/parse is lossless on
the numeric payload.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import GammaDiscError, ParseError
from .gamma import Certificate, GammaTuple

FORMAT = "gammadisc-instance/1"


def matrix_to_pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def pairs_to_matrix(data, name: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name}: not a rectangular array of [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{name}: expected shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def instance_to_dict(t: GammaTuple, seed: int | None = None) -> dict:
    out = {
        "format": FORMAT,
        "d": t.d,
        "n": t.n,
        "S": [matrix_to_pairs(s) for s in t.S],
        "P": matrix_to_pairs(t.P),
        "certificate": t.certificate.value,
        "source": t.source,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def dumps_instance(t: GammaTuple, seed: int | None = None) -> str:
    return json.dumps(instance_to_dict(t, seed), indent=1) + "\n"


def instance_from_dict(data: dict) -> GammaTuple:
    """Parse and validate; every failure becomes a :class:`ParseError` naming the broken invariant."""
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    try:
        d, n = int(data["d"]), int(data["n"])
        raw_s, raw_p = data["S"], data["P"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError("fields d and n must be integers") from exc
    if d < 2 or n < 1:
        raise ParseError(f"invariant 'shape': need d >= 2 and n >= 1, got d={d}, n={n}")
    if not isinstance(raw_s, list) or len(raw_s) != d - 1:
        raise ParseError(f"invariant 'shape': expected {d - 1} matrices in S")
    S = [pairs_to_matrix(m, f"S_{i + 1}") for i, m in enumerate(raw_s)]
    P = pairs_to_matrix(raw_p, "P")
    for name, m in [(f"S_{i + 1}", m) for i, m in enumerate(S)] + [("P", P)]:
        if m.shape != (n, n):
            raise ParseError(f"invariant 'shape': {name} is {m.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(m)):
            raise ParseError(f"invariant 'finite': {name} has non-finite entries")
    try:
        cert = Certificate(data.get("certificate", Certificate.NECESSARY_CHECKS_ONLY.value))
    except ValueError as exc:
        raise ParseError(f"unknown certificate {data.get('certificate')!r}") from exc
    try:
        return GammaTuple(tuple(S), P, cert, str(data.get("source", "")))
    except GammaDiscError as exc:
        label = {"NotCommuting": "commuting", "NotContractive": "contractive_P"}.get(type(exc).__name__, "tuple")
        raise ParseError(f"invariant '{label}' violated: {exc}") from exc


def loads_instance(text: str) -> GammaTuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return instance_from_dict(data)


def read_instance(path: str | Path) -> GammaTuple:
    return loads_instance(Path(path).read_text())


def write_instance(t: GammaTuple, path: str | Path, seed: int | None = None) -> None:
    Path(path).write_text(dumps_instance(t, seed))
