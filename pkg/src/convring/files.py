"""JSON on-disk formats for codes, streams, and erasure patterns.

All formats use plain integers; polynomials are degree-ascending integer
lists.  Serialization is canonical (fixed key order, two-space indent,
trailing newline) so files round-trip byte-identically.
"""

from __future__ import annotations

import json
from typing import Sequence

from .codes import ConvCode
from .polymat import PolyMatrix
from .ring import RingContext


def _canon(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _blocks_to_json(blocks) -> list:
    return [[[list(e.coeffs) for e in row] for row in blk.entries] for blk in blocks]


def _blocks_from_json(ctx: RingContext, data, n: int):
    out = []
    for blk in data:
        rows = [[list(map(int, poly)) for poly in row] for row in blk]
        out.append(PolyMatrix(ctx, rows, cols=n))
    return tuple(out)


def code_to_json(code: ConvCode) -> dict:
    return {
        "p": code.ctx.p,
        "r": code.ctx.r,
        "n": code.n,
        "k_blocks": list(code.k_blocks),
        "G": _blocks_to_json(code.g_blocks) if code.g_blocks is not None else None,
        "H": _blocks_to_json(code.h_blocks) if code.h_blocks is not None else None,
        "nu": code.nu,
    }


def code_from_json(data: dict) -> ConvCode:
    ctx = RingContext(int(data["p"]), int(data["r"]))
    n = int(data["n"])
    g = data.get("G")
    h = data.get("H")
    g_blocks = _blocks_from_json(ctx, g, n) if g is not None else None
    h_blocks = _blocks_from_json(ctx, h, n) if h is not None else None
    code = ConvCode(
        ctx=ctx,
        n=n,
        k_blocks=tuple(int(x) for x in data["k_blocks"]),
        g_blocks=g_blocks,
        h_blocks=h_blocks,
        nu=int(data["nu"]) if data.get("nu") is not None else None,
    )
    return code


def save_code(path: str, code: ConvCode):
    with open(path, "w") as fh:
        fh.write(_canon(code_to_json(code)))


def load_code(path: str) -> ConvCode:
    with open(path) as fh:
        return code_from_json(json.load(fh))


def save_stream(path: str, n: int, symbols: Sequence[Sequence[int | None]]):
    doc = {"n": n, "symbols": [list(sym) for sym in symbols]}
    with open(path, "w") as fh:
        fh.write(_canon(doc))


def load_stream(path: str) -> tuple[int, list[list[int | None]]]:
    with open(path) as fh:
        doc = json.load(fh)
    n = int(doc["n"])
    symbols = [list(sym) for sym in doc["symbols"]]
    for t, sym in enumerate(symbols):
        if len(sym) != n:
            raise ValueError(f"symbol at time {t} has length {len(sym)}, expected {n}")
    return n, symbols


def save_pattern(path: str, erasures: Sequence[tuple[int, int]]):
    doc = {"erasures": [[t, c] for t, c in sorted(erasures)]}
    with open(path, "w") as fh:
        fh.write(_canon(doc))


def load_pattern(path: str) -> list[tuple[int, int]]:
    with open(path) as fh:
        doc = json.load(fh)
    return [(int(t), int(c)) for t, c in doc["erasures"]]


def check_pattern_consistency(symbols: Sequence[Sequence[int | None]], erasures) -> None:
    """The pattern file is authoritative; any conflict with nulls is an error."""
    from_nulls = {
        (t, c) for t, sym in enumerate(symbols) for c, x in enumerate(sym) if x is None
    }
    declared = set(map(tuple, erasures))
    if from_nulls != declared:
        extra = sorted(from_nulls - declared)
        missing = sorted(declared - from_nulls)
        raise ValueError(
            f"pattern conflict: nulls not declared {extra}, declared not null {missing}"
        )


def save_message(path: str, k: int, symbols: Sequence[Sequence[int]]):
    doc = {"k": k, "symbols": [list(sym) for sym in symbols]}
    with open(path, "w") as fh:
        fh.write(_canon(doc))


def load_message(path: str) -> tuple[int, list[list[int]]]:
    with open(path) as fh:
        doc = json.load(fh)
    return int(doc["k"]), [list(map(int, sym)) for sym in doc["symbols"]]


def save_report(path: str, report: dict):
    with open(path, "w") as fh:
        fh.write(_canon(report))


def load_report(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
