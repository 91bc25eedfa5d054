"""JSON interchange for :class:`FiniteSA` and :class:`FnAlgebra`.

Writers are canonical (fixed key order, one table row per line, trailing newline), so
load -> save reproduces a canonical file byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import FiniteSA, FnAlgebra, FnElement, as_finite_sa
from .errors import FormatError, UsageError


def _row(xs):
    return "[" + ", ".join(str(int(x)) for x in xs) + "]"


def dumps_sa(A):
    lines = ["{", f'  "dimension": {A.dimension},', f'  "size": {A.size},', f'  "v": {_row(A.v)},']
    if A.dimension == 0:
        lines.append('  "star": []')
    else:
        lines.append('  "star": [')
        for k in range(A.dimension):
            lines.append("    [")
            rows = A.star[k].tolist()
            for i, r in enumerate(rows):
                lines.append("      " + _row(r) + ("," if i < len(rows) - 1 else ""))
            lines.append("    ]" + ("," if k < A.dimension - 1 else ""))
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps_fn(afn):
    elements = afn.elements
    lines = ["{", f'  "dimension": {afn.dimension},', f'  "base_size": {afn.base_size},']
    if not elements:
        lines.append('  "elements": [],')
    else:
        lines.append('  "elements": [')
        for i, f in enumerate(elements):
            lines.append("    " + _row(f.table) + ("," if i < len(elements) - 1 else ""))
        lines.append("  ],")
    lines.append(f'  "full": {"true" if afn.full else "false"}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj):
    if isinstance(obj, FiniteSA):
        return dumps_sa(obj)
    if isinstance(obj, FnAlgebra):
        return dumps_fn(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_map(entries):
    """Sidecar ``{"map": [...]}`` with one entry per source element."""
    lines = ['{', '  "map": [']
    entries = list(entries)
    for i, e in enumerate(entries):
        lines.append("    " + json.dumps(e, separators=(", ", ": ")) + ("," if i < len(entries) - 1 else ""))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where} must be an integer, got {value!r}")
    return value


def _list(value, where, length=None):
    if not isinstance(value, list):
        raise FormatError(f"{where} must be a list")
    if length is not None and len(value) != length:
        raise FormatError(f"{where} has {len(value)} entries, expected {length}")
    return value


def parse(text, source="<string>"):
    """Parse either format; the presence of ``"star"`` or ``"elements"`` decides which."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{source}: line {e.lineno} column {e.colno} (offset {e.pos}): {e.msg}") from None
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    if "star" in data:
        return _parse_sa(data, source)
    if "elements" in data:
        return _parse_fn(data, source)
    raise FormatError(f"{source}: neither a FiniteSA (\"star\") nor an FnAlgebra (\"elements\")")


def _parse_sa(data, source):
    extra = set(data) - {"dimension", "size", "v", "star"}
    if extra:
        raise FormatError(f"{source}: unexpected keys {sorted(extra)}")
    for key in ("dimension", "size", "v"):
        if key not in data:
            raise FormatError(f"{source}: missing key {key!r}")
    alpha = _int(data["dimension"], "dimension")
    n = _int(data["size"], "size")
    if alpha < 0 or n < 0:
        raise FormatError(f"{source}: dimension and size must be non-negative")
    v = [_int(x, f"v[{k}]") for k, x in enumerate(_list(data["v"], "v", alpha))]
    for k, x in enumerate(v):
        if not 0 <= x < n:
            raise FormatError(f"{source}: v[{k}] = {x} out of range (size {n})")
    star = _list(data["star"], "star", alpha)
    arr = np.zeros((alpha, n, n), dtype=np.int64)
    for k, table in enumerate(star):
        for a, row in enumerate(_list(table, f"star[{k}]", n)):
            for b, x in enumerate(_list(row, f"star[{k}][{a}]", n)):
                x = _int(x, f"star[{k}][{a}][{b}]")
                if not 0 <= x < n:
                    raise FormatError(f"{source}: star[{k}][{a}][{b}] = {x} out of range (size {n})")
                arr[k, a, b] = x
    return FiniteSA(alpha, n, v, arr)


def _parse_fn(data, source):
    extra = set(data) - {"dimension", "base_size", "elements", "full"}
    if extra:
        raise FormatError(f"{source}: unexpected keys {sorted(extra)}")
    for key in ("dimension", "base_size", "full"):
        if key not in data:
            raise FormatError(f"{source}: missing key {key!r}")
    alpha = _int(data["dimension"], "dimension")
    u = _int(data["base_size"], "base_size")
    if not isinstance(data["full"], bool):
        raise FormatError(f"{source}: full must be true or false")
    if alpha < 0 or u < 1:
        raise FormatError(f"{source}: need dimension >= 0 and base_size >= 1")
    m = u ** alpha
    elements = []
    for i, t in enumerate(_list(data["elements"], "elements")):
        t = _list(t, f"elements[{i}]", m)
        for r, x in enumerate(t):
            x = _int(x, f"elements[{i}][{r}]")
            if not 0 <= x < u:
                raise FormatError(f"{source}: elements[{i}][{r}] = {x} is not a base element (|U| = {u})")
        elements.append(FnElement(alpha, u, t))
    try:
        return FnAlgebra(alpha, u, elements, full=data["full"])
    except UsageError as e:
        raise FormatError(f"{source}: {e}") from None


def load(path):
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path))


def load_sa(path):
    """Load a file as a :class:`FiniteSA`, tabulating an FnAlgebra if needed."""
    obj = load(path)
    return as_finite_sa(obj) if isinstance(obj, FnAlgebra) else obj


def save(obj, path):
    Path(path).write_text(dumps(obj), encoding="utf-8")


def io_roundtrip(path, out_path):
    """Load ``path`` and write it canonically to ``out_path``; returns the loaded object."""
    obj = load(path)
    save(obj, out_path)
    return obj
