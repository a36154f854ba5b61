"""Body files, body specs and CSV output.

Body file format::

    # comments start with '#'
    n M
    x_1 ... x_n      (M vertex rows)
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .bodies import Ball, cross_polytope, cube, regular_polygon
from .errors import ParseError
from .polytope import build_polytope, normalize_unit_volume

__all__ = ["BodySpec", "parse_body_file", "parse_body_text", "parse_body_spec", "load_body", "fmt", "write_csv"]


def parse_body_text(text, source="<string>"):
    """Parse body-file text into a vertex array of shape ``(M, n)``."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ParseError(f"{source}: header must be 'n M'", lineno, 1)
            try:
                n, m = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError(f"{source}: header values must be integers", lineno, 1) from None
            if n < 1 or m < 1:
                raise ParseError(f"{source}: n and M must be positive", lineno, 1)
            header = (n, m)
            continue
        n, m = header
        if len(rows) == m:
            raise ParseError(f"{source}: more vertex rows than the declared M = {m}", lineno, 1)
        if len(tokens) != n:
            raise ParseError(f"{source}: expected {n} coordinates, found {len(tokens)}", lineno, 1)
        row = []
        col = 1
        for tok in tokens:
            col = raw.index(tok, col - 1) + 1
            try:
                value = float(tok)
            except ValueError:
                raise ParseError(f"{source}: not a number: {tok!r}", lineno, col) from None
            if not math.isfinite(value):
                raise ParseError(f"{source}: non-finite coordinate {tok!r}", lineno, col)
            row.append(value)
            col += len(tok)
        rows.append(row)
    if header is None:
        raise ParseError(f"{source}: empty body file")
    if len(rows) != header[1]:
        raise ParseError(f"{source}: declared M = {header[1]} vertices but found {len(rows)}", lineno, 1)
    return np.array(rows, dtype=float).reshape(header[1], header[0])


def parse_body_file(path, normalize=False):
    """Read a body file and build the polytope; optionally rescale to volume 1."""
    with open(path, encoding="utf-8") as fh:
        pts = parse_body_text(fh.read(), str(path))
    P = build_polytope(pts)
    return normalize_unit_volume(P) if normalize else P


@dataclass(frozen=True)
class BodySpec:
    """Where a body comes from: ``builtin:<name>:<n>[:<m>]`` or a file path."""

    source: str
    name: str = ""
    dim: int = 0
    param: int = 0
    path: str = ""
    normalize: bool = False

    @property
    def label(self):
        if self.source == "file":
            return self.path
        if self.name == "polygon":
            return f"polygon{self.param}"
        return f"{self.name}{self.dim}"


def parse_body_spec(text, normalize=False):
    """Parse ``builtin:cube:2``, ``builtin:cross:3``, ``builtin:polygon:6``, ``builtin:ball:2`` or a path."""
    if not text.startswith("builtin:"):
        return BodySpec("file", path=text, normalize=normalize)
    parts = text.split(":")[1:]
    name = parts[0] if parts else ""
    try:
        if name in ("cube", "cross", "ball") and len(parts) == 2:
            return BodySpec("builtin", name, int(parts[1]), normalize=normalize)
        if name in ("polygon", "regular-polygon") and len(parts) == 2:
            return BodySpec("builtin", "polygon", 2, int(parts[1]), normalize=normalize)
    except ValueError:
        pass
    raise ValueError(
        f"bad body spec {text!r}; use builtin:cube:N, builtin:cross:N, builtin:polygon:M, builtin:ball:N or a file path"
    )


def load_body(spec):
    """Materialize a :class:`BodySpec`.  ``ball`` is always volume one."""
    if isinstance(spec, str):
        spec = parse_body_spec(spec)
    if spec.source == "file":
        return parse_body_file(spec.path, spec.normalize)
    if spec.name == "ball":
        return Ball(spec.dim)
    if spec.name == "cube":
        P = cube(spec.dim)
    elif spec.name == "cross":
        P = cross_polytope(spec.dim)
    else:
        P = regular_polygon(spec.param)
    return normalize_unit_volume(P) if spec.normalize else P


def fmt(value):
    """Fixed 17-significant-digit text for floats; plain text for everything else."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_csv(rows, header, path=None):
    """Write rows with ``\\n`` line endings; returns the text when ``path`` is None."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text
