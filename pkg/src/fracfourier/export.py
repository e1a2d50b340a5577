"""CSV and SVG writers plus the flat ``key=value`` config format.

CSV dialect: comma separated, ``\\n`` line endings, ``#``-prefixed metadata
lines before a single header line. Floats are written with 17 significant
digits so every double survives a round trip; parsing a file and writing it
back reproduces it byte for byte.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ArgumentError

FLOAT_FORMAT = ".17g"


def format_cell(value, in_row: bool = True) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        text = format(float(value), FLOAT_FORMAT)
        # keep integral floats (and -0.0) distinguishable from ints
        return text + ".0" if _INT_RE.match(text) else text
    text = str(value)
    # metadata lines are never split on commas, only on the first "="
    forbidden = "\n\r," if in_row else "\n\r"
    if any(c in text for c in forbidden):
        raise ArgumentError(f"CSV cell may not contain separators: {text!r}")
    return text


_INT_RE = re.compile(r"[+-]?\d+\Z")
_FLOAT_RE = re.compile(r"[+-]?(\d+\.?\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?|inf|nan)\Z")


def parse_cell(text: str):
    """Inverse of :func:`format_cell` on its own output."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            pass
    return text


@dataclass
class Table:
    """Header, rows and ordered metadata of one CSV file."""

    header: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict[str, object] = field(default_factory=dict)

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, value in self.meta.items():
            if "=" in key or "\n" in key:
                raise ArgumentError(f"bad metadata key {key!r}")
            out.write(f"# {key}={format_cell(value, in_row=False)}\n")
        out.write(",".join(self.header) + "\n")
        width = len(self.header)
        for row in self.rows:
            if len(row) != width:
                raise ArgumentError(f"row has {len(row)} cells, header has {width}")
            out.write(",".join(format_cell(v) for v in row) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> Table:
        meta: dict[str, object] = {}
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        i = 0
        while i < len(lines) and lines[i].startswith("#"):
            key, _, value = lines[i][1:].strip().partition("=")
            meta[key] = parse_cell(value)
            i += 1
        if i == len(lines):
            raise ArgumentError("CSV has no header line")
        header = lines[i].split(",")
        rows = [[parse_cell(c) for c in line.split(",")] for line in lines[i + 1 :]]
        return cls(header, rows, meta)


def write_text(text: str, out) -> None:
    """Write to a path, or to an open text stream (``None`` means stdout)."""
    if out is None:
        import sys

        sys.stdout.write(text)
        sys.stdout.flush()
        return
    if hasattr(out, "write"):
        out.write(text)
        return
    with open(Path(out), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path) -> Table:
    with open(Path(path), encoding="utf-8", newline="") as fh:
        return Table.from_csv(fh.read())


# --------------------------------------------------------------------------
# SVG

VIEWBOX = 1000
_MARGIN = 20


def svg_polyline(x, y, title: str = "") -> str:
    """A single polyline through ``(x, y)`` scaled into a 1000x1000 viewBox.

    The y axis points up. Degenerate extents collapse to the centre line.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.size == 0:
        raise ArgumentError("polyline needs equally long, nonempty x and y")
    span = VIEWBOX - 2 * _MARGIN

    def scale(v):
        lo, hi = float(v.min()), float(v.max())
        if hi - lo <= 0 or not math.isfinite(hi - lo):
            return np.full_like(v, 0.5 * span)
        return (v - lo) / (hi - lo) * span

    px = _MARGIN + scale(x)
    py = VIEWBOX - _MARGIN - scale(y)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEWBOX} {VIEWBOX}" '
        f'width="{VIEWBOX}" height="{VIEWBOX}">\n'
    )
    body = ""
    if title:
        safe = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        body += f"<title>{safe}</title>\n"
    body += f'<rect width="{VIEWBOX}" height="{VIEWBOX}" fill="white"/>\n'
    body += f'<polyline fill="none" stroke="black" stroke-width="0.6" points="{pts}"/>\n'
    return head + body + "</svg>\n"


# --------------------------------------------------------------------------
# config files


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment, blank lines are ignored.

    Keys are normalised to their flag spelling (``sieve_limit`` -> ``sieve-limit``).
    """
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-").lstrip("-")
        if not sep or not key:
            raise ArgumentError(f"config line {lineno}: expected key=value, got {raw!r}")
        out[key] = value.strip()
    return out


def read_config(path) -> dict[str, str]:
    with open(Path(path), encoding="utf-8") as fh:
        return parse_config(fh.read())


def read_custom_coefficients(path) -> np.ndarray:
    """One coefficient per line as ``re,im`` (``re`` alone means im = 0)."""
    values = []
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                if len(parts) == 1:
                    values.append(complex(float(parts[0]), 0.0))
                elif len(parts) == 2:
                    values.append(complex(float(parts[0]), float(parts[1])))
                else:
                    raise ValueError
            except ValueError:
                raise ArgumentError(
                    f"{path}:{lineno}: expected 're,im', got {line!r}"
                ) from None
    if not values:
        raise ArgumentError(f"{path}: no coefficients")
    return np.array(values, dtype=np.complex128)


__all__ = [
    "FLOAT_FORMAT",
    "Table",
    "format_cell",
    "parse_cell",
    "parse_config",
    "read_config",
    "read_csv",
    "read_custom_coefficients",
    "svg_polyline",
    "write_text",
]
