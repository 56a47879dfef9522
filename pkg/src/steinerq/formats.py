"""Reading and writing the ``points:`` / ``block:`` text format."""
from __future__ import annotations

from pathlib import Path


def _point(token: str):
    return int(token) if token.isdigit() else token


def loads_blocks(text: str):
    """Parse the text format into ``(points, blocks)`` without validating.

    Lines are ``points: p1 p2 ...`` (may repeat) and ``block: a b c``;
    ``#`` starts a comment.  Point names made only of digits become ints.
    """
    points: list = []
    blocks: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("points", "block"):
            raise ValueError(f"line {lineno}: expected 'points:' or 'block:', got {raw!r}")
        tokens = [_point(tok) for tok in rest.split()]
        if key == "points":
            points.extend(tokens)
        else:
            blocks.append(tuple(tokens))
    return points, blocks


def load_blocks(path):
    return loads_blocks(Path(path).read_text(encoding="utf-8"))


def dumps_blocks(points, blocks) -> str:
    lines = ["points: " + " ".join(str(p) for p in points)]
    for block in blocks:
        lines.append("block: " + " ".join(str(p) for p in block))
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    return Path(__file__).with_name("fixtures") / name
