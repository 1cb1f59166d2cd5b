"""Set persistence: the DSET1 (cube) and TSET1 (tube) text formats.

A file is a header line ``DSET1 n=<level>`` or ``TSET1 n=<level>``
followed by one whitespace-separated ``i j`` pair per line.  Writing uses
the canonical sorted member order, so save/load round trips are
byte-identical.  Loading rejects malformed headers, non-integer fields,
out-of-range indices and duplicates, reporting the offending line number.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .dyadic import CubeSet
from .incidence import TubeSet


class SetFileError(ValueError):
    """Parse failure; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_MAGIC = {"DSET1": CubeSet, "TSET1": TubeSet}


def save_set(path: Union[str, Path], S: Union[CubeSet, TubeSet]) -> None:
    magic = "DSET1" if isinstance(S, CubeSet) else "TSET1"
    lines = [f"{magic} n={S.level}"]
    lines.extend(f"{i} {j}" for i, j in S.members)
    Path(path).write_text("\n".join(lines) + "\n")


def _load(path: Union[str, Path], expect_magic: str):
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise SetFileError("empty file", 1)
    header = lines[0].split()
    if len(header) != 2 or header[0] != expect_magic or not header[1].startswith("n="):
        raise SetFileError(f"expected header '{expect_magic} n=<level>', got {lines[0]!r}", 1)
    try:
        level = int(header[1][2:])
    except ValueError:
        raise SetFileError(f"bad level in header {lines[0]!r}", 1) from None
    if level < 0:
        raise SetFileError(f"negative level {level}", 1)
    side = 1 << level
    seen = set()
    pairs = []
    for num, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.split()
        if len(fields) != 2:
            raise SetFileError(f"expected 'i j', got {raw!r}", num)
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise SetFileError(f"non-integer index in {raw!r}", num) from None
        if not (0 <= i < side and 0 <= j < side):
            raise SetFileError(f"index ({i}, {j}) outside level-{level} grid", num)
        if (i, j) in seen:
            raise SetFileError(f"duplicate entry ({i}, {j})", num)
        seen.add((i, j))
        pairs.append((i, j))
    return level, pairs


def load_cube_set(path: Union[str, Path]) -> CubeSet:
    level, pairs = _load(path, "DSET1")
    return CubeSet(level, pairs)


def load_tube_set(path: Union[str, Path]) -> TubeSet:
    level, pairs = _load(path, "TSET1")
    return TubeSet(level, pairs)


def load_set(path: Union[str, Path]) -> Union[CubeSet, TubeSet]:
    """Dispatch on the magic in the header line."""
    first = Path(path).read_text().split("\n", 1)[0].split()
    if first and first[0] in _MAGIC:
        return load_cube_set(path) if first[0] == "DSET1" else load_tube_set(path)
    raise SetFileError(f"unknown set format {first[:1]!r}", 1)
