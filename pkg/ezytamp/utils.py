import json
import math
import re
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ezytamp import fields as fld
from ezytamp.errors import InputError

Cell = Tuple[int, int]

_kind_suffix = re.compile(r"_\d+$")


def cached_property(x):
    return property(lru_cache(maxsize=1)(x))


def object_kind(name: str) -> str:
    """Return object name without its trailing instance number (e.g. cup_1 -> cup)."""
    return _kind_suffix.sub("", name)


def octile(a: Cell, b: Cell) -> float:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return (dx + dy) + (fld.SQRT2 - 2.0) * min(dx, dy)


def count_steps(cells: Sequence[Cell]) -> Tuple[int, int]:
    """Return number of (orthogonal, diagonal) steps along cells."""
    n_orth = 0
    n_diag = 0
    for a, b in zip(cells, cells[1:]):
        if a[0] != b[0] and a[1] != b[1]:
            n_diag += 1
        else:
            n_orth += 1
    return n_orth, n_diag


def path_length_m(cells: Sequence[Cell], cell_size: float) -> float:
    """Path length in meters.

    Computed from step counts so that two paths with the same step
    composition always have bit-identical lengths.
    """
    n_orth, n_diag = count_steps(cells)
    return (n_orth + n_diag * fld.SQRT2) * cell_size


def heading_of(a: Cell, b: Cell) -> int:
    """Heading index in 45 degree units, 0 is +x, counter-clockwise."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return int(round(math.degrees(math.atan2(dy, dx)) / fld.HEADING_STEP_DEG)) % 8


def heading_delta(h0: int, h1: int) -> int:
    """Signed smallest rotation from h0 to h1 in 45 degree units (-3..4)."""
    d = (h1 - h0) % 8
    return d - 8 if d > 4 else d


def count_turns(cells: Sequence[Cell]) -> int:
    """Number of 45 degree turns along cells.

    The first step sets the heading without turning.
    """
    turns = 0
    heading = None
    for a, b in zip(cells, cells[1:]):
        h = heading_of(a, b)
        if heading is not None:
            turns += abs(heading_delta(heading, h))
        heading = h
    return turns


def split_rng(seed: int, run_seed: int = 0, n: int = 3) -> List[np.random.Generator]:
    """Independent random streams derived from (seed, run_seed).

    Stream order is fixed: navigation, manipulation, sampling.
    """
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(run_seed)])
    return [np.random.default_rng(s) for s in ss.spawn(n)]


def to_cell(value: Any, where: str = "cell") -> Cell:
    if isinstance(value, str):
        value = value.split(",")
    try:
        x, y = value
        return int(x), int(y)
    except (TypeError, ValueError):
        msg = f"Invalid {where}: {value!r}"
        raise InputError(msg) from None


def cell_key(cell: Cell) -> str:
    return f"{cell[0]},{cell[1]}"


def to_canonical_json(data: Any, indent: Union[int, None] = 2) -> str:
    return json.dumps(data, sort_keys=True, indent=indent, ensure_ascii=False) + "\n"


def read_json(source: Union[str, Path, dict]) -> dict:
    """Load a JSON document from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        return source
    text = str(source)
    if isinstance(source, Path) or not text.lstrip().startswith(("{", "[")):
        path = Path(source)
        if not path.is_file():
            msg = f"{path} is not found"
            raise InputError(msg)
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"Parse error: {e}"
        raise InputError(msg) from e


def write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        msg = f"Cannot write {path}: {e}"
        raise InputError(msg) from e
    return path


def cells_to_list(cells: Iterable[Cell]) -> List[List[int]]:
    return [[int(x), int(y)] for x, y in cells]
