"""Cayley table documents: a `loop n` header, then n rows of n entries."""

import logging
from typing import List, Optional

import numpy as np

from config import Config
from loops.base import CayleyLoop, Loop, as_cayley
from utils.errors import LoopFormatError, SizeGateError

logger = logging.getLogger(__name__)


def load_cayley(text: str, name: str = 'cayley') -> CayleyLoop:
    order: Optional[int] = None
    rows: List[List[int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if order is None:
            if words[0] != 'loop' or len(words) != 2:
                raise LoopFormatError(f"expected 'loop <n>' header, got {line!r}", line=line_no)
            try:
                order = int(words[1])
            except ValueError:
                raise LoopFormatError(f"order {words[1]!r} is not an integer", line=line_no)
            if order < 1:
                raise LoopFormatError(f"order must be positive, got {order}", line=line_no)
            continue

        if len(rows) == order:
            raise LoopFormatError(f"more than {order} rows", line=line_no, row=len(rows))
        try:
            values = [int(w) for w in words]
        except ValueError:
            raise LoopFormatError(f"row {len(rows)} has a non-integer entry", line=line_no, row=len(rows))
        if len(values) != order:
            raise LoopFormatError(f"row {len(rows)} has {len(values)} entries, expected {order}",
                                  line=line_no, row=len(rows))
        rows.append(values)

    if order is None:
        raise LoopFormatError("missing 'loop <n>' header")
    if len(rows) != order:
        raise LoopFormatError(f"expected {order} rows, got {len(rows)}", row=len(rows))

    loop = CayleyLoop(np.asarray(rows, dtype=np.int64), name=name)
    logger.debug(f"Loaded Cayley table {name} of order {order}")
    return loop


def save_cayley(loop: Loop, cap: Optional[int] = None) -> str:
    cap = cap or Config.CAYLEY_EXPORT_CAP
    if loop.order > cap:
        raise SizeGateError(f"refusing to export {loop.name}: order {loop.order} above the Cayley cap {cap}")
    table = as_cayley(loop, cap).table
    lines = [f"loop {loop.order}"]
    lines.extend(' '.join(str(int(v)) for v in row) for row in table)
    return '\n'.join(lines) + '\n'
