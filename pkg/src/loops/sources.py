"""
Loop sources: preset names, Cayley files, ring-spec files and descriptor files.
"""

import logging
from pathlib import Path
from typing import Dict, Union

from algebra.ring import parse_ring_spec
from loops.base import Loop
from loops.cayley_io import load_cayley
from loops.groups import chein_double, verify_group
from loops.presets import PRESET_NAMES, preset
from loops.triple import build_bruck_loop
from utils.errors import LoopFormatError, UnknownNameError

logger = logging.getLogger(__name__)

DESCRIPTOR_KINDS = ('bruck', 'preset', 'chein', 'cayley')


def _first_word(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            return line.split()[0]
    return ''


def resolve_loop(source: Union[str, Path, Loop]) -> Loop:
    if isinstance(source, Loop):
        return source
    if str(source) in PRESET_NAMES:
        return preset(str(source))

    path = Path(source)
    if not path.is_file():
        raise UnknownNameError(f"'{source}' is neither a preset ({', '.join(PRESET_NAMES)}) nor a file")

    text = path.read_text(encoding='utf-8')
    header = _first_word(text)
    if header == 'ring':
        return build_bruck_loop(parse_ring_spec(text, path.stem))
    if header == 'loop':
        return load_cayley(text, name=path.stem)
    if header == 'descriptor':
        return load_descriptor(text, base=path.parent)
    raise LoopFormatError(f"{path}: unrecognized header {header!r} (expected ring, loop or descriptor)")


def descriptor_text(kind: str, source: str, loop: Loop) -> str:
    return f"descriptor\nkind = {kind}\nsource = {source}\norder = {loop.order}\n"


def parse_descriptor(text: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    header_seen = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != 'descriptor':
                raise LoopFormatError(f"expected 'descriptor' header, got {line!r}", line=line_no)
            header_seen = True
            continue
        key, sep, value = line.partition('=')
        if not sep:
            raise LoopFormatError(f"expected 'key = value', got {line!r}", line=line_no)
        fields[key.strip()] = value.strip()
    for key in ('kind', 'source', 'order'):
        if key not in fields:
            raise LoopFormatError(f"descriptor is missing '{key}'")
    return fields


def load_descriptor(text: str, base: Path = Path('.')) -> Loop:
    fields = parse_descriptor(text)
    kind, source = fields['kind'], fields['source']
    if kind not in DESCRIPTOR_KINDS:
        raise LoopFormatError(f"unknown descriptor kind {kind!r}")

    if kind == 'preset':
        loop = preset(source)
    else:
        candidate = Path(source)
        if not candidate.is_absolute() and not candidate.exists() and (base / candidate).exists():
            candidate = base / candidate
        if kind == 'bruck':
            loop = build_bruck_loop(str(candidate) if candidate.exists() else source)
        elif kind == 'chein':
            loop = chein_double(verify_group(resolve_loop(candidate)))
        else:
            loop = resolve_loop(candidate)

    try:
        expected = int(fields['order'])
    except ValueError:
        raise LoopFormatError(f"descriptor order {fields['order']!r} is not an integer")
    if loop.order != expected:
        raise LoopFormatError(f"descriptor says order {expected}, source builds order {loop.order}")
    return loop
