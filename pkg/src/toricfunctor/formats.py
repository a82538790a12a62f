"""Readers for the line-oriented fan and map file formats.

Fan file::

    # comment
    dim 2
    ray x1 1 0
    ray x2 0 1
    ray x0 -1 -1
    cone x1 x2
    cone x0 x2
    cone x0 x1

A bare ``cone`` line lists the zero cone; a file with no cone lines at all
gets the zero cone as its only maximal cone.

Map file::

    source P 1                # or: source fan <path>
    target fan p2.fan
    field Q                   # or: field <prime>
    var t0 t1                 # required for fan sources
    P x0 = t0^2
    P x1 = t0*t1
    P x2 = t1^2
    torus 5                   # one line per torus character, non-spanning targets only

Paths are resolved relative to the file that mentions them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError
from .fan import NAME_RE, Fan
from .morphism import MorphismData, ProjectiveSpace, ToricSource
from .poly import Field, Polynomial, field_from_descriptor, parse_polynomial


class FormatError(InputError):
    def __init__(self, path, lineno: int | None, message: str):
        where = f"{path}:{lineno}" if lineno else str(path)
        super().__init__(f"{where}: {message}")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_fan_text(text: str, path="<fan>") -> Fan:
    dim = None
    rays: list[tuple[str, tuple[int, ...]]] = []
    cones: list[list[str]] = []
    for lineno, line in _lines(text):
        words = line.split()
        key = words[0]
        if dim is None and key != "dim":
            raise FormatError(path, lineno, "the first line must be 'dim <n>'")
        if key == "dim":
            if dim is not None:
                raise FormatError(path, lineno, "duplicate 'dim' line")
            if len(words) != 2 or not re.fullmatch(r"\d+", words[1]):
                raise FormatError(path, lineno, "expected 'dim <n>'")
            dim = int(words[1])
        elif key == "ray":
            if len(words) < 2 or not NAME_RE.match(words[1]):
                raise FormatError(path, lineno, "expected 'ray <name> <c1> ... <cn>'")
            try:
                coords = tuple(int(w) for w in words[2:])
            except ValueError:
                raise FormatError(path, lineno, "ray coordinates must be integers") from None
            rays.append((words[1], coords))
        elif key == "cone":
            for w in words[1:]:
                if not NAME_RE.match(w):
                    raise FormatError(path, lineno, f"bad ray name {w!r}")
            cones.append(words[1:])
        else:
            raise FormatError(path, lineno, f"unknown keyword {key!r}")
    if dim is None:
        raise FormatError(path, None, "missing 'dim' line")
    return Fan.build(dim, rays, cones)


def read_fan(path) -> Fan:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(path, None, f"cannot read: {exc.strerror}") from None
    return parse_fan_text(text, path)


@dataclass
class MapFile:
    data: MorphismData
    torus: list[Polynomial] | None
    path: Path
    source_fan_path: Path | None = None
    target_fan_path: Path | None = None


def read_map(path, load_fan=read_fan) -> MapFile:
    """Parse a map file.  Fans are loaded with `load_fan`, which may validate them."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(path, None, f"cannot read: {exc.strerror}") from None
    base = path.parent
    source = target = field = None
    variables = None
    sections: list[tuple[int, str, str]] = []
    torus: list[tuple[int, str]] = []
    src_path = tgt_path = None
    for lineno, line in _lines(text):
        words = line.split()
        key = words[0]
        if key == "source":
            if source is not None:
                raise FormatError(path, lineno, "duplicate 'source' line")
            if len(words) == 3 and words[1] == "P" and re.fullmatch(r"\d+", words[2]):
                source = ("P", int(words[2]))
            elif len(words) == 3 and words[1] == "fan":
                src_path = base / words[2]
                source = ("fan", src_path)
            else:
                raise FormatError(path, lineno, "expected 'source P <m>' or 'source fan <path>'")
        elif key == "target":
            if target is not None:
                raise FormatError(path, lineno, "duplicate 'target' line")
            if len(words) != 3 or words[1] != "fan":
                raise FormatError(path, lineno, "expected 'target fan <path>'")
            tgt_path = base / words[2]
            target = tgt_path
        elif key == "field":
            if field is not None:
                raise FormatError(path, lineno, "duplicate 'field' line")
            if len(words) != 2:
                raise FormatError(path, lineno, "expected 'field Q' or 'field <prime>'")
            try:
                field = field_from_descriptor(words[1])
            except InputError as exc:
                raise FormatError(path, lineno, str(exc)) from None
        elif key == "var":
            if variables is not None:
                raise FormatError(path, lineno, "duplicate 'var' line")
            variables = tuple(words[1:])
            bad = [v for v in variables if not NAME_RE.match(v)]
            if bad or not variables or len(set(variables)) != len(variables):
                raise FormatError(path, lineno, "variable names must be distinct identifiers")
        elif key == "P":
            m = re.fullmatch(r"P\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)", line)
            if not m:
                raise FormatError(path, lineno, "expected 'P <ray> = <polynomial>'")
            sections.append((lineno, m.group(1), m.group(2)))
        elif key == "torus":
            if len(words) < 2:
                raise FormatError(path, lineno, "expected 'torus <expression>'")
            torus.append((lineno, line[len("torus"):].strip()))
        else:
            raise FormatError(path, lineno, f"unknown keyword {key!r}")

    if source is None or target is None:
        raise FormatError(path, None, "'source' and 'target' lines are required")
    field: Field = field if field is not None else field_from_descriptor("Q")
    target_fan = load_fan(target)
    if source[0] == "P":
        src = ProjectiveSpace(source[1], variables) if variables is not None else ProjectiveSpace(source[1])
        if variables is not None and len(variables) != source[1] + 1:
            raise FormatError(path, None, f"P^{source[1]} needs {source[1] + 1} variables")
    else:
        if variables is None:
            raise FormatError(path, None, "a fan source needs a 'var' line")
        src_fan = load_fan(source[1])
        if len(variables) != src_fan.nrays:
            raise FormatError(path, None, f"source fan has {src_fan.nrays} rays, 'var' names {len(variables)}")
        src = ToricSource.from_fan(src_fan, variables)

    polys: dict[str, Polynomial] = {}
    for lineno, ray, expr in sections:
        if ray in polys:
            raise FormatError(path, lineno, f"ray {ray} assigned twice")
        if ray not in target_fan.ray_names:
            raise FormatError(path, lineno, f"target has no ray {ray!r}")
        try:
            polys[ray] = parse_polynomial(expr, src.variables, field)
        except InputError as exc:
            raise FormatError(path, lineno, str(exc)) from None
    missing = [n for n in target_fan.ray_names if n not in polys]
    if missing:
        raise FormatError(path, None, f"no section for ray(s) {', '.join(missing)}")
    tor = None
    if torus:
        tor = []
        for lineno, expr in torus:
            try:
                tor.append(parse_polynomial(expr, src.variables, field))
            except InputError as exc:
                raise FormatError(path, lineno, str(exc)) from None
    data = MorphismData.build(src, target_fan, polys, field)
    return MapFile(data, tor, path, src_path, tgt_path)


def format_fan(fan: Fan) -> str:
    lines = [f"dim {fan.ambient_rank}"]
    for r in fan.rays:
        lines.append(" ".join(["ray", r.name, *map(str, r.generator)]))
    for cone in fan.max_cones:
        lines.append(" ".join(["cone", *fan.sorted_cone(cone)]))
    return "\n".join(lines) + "\n"
