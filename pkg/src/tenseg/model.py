"""Tensegrity data model, validation and the line-oriented text format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

STRUT = "strut"
CABLE = "cable"
BAR = "bar"
EDGE_KINDS = (STRUT, CABLE, BAR)


class ModelError(ValueError):
    """Invalid tensegrity data. ``line`` is set when raised by the parser."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EdgeRow:
    kind: str  # STRUT or CABLE
    endpoints: tuple[int, int]  # vertex indices
    origin: str = "native"  # or "bar"


@dataclass(frozen=True)
class Tensegrity:
    dim: int
    vertices: tuple[tuple[str, tuple[float, ...]], ...]
    struts: tuple[tuple[str, str], ...] = ()
    cables: tuple[tuple[str, str], ...] = ()
    bars: tuple[tuple[str, str], ...] = ()
    chains: tuple[tuple[str, ...], ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           tuple((str(v), tuple(float(x) for x in p)) for v, p in self.vertices))
        for name in ("struts", "cables", "bars"):
            object.__setattr__(self, name, tuple((str(a), str(b)) for a, b in getattr(self, name)))
        object.__setattr__(self, "chains", tuple(tuple(str(v) for v in c) for c in self.chains))
        object.__setattr__(self, "_index", {v: i for i, (v, _) in enumerate(self.vertices)})
        validate(self)

    @property
    def ids(self) -> list[str]:
        return [v for v, _ in self.vertices]

    @property
    def positions(self) -> list[tuple[float, ...]]:
        return [p for _, p in self.vertices]

    def index(self, vid: str) -> int:
        return self._index[vid]

    def position(self, vid: str) -> tuple[float, ...]:
        return self.vertices[self._index[vid]][1]

    def units(self) -> list[tuple[str, str, str]]:
        """Removable edge units ``(kind, a, b)``; a bar is a single unit."""
        return ([(STRUT, a, b) for a, b in self.struts]
                + [(CABLE, a, b) for a, b in self.cables]
                + [(BAR, a, b) for a, b in self.bars])

    def with_units(self, units: Iterable[tuple[str, str, str]]) -> "Tensegrity":
        """Sub-tensegrity on the same vertices and chains keeping only ``units``."""
        keep = set(units)
        edges = {k: tuple((a, b) for kk, a, b in self.units() if kk == k and (kk, a, b) in keep)
                 for k in EDGE_KINDS}
        return Tensegrity(self.dim, self.vertices, edges[STRUT], edges[CABLE], edges[BAR],
                          self.chains)

    def with_positions(self, positions: Sequence[Sequence[float]]) -> "Tensegrity":
        dim = len(positions[0]) if positions else self.dim
        verts = tuple((v, tuple(p)) for (v, _), p in zip(self.vertices, positions))
        return Tensegrity(dim, verts, self.struts, self.cables, self.bars, self.chains)


def validate(t: Tensegrity) -> None:
    if not isinstance(t.dim, int) or t.dim < 1:
        raise ModelError(f"dimension must be a positive integer, got {t.dim!r}")
    seen: dict[str, int] = {}
    for i, (v, p) in enumerate(t.vertices):
        if v in seen:
            raise ModelError(f"duplicate vertex id {v!r}")
        if not v or any(ch.isspace() for ch in v) or "#" in v:
            raise ModelError(f"vertex id {v!r} must be a single token")
        seen[v] = i
        if len(p) != t.dim:
            raise ModelError(f"vertex {v!r} has {len(p)} coordinates, expected {t.dim}")
        if not all(math.isfinite(x) for x in p):
            raise ModelError(f"vertex {v!r} has a non-finite coordinate")
    where: dict[frozenset, str] = {}
    for kind in EDGE_KINDS:
        for a, b in getattr(t, kind + "s"):
            for v in (a, b):
                if v not in seen:
                    raise ModelError(f"unknown vertex {v!r} in {kind} {a} {b}")
            if a == b:
                raise ModelError(f"self-loop {kind} {a} {b}")
            key = frozenset((a, b))
            if key in where:
                if where[key] == kind:
                    raise ModelError(f"duplicate edge {kind} {a} {b}")
                raise ModelError(f"duplicate pair {a} {b}: duplicate pair across edge sets "
                                 "forbidden unless declared as bar")
            where[key] = kind
    for chain in t.chains:
        if len(chain) < 2:
            raise ModelError("chain needs at least two vertices")
        for v in chain:
            if v not in seen:
                raise ModelError(f"unknown vertex {v!r} in chain")
    placed: dict[tuple[float, ...], str] = {}
    for v, p in t.vertices:
        if p in placed:
            raise ModelError(f"vertices {placed[p]!r} and {v!r} share position {p}")
        placed[p] = v


def edge_rows(t: Tensegrity) -> list[EdgeRow]:
    """Struts, then cables, then one strut row and one cable row per bar."""
    ix = t.index
    rows = [EdgeRow(STRUT, (ix(a), ix(b))) for a, b in t.struts]
    rows += [EdgeRow(CABLE, (ix(a), ix(b))) for a, b in t.cables]
    for a, b in t.bars:
        rows.append(EdgeRow(STRUT, (ix(a), ix(b)), "bar"))
        rows.append(EdgeRow(CABLE, (ix(a), ix(b)), "bar"))
    return rows


def unit_rows(t: Tensegrity) -> list[list[int]]:
    """Row indices belonging to each entry of ``t.units()``."""
    ns, nc = len(t.struts), len(t.cables)
    out = [[i] for i in range(ns + nc)]
    out += [[ns + nc + 2 * j, ns + nc + 2 * j + 1] for j in range(len(t.bars))]
    return out


def parse(text: str) -> Tensegrity:
    dim = None
    verts, chains = [], []
    edges = {k: [] for k in EDGE_KINDS}
    ids: set[str] = set()
    placed: dict[tuple[float, ...], str] = {}
    pairs: dict[frozenset, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *args = line.split()
        if dim is None:
            if word != "dim" or len(args) != 1:
                raise ModelError("first statement must be 'dim <n>'", lineno)
            try:
                dim = int(args[0])
            except ValueError:
                raise ModelError(f"bad dimension {args[0]!r}", lineno) from None
            if dim < 1:
                raise ModelError("dimension must be positive", lineno)
        elif word == "vertex":
            if len(args) != dim + 1:
                raise ModelError(f"vertex needs an id and {dim} coordinates", lineno)
            vid = args[0]
            try:
                coords = tuple(float(x) for x in args[1:])
            except ValueError:
                raise ModelError("bad coordinate", lineno) from None
            if not all(math.isfinite(c) for c in coords):
                raise ModelError("coordinates must be finite", lineno)
            if vid in ids:
                raise ModelError(f"duplicate vertex id {vid!r}", lineno)
            if coords in placed:
                raise ModelError(f"vertices {placed[coords]!r} and {vid!r} share a position",
                                 lineno)
            ids.add(vid)
            placed[coords] = vid
            verts.append((vid, coords))
        elif word in EDGE_KINDS:
            if len(args) != 2:
                raise ModelError(f"{word} takes two vertex ids", lineno)
            a, b = args
            for v in args:
                if v not in ids:
                    raise ModelError(f"unknown vertex {v!r}", lineno)
            if a == b:
                raise ModelError(f"self-loop {word} {a} {b}", lineno)
            key = frozenset(args)
            if key in pairs:
                if pairs[key] == word:
                    raise ModelError(f"duplicate edge {word} {a} {b}", lineno)
                raise ModelError("duplicate pair across edge sets forbidden unless "
                                 "declared as bar", lineno)
            pairs[key] = word
            edges[word].append((a, b))
        elif word == "chain":
            if len(args) < 2:
                raise ModelError("chain takes at least two vertex ids", lineno)
            for v in args:
                if v not in ids:
                    raise ModelError(f"unknown vertex {v!r}", lineno)
            chains.append(tuple(args))
        elif word == "dim":
            raise ModelError("repeated 'dim'", lineno)
        else:
            raise ModelError(f"unknown statement {word!r}", lineno)
    if dim is None:
        raise ModelError("missing 'dim' line", 1)
    return Tensegrity(dim, verts, edges[STRUT], edges[CABLE], edges[BAR], chains)


def _num(x: float) -> str:
    return format(x, ".17g")


def render(t: Tensegrity) -> str:
    out = [f"dim {t.dim}"]
    out += [f"vertex {v} " + " ".join(_num(x) for x in p) for v, p in t.vertices]
    for kind in EDGE_KINDS:
        out += [f"{kind} {a} {b}" for a, b in getattr(t, kind + "s")]
    out += ["chain " + " ".join(c) for c in t.chains]
    return "\n".join(out) + "\n"


def read(path) -> Tensegrity:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(t: Tensegrity, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render(t))
