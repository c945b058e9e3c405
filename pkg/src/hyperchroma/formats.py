"""Plain-text file formats.

Hypergraph::

    n m
    r v_1 ... v_r        (m lines, vertices ascending, line order = edge id)

Coloring::

    # colors_used=C proper=true|false
    edge_id color_id     (one line per colored edge, ascending edge id)

Palettes::

    edge_id q c_1 ... c_q

Lines starting with ``#`` are comments everywhere except the coloring header,
which is regenerated on write.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, TextIO

from hyperchroma.hypergraph import Hypergraph


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _content_lines(lines: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        yield lineno, s.split()


def _ints(lineno: int, tokens: list[str]) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_hypergraph(text: str) -> Hypergraph:
    rows = _content_lines(text.splitlines())
    try:
        lineno, tokens = next(rows)
    except StopIteration:
        raise ParseError(1, "empty file; expected header 'n m'") from None
    header = _ints(lineno, tokens)
    if len(header) != 2:
        raise ParseError(lineno, "header must be 'n m'")
    n, m = header
    if n < 0 or m < 0:
        raise ParseError(lineno, "n and m must be nonnegative")
    edges = []
    for lineno, tokens in rows:
        vals = _ints(lineno, tokens)
        r, verts = vals[0], vals[1:]
        if r != len(verts):
            raise ParseError(lineno, f"rank {r} but {len(verts)} vertices listed")
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise ParseError(lineno, "vertices must be strictly ascending")
        if any(not (0 <= v < n) for v in verts):
            raise ParseError(lineno, f"vertex id out of range [0, {n})")
        edges.append(tuple(verts))
    if len(edges) != m:
        raise ParseError(lineno if edges else 1, f"header declares {m} edges, found {len(edges)}")
    return Hypergraph(n, tuple(edges))


def format_hypergraph(h: Hypergraph) -> str:
    out = [f"{h.n} {h.m}"]
    out.extend(" ".join(map(str, (len(e), *e))) for e in h.edges)
    return "\n".join(out) + "\n"


def read_hypergraph(path: str | Path) -> Hypergraph:
    return parse_hypergraph(Path(path).read_text())


def write_hypergraph(h: Hypergraph, path: str | Path) -> None:
    Path(path).write_text(format_hypergraph(h))


def format_coloring(colors: dict[int, int], proper: bool) -> str:
    out = [f"# colors_used={len(set(colors.values()))} proper={'true' if proper else 'false'}"]
    out.extend(f"{e} {colors[e]}" for e in sorted(colors))
    return "\n".join(out) + "\n"


def parse_coloring(text: str) -> dict[int, int]:
    colors: dict[int, int] = {}
    for lineno, tokens in _content_lines(text.splitlines()):
        vals = _ints(lineno, tokens)
        if len(vals) != 2:
            raise ParseError(lineno, "expected 'edge_id color_id'")
        e, c = vals
        if e in colors:
            raise ParseError(lineno, f"edge {e} colored twice")
        colors[e] = c
    return colors


def format_palettes(palettes: dict[int, list[int]]) -> str:
    return "".join(
        " ".join(map(str, (e, len(palettes[e]), *palettes[e]))) + "\n" for e in sorted(palettes)
    )


def parse_palettes(text: str) -> dict[int, list[int]]:
    palettes: dict[int, list[int]] = {}
    for lineno, tokens in _content_lines(text.splitlines()):
        vals = _ints(lineno, tokens)
        if len(vals) < 2 or vals[1] != len(vals) - 2:
            raise ParseError(lineno, "expected 'edge_id q c_1 ... c_q'")
        e, colors = vals[0], vals[2:]
        if len(set(colors)) != len(colors):
            raise ParseError(lineno, f"palette of edge {e} repeats a color")
        if e in palettes:
            raise ParseError(lineno, f"edge {e} has two palettes")
        palettes[e] = colors
    return palettes


def write_text(path: str | Path | None, text: str, stream: TextIO) -> None:
    if path is None or str(path) == "-":
        stream.write(text)
    else:
        Path(path).write_text(text)
