from __future__ import annotations

from collections.abc import Iterable

from pydantic import ValidationError

from ..errors import ParseError, UnsupportedElementType
from ..geometry.elements import ELEMENT_NODES
from ..schemas import MeshBoundary, MeshDocument, MeshElement, MeshNode

SECTION_HEADERS = {"dim", "nodes", "elements", "boundary"}


def _tokens(raw_line: str) -> list[str]:
    return raw_line.split("#", 1)[0].split()


def _number(token: str, line: int, column: int, kind: type = float):
    try:
        return kind(token)
    except ValueError as exc:
        raise ParseError(f"Expected {kind.__name__}, got {token!r}", line=line, column=column) from exc


def _column(raw_line: str, index: int) -> int:
    """1-based column of the ``index``-th token."""

    position = 0
    for _ in range(index + 1):
        while raw_line[position].isspace():
            position += 1
        start = position
        while position < len(raw_line) and not raw_line[position].isspace():
            position += 1
    return start + 1


def parse_mesh_from_lines(lines: Iterable[str]) -> MeshDocument:
    """Parse the plain-text node/element/boundary mesh format."""

    dim: int | None = None
    nodes: list[MeshNode] = []
    elements: list[MeshElement] = []
    boundary: list[MeshBoundary] = []

    section: str | None = None
    remaining = 0
    references: list[tuple[int, int, int]] = []
    for number, raw_line in enumerate(lines, start=1):
        tokens = _tokens(raw_line)
        if not tokens:
            continue

        if remaining == 0:
            header = tokens[0].lower()
            if header not in SECTION_HEADERS or len(tokens) != 2:
                raise ParseError(f"Expected a section header, got {raw_line.strip()!r}", line=number, column=_column(raw_line, 0))
            count = _number(tokens[1], number, _column(raw_line, 1), int)
            if header == "dim":
                if count not in (2, 3):
                    raise ParseError("dim must be 2 or 3", line=number, column=_column(raw_line, 1))
                dim = count
                continue
            if dim is None:
                raise ParseError("The dim header must come first", line=number, column=1)
            section, remaining = header, count
            continue

        if section == "nodes":
            if len(tokens) != dim + 1:
                raise ParseError(f"Node lines need an id and {dim} coordinates", line=number, column=_column(raw_line, 0))
            node_id = _number(tokens[0], number, _column(raw_line, 0), int)
            coords = tuple(_number(t, number, _column(raw_line, k + 1)) for k, t in enumerate(tokens[1:]))
            nodes.append(MeshNode(id=node_id, coords=coords))
        elif section == "elements":
            if len(tokens) < 3:
                raise ParseError("Element lines need an id, a type and nodes", line=number, column=_column(raw_line, 0))
            kind = tokens[1].split("(", 1)[0].lower()
            if kind not in ELEMENT_NODES:
                raise UnsupportedElementType(f"Unsupported element type {tokens[1]!r} on line {number}")
            expected, element_dim = ELEMENT_NODES[kind]
            if element_dim != dim:
                raise UnsupportedElementType(f"{kind} elements cannot appear in a {dim}D mesh (line {number})")
            if len(tokens) - 2 != expected:
                raise ParseError(f"{kind} elements need {expected} nodes", line=number, column=_column(raw_line, 1))
            element_nodes = []
            for k, token in enumerate(tokens[2:]):
                column = _column(raw_line, k + 2)
                element_nodes.append(_number(token, number, column, int))
                references.append((element_nodes[-1], number, column))
            elements.append(
                MeshElement(id=_number(tokens[0], number, _column(raw_line, 0), int), type=kind, nodes=element_nodes)
            )
        elif section == "boundary":
            if len(tokens) < 4:
                raise ParseError("Boundary lines need a segment, face nodes and a kind", line=number, column=_column(raw_line, 0))
            try:
                boundary.append(
                    MeshBoundary(
                        segment=tokens[0],
                        nodes=[_number(t, number, _column(raw_line, k + 1), int) for k, t in enumerate(tokens[1:-1])],
                        kind=tokens[-1].upper(),
                    )
                )
            except ValidationError as exc:
                raise ParseError(f"Unknown boundary kind {tokens[-1]!r}", line=number, column=_column(raw_line, len(tokens) - 1)) from exc
        remaining -= 1

    if dim is None:
        raise ParseError("Missing dim header", line=1, column=1)
    if remaining:
        raise ParseError(f"Section {section} ends early: {remaining} lines missing")

    known = {node.id for node in nodes}
    if len(known) != len(nodes):
        raise ParseError("Duplicate node ids")
    for node_id, line, column in references:
        if node_id not in known:
            raise ParseError(f"Element references missing node {node_id}", line=line, column=column)
    for entry in boundary:
        missing = [v for v in entry.nodes if v not in known]
        if missing:
            raise ParseError(f"Boundary segment {entry.segment} references missing node {missing[0]}")
    return MeshDocument(dim=dim, nodes=nodes, elements=elements, boundary=boundary)
