from __future__ import annotations

from collections.abc import Sequence

from ..errors import UnsupportedElementType

# node counts and spatial dimension per element type
ELEMENT_NODES = {"tri": (3, 2), "quad": (4, 2), "tet": (4, 3), "hex": (8, 3)}

# hex nodes: bottom face 0-3 counter-clockwise, top face 4-7 above them
HEX_FACES = ((0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7))
TET_FACES = ((0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2))


def element_cell(kind: str, nodes: Sequence[int]) -> list[int] | list[list[int]]:
    """Vertex ring (2D) or face loops (3D) of one element."""

    if kind not in ELEMENT_NODES:
        raise UnsupportedElementType(f"Unsupported element type: {kind}")
    count, _ = ELEMENT_NODES[kind]
    if len(nodes) != count:
        raise UnsupportedElementType(f"Element type {kind} needs {count} nodes, got {len(nodes)}")
    if kind in ("tri", "quad"):
        return list(nodes)
    template = HEX_FACES if kind == "hex" else TET_FACES
    return [[nodes[i] for i in face] for face in template]
