from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

from ..errors import CrackMissesFaces
from .supports import compute_supports
from .topology import EXTERNAL_H_FLOOR
from .types import Crack, Face, FaceKind, Partition, SupportSet

logger = logging.getLogger(__name__)

CRACK_SEGMENT = "crack"


def insert_crack(
    partition: Partition, supports: SupportSet, crack: Crack | np.ndarray
) -> tuple[Partition, SupportSet]:
    """Break the internal faces lying on ``crack`` into adiabatic face pairs.

    Each matched face becomes two external faces of kind ``crack`` (zero
    Neumann flux), one per side, and supports are rebuilt so that no two points
    on opposite sides of the crack support each other.
    """

    if not isinstance(crack, Crack):
        crack = Crack(np.asarray(crack, dtype=float))
    tol = 1.0e-9 * partition.diameter
    internal = partition.internal_faces
    centroids = np.array([face.centroid for face in internal]).reshape(-1, partition.dim)
    hits = {internal[k].id for k in np.flatnonzero(crack.distance(centroids) <= tol)} if internal else set()
    if not hits:
        raise CrackMissesFaces("No internal face lies on the crack")

    points = partition.points
    floor = EXTERNAL_H_FLOOR * partition.mean_internal_h
    faces: list[Face] = []
    renumber: dict[int, int] = {}
    mirrored: dict[int, int] = {}
    for face in partition.faces:
        renumber[face.id] = len(faces)
        if face.id not in hits:
            faces.append(replace(face, id=len(faces)))
            continue
        faces.append(
            replace(
                face,
                id=len(faces),
                neighbor=None,
                segment=CRACK_SEGMENT,
                kind=FaceKind.CRACK,
                h=max(float(abs(face.normal @ (face.centroid - points[face.owner]))), floor),
            )
        )
        mirrored[face.id] = len(faces)
        faces.append(
            replace(
                face,
                id=len(faces),
                vertices=tuple(reversed(face.vertices)),
                normal=-face.normal,
                owner=face.neighbor,
                neighbor=None,
                segment=CRACK_SEGMENT,
                kind=FaceKind.CRACK,
                h=max(float(abs(face.normal @ (face.centroid - points[face.neighbor]))), floor),
            )
        )

    cells = []
    for cell in partition.cells:
        ids = []
        for old in cell.faces:
            source = partition.faces[old]
            if old in mirrored and source.neighbor == cell.id:
                ids.append(mirrored[old])
            else:
                ids.append(renumber[old])
        cells.append(replace(cell, faces=tuple(ids)))

    cracked = replace(
        partition, faces=tuple(faces), cells=tuple(cells), cracks=partition.cracks + (crack,)
    )
    logger.info("Crack broke %d internal faces", len(hits))
    return cracked, compute_supports(cracked, supports.need_second_ring)
