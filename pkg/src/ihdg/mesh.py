"""Uniform structured tensor-product meshes of a box domain.

Elements are axis-aligned quads/hexes numbered lexicographically (axis 0
fastest).  Every face record knows its owner element, its neighbor (or a
boundary marker), the owner's unit outward normal, centroid and measure.
Meshes are immutable after construction and safe for concurrent reads.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

BOUNDARY = -1

BOUNDARY_TAGS = ("inflow", "outflow", "wall", "dirichlet")


@dataclass
class Face:
    """One mesh face: owner side carries the outward unit normal."""

    index: int
    axis: int
    owner: int
    neighbor: int  # element id or BOUNDARY
    normal: np.ndarray
    centroid: np.ndarray
    measure: float
    tag: str = ""  # one of BOUNDARY_TAGS for boundary faces once classified


class StructuredMesh:
    """Tensor-product tessellation of ``[lo, hi]`` with ``cells_per_dim`` cells.

    Attributes
    ----------
    dim : int
    cells : tuple of int
    lo, hi, h : float arrays of length dim
    n_elements : int
    faces : list of Face
    element_to_faces : (Nel, 2*dim) int array
        Local face slot ``2*axis + side`` with side 0 the low face (outward
        normal ``-e_axis``) and side 1 the high face.
    neighbor_elements, neighbor_faces : (Nel, 2*dim) int arrays
        Neighbor element id and its local face slot across each local face;
        BOUNDARY where there is no neighbor.
    """

    def __init__(self, dim, cells_per_dim, box):
        if dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
        cells = tuple(int(n) for n in np.atleast_1d(cells_per_dim))
        if len(cells) == 1 and dim > 1:
            cells = cells * dim
        if len(cells) != dim:
            raise ValueError(f"need {dim} cell counts, got {cells}")
        if any(n < 1 for n in cells):
            raise ValueError(f"cell counts must be positive, got {cells}")
        lo = np.asarray(box[0], dtype=float).reshape(dim)
        hi = np.asarray(box[1], dtype=float).reshape(dim)
        if np.any(hi <= lo):
            raise ValueError(f"degenerate box: lo={lo}, hi={hi}")

        self.dim = dim
        self.cells = cells
        self.lo = lo
        self.hi = hi
        self.h = (hi - lo) / np.array(cells, dtype=float)
        self.n_elements = int(np.prod(cells))

        self._strides = np.ones(dim, dtype=np.int64)
        for a in range(1, dim):
            self._strides[a] = self._strides[a - 1] * cells[a - 1]

        self._build_faces()

    # -- construction ----------------------------------------------------

    def _build_faces(self):
        dim, cells, h = self.dim, self.cells, self.h
        nel = self.n_elements
        faces = []
        e2f = np.full((nel, 2 * dim), -1, dtype=np.int64)
        nbr_e = np.full((nel, 2 * dim), BOUNDARY, dtype=np.int64)
        nbr_f = np.full((nel, 2 * dim), BOUNDARY, dtype=np.int64)

        for axis in range(dim):
            tang = [a for a in range(dim) if a != axis]
            tang_cells = [cells[a] for a in tang]
            measure = float(np.prod([h[a] for a in tang])) if tang else 1.0
            for plane in range(cells[axis] + 1):
                coord = self.lo[axis] + plane * h[axis]
                for tidx in np.ndindex(*reversed(tang_cells)) if tang else [()]:
                    # np.ndindex iterates last axis fastest; reverse so the
                    # smallest tangential axis is fastest.
                    tidx = tuple(reversed(tidx))
                    midx = [0] * dim
                    for a, i in zip(tang, tidx):
                        midx[a] = i
                    lower = upper = None
                    if plane > 0:
                        midx[axis] = plane - 1
                        lower = int(np.dot(midx, self._strides))
                    if plane < cells[axis]:
                        midx[axis] = plane
                        upper = int(np.dot(midx, self._strides))
                    if lower is not None:
                        owner, neighbor, side = lower, upper, 1
                        sign = 1.0
                    else:
                        owner, neighbor, side = upper, None, 0
                        sign = -1.0
                    normal = np.zeros(dim)
                    normal[axis] = sign
                    centroid = np.empty(dim)
                    centroid[axis] = coord
                    for a, i in zip(tang, tidx):
                        centroid[a] = self.lo[a] + (i + 0.5) * h[a]
                    fid = len(faces)
                    faces.append(
                        Face(fid, axis, owner, BOUNDARY if neighbor is None else neighbor,
                             normal, centroid, measure)
                    )
                    e2f[owner, 2 * axis + side] = fid
                    if neighbor is not None:
                        e2f[neighbor, 2 * axis + 0] = fid
                        nbr_e[owner, 2 * axis + 1] = neighbor
                        nbr_f[owner, 2 * axis + 1] = 2 * axis + 0
                        nbr_e[neighbor, 2 * axis + 0] = owner
                        nbr_f[neighbor, 2 * axis + 0] = 2 * axis + 1

        self.faces = faces
        self.element_to_faces = e2f
        self.neighbor_elements = nbr_e
        self.neighbor_faces = nbr_f
        self.n_faces = len(faces)
        self.interior_faces = [f.index for f in faces if f.neighbor != BOUNDARY]
        self.boundary_faces = [f.index for f in faces if f.neighbor == BOUNDARY]

    # -- geometry queries ------------------------------------------------

    def element_multi_index(self, e):
        """Inverse of the lexicographic element numbering."""
        idx = []
        for a in range(self.dim):
            idx.append(int(e // self._strides[a] % self.cells[a]))
        return tuple(idx)

    def element_origin(self, e):
        """Lower corner of element ``e``."""
        return self.lo + np.array(self.element_multi_index(e)) * self.h

    def element_points(self, e, ref1d):
        """Tensor grid of points in element ``e``.

        ``ref1d`` holds per-axis 1D reference coordinates on [-1, 1]; returns
        an (n_points, dim) array ordered lexicographically, axis 0 fastest.
        """
        orig = self.element_origin(e)
        axes = [orig[a] + 0.5 * self.h[a] * (np.asarray(ref1d[a]) + 1.0)
                for a in range(self.dim)]
        return _tensor_points(axes)

    def face_points(self, fid, ref1d):
        """Tensor grid of points on face ``fid`` (shared point ordering).

        The tangential axes are taken in increasing axis order with the
        smallest axis fastest, so the owner and neighbor elements enumerate
        the same physical points in the same order.
        """
        face = self.faces[fid]
        tang = [a for a in range(self.dim) if a != face.axis]
        lo_corner = face.centroid.copy()
        axes = []
        for a in tang:
            axes.append(face.centroid[a] - 0.5 * self.h[a]
                        + 0.5 * self.h[a] * (np.asarray(ref1d) + 1.0))
        if not tang:
            return face.centroid.reshape(1, self.dim)
        pts = _tensor_points(axes)
        out = np.empty((pts.shape[0], self.dim))
        out[:, face.axis] = face.centroid[face.axis]
        for k, a in enumerate(tang):
            out[:, a] = pts[:, k]
        return out

    def element_face_points(self, e, local_face, ref1d):
        """Points of an element's local face, same ordering as face_points."""
        return self.face_points(self.element_to_faces[e, local_face], ref1d)

    def boundary_surface_measure(self):
        return sum(self.faces[f].measure for f in self.boundary_faces)

    def tag_boundary(self, tag):
        """Return a copy with every boundary face tagged ``tag``."""
        if tag not in BOUNDARY_TAGS:
            raise ValueError(f"unknown boundary tag {tag!r}")
        tagged = copy.copy(self)
        tagged.faces = [copy.copy(f) for f in self.faces]
        for fid in tagged.boundary_faces:
            tagged.faces[fid].tag = tag
        return tagged


def _tensor_points(axes):
    grids = np.meshgrid(*axes, indexing="ij")
    # lexicographic with axis 0 fastest
    cols = [g.ravel(order="F") for g in grids]
    return np.stack(cols, axis=-1)


def build_mesh(dim, cells_per_dim, box=None):
    """Build a StructuredMesh; ``box`` defaults to the unit square/cube."""
    if box is None:
        box = (np.zeros(dim), np.ones(dim))
    return StructuredMesh(dim, cells_per_dim, box)


def classify_boundary_faces(mesh, beta, n_quad=4):
    """Tag boundary faces by the sign of ``beta . n`` at quadrature points.

    Faces with ``beta . n < 0`` at every point are tagged inflow, faces with
    ``beta . n >= 0`` everywhere outflow (a vanishing normal velocity carries
    no inflow data, so it counts as outflow).  Mixed-sign faces are tagged
    "mixed" and carry a per-quadrature-point inflow mask.

    Returns a tagged copy of the mesh with ``inflow_masks`` mapping boundary
    face ids to boolean arrays over the face quadrature points.
    """
    from numpy.polynomial.legendre import leggauss

    ref, _ = leggauss(n_quad)
    tagged = copy.copy(mesh)
    tagged.faces = [copy.copy(f) for f in mesh.faces]
    masks = {}
    for fid in mesh.boundary_faces:
        face = tagged.faces[fid]
        pts = mesh.face_points(fid, ref)
        bn = np.asarray(beta(pts)) @ face.normal
        mask = bn < 0.0
        masks[fid] = mask
        if mask.all():
            face.tag = "inflow"
        elif not mask.any():
            face.tag = "outflow"
        else:
            face.tag = "mixed"
    tagged.inflow_masks = masks
    return tagged
