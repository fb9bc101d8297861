"""Structured quadrilateral meshes and degree-of-freedom maps.

Both subdomains are axis-aligned rectangles meshed with a uniform
tensor-product grid; the interface is always one horizontal edge of the
rectangle. Q2 nodes live on the grid refined by two in each direction.

Node numbering is row-major (x fastest). Vector spaces are stored in
component blocks: all x-components first, then all y-components.
"""

from dataclasses import dataclass, field

import numpy as np

SIDES = ("left", "right", "bottom", "top")
SPACE_KINDS = ("q2_vector", "q1_scalar", "q2_scalar")


@dataclass(frozen=True)
class StructuredMesh:
    origin: tuple
    extent: tuple
    nx: int
    ny: int
    interface_side: str

    @property
    def hx(self):
        return self.extent[0] / self.nx

    @property
    def hy(self):
        return self.extent[1] / self.ny

    @property
    def h(self):
        """Element size; equal to hx for the square elements used in practice."""
        return max(self.hx, self.hy)

    @property
    def n_elements(self):
        return self.nx * self.ny

    @property
    def normal_sign(self):
        """y-component of the unit normal on the interface pointing out of this
        rectangle (+1 for a top interface, -1 for a bottom one)."""
        return 1.0 if self.interface_side == "top" else -1.0

    @property
    def interface_y(self):
        return self.origin[1] + (self.extent[1] if self.interface_side == "top" else 0.0)

    @property
    def x_range(self):
        return (self.origin[0], self.origin[0] + self.extent[0])

    @property
    def y_range(self):
        return (self.origin[1], self.origin[1] + self.extent[1])

    def coordinates(self, degree):
        """1D coordinate arrays ``(xs, ys)`` of the degree-1 or degree-2 node grid.

        Computed as ``origin + extent * i / n`` so that the last node equals
        ``origin + extent`` bit-for-bit and conforming meshes share their
        interface coordinates exactly.
        """
        mx, my = degree * self.nx, degree * self.ny
        xs = self.origin[0] + self.extent[0] * (np.arange(mx + 1) / mx)
        ys = self.origin[1] + self.extent[1] * (np.arange(my + 1) / my)
        return xs, ys

    def nodes(self, degree):
        """``(n_nodes, 2)`` array of node coordinates, row-major."""
        xs, ys = self.coordinates(degree)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def interface_x(self, degree=2):
        return self.coordinates(degree)[0]


def build_mesh(origin, extent, nx, ny, interface_side):
    if int(nx) != nx or int(ny) != ny or nx < 1 or ny < 1:
        raise ValueError(f"element counts must be positive integers, got nx={nx!r}, ny={ny!r}")
    if not (extent[0] > 0 and extent[1] > 0):
        raise ValueError(f"extent must be positive, got {extent!r}")
    if interface_side not in ("top", "bottom"):
        raise ValueError(f"interface must be the top or bottom edge, got {interface_side!r}")
    return StructuredMesh(
        (float(origin[0]), float(origin[1])),
        (float(extent[0]), float(extent[1])),
        int(nx),
        int(ny),
        interface_side,
    )


@dataclass
class DofMap:
    """Dof numbering for one finite element space on a StructuredMesh.

    Attributes
    ----------
    kind : str
        ``"q2_vector"``, ``"q1_scalar"`` or ``"q2_scalar"``.
    n_nodes : int
        Number of scalar nodes.
    n_dofs : int
        Total dofs (``2 * n_nodes`` for the vector space).
    cell_nodes : ndarray, shape (n_elements, 9) or (n_elements, 4)
        Element-to-node table; local node ``a + (degree+1)*b`` sits at
        reference position ``(a/degree, b/degree)``.
    side_nodes : dict
        Node indices on each rectangle side, ordered by increasing
        coordinate along the side.
    interface_nodes : ndarray
        Nodes on the interface side ordered left to right.
    coords : ndarray, shape (n_nodes, 2)
    """

    kind: str
    mesh: StructuredMesh
    degree: int
    n_components: int
    n_nodes: int
    cell_nodes: np.ndarray
    coords: np.ndarray
    side_nodes: dict = field(repr=False)

    @property
    def n_dofs(self):
        return self.n_components * self.n_nodes

    @property
    def interface_nodes(self):
        return self.side_nodes[self.mesh.interface_side]

    def component_dofs(self, nodes, component=0):
        return np.asarray(nodes) + component * self.n_nodes

    def interface_dofs(self, component=0):
        return self.component_dofs(self.interface_nodes, component)

    def cell_dofs(self, component=0):
        return self.cell_nodes + component * self.n_nodes


def build_dofmap(mesh, space_kind):
    if space_kind not in SPACE_KINDS:
        raise ValueError(f"unknown space kind {space_kind!r}")
    degree = 1 if space_kind == "q1_scalar" else 2
    ncomp = 2 if space_kind == "q2_vector" else 1
    mx, my = degree * mesh.nx, degree * mesh.ny
    row = mx + 1
    ex, ey = np.meshgrid(np.arange(mesh.nx), np.arange(mesh.ny))
    ex, ey = ex.ravel(), ey.ravel()
    base = degree * ex + degree * ey * row
    local = [a + b * row for b in range(degree + 1) for a in range(degree + 1)]
    cell_nodes = base[:, None] + np.asarray(local)[None, :]
    grid = np.arange((mx + 1) * (my + 1)).reshape(my + 1, mx + 1)
    sides = {
        "left": grid[:, 0].copy(),
        "right": grid[:, -1].copy(),
        "bottom": grid[0, :].copy(),
        "top": grid[-1, :].copy(),
    }
    return DofMap(
        kind=space_kind,
        mesh=mesh,
        degree=degree,
        n_components=ncomp,
        n_nodes=(mx + 1) * (my + 1),
        cell_nodes=cell_nodes,
        coords=mesh.nodes(degree),
        side_nodes=sides,
    )
