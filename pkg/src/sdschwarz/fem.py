"""Finite element assembly for the two subdomain problems.

Stokes: Q2 velocity / Q1 pressure (Taylor-Hood) with the Robin and slip
terms on the interface. Darcy: Q2 pressure with the Robin term on the
interface. Also the interface mass matrix, the L2 gradient recovery for
the porous-medium pressure and error norms.

All meshes are uniform, so every element has the same local matrices; the
assembly computes them once on the reference rectangle and scatters them.
Sources are integrated element by element with 3x3 Gauss quadrature.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .linalg import factorize, to_csr
from .mesh import SIDES, build_dofmap

QUAD_POINTS = 3


# ---------------------------------------------------------------------------
# reference element
# ---------------------------------------------------------------------------

def gauss_01(n):
    """Gauss-Legendre points and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def lagrange_1d(degree, t):
    """Values and derivatives of the 1D Lagrange basis on [0, 1] at ``t``.

    Returns arrays of shape ``(degree+1, len(t))``.
    """
    t = np.asarray(t, dtype=float)
    if degree == 1:
        val = np.array([1.0 - t, t])
        der = np.array([-np.ones_like(t), np.ones_like(t)])
    elif degree == 2:
        val = np.array([2 * t**2 - 3 * t + 1, 4 * t - 4 * t**2, 2 * t**2 - t])
        der = np.array([4 * t - 3, 4 - 8 * t, 4 * t - 1])
    else:
        raise ValueError(f"unsupported degree {degree}")
    return val, der


def tabulate(degree, xi, eta):
    """Tensor basis on the unit square at points ``(xi[q], eta[q])``.

    Local basis index ``a + (degree+1)*b`` matches :func:`build_dofmap`.
    Returns ``(phi, dphi_dxi, dphi_deta)``, each of shape ``(n_basis, n_points)``.
    """
    vx, dx = lagrange_1d(degree, xi)
    vy, dy = lagrange_1d(degree, eta)
    nb = degree + 1
    phi = np.array([vx[a] * vy[b] for b in range(nb) for a in range(nb)])
    phx = np.array([dx[a] * vy[b] for b in range(nb) for a in range(nb)])
    phy = np.array([vx[a] * dy[b] for b in range(nb) for a in range(nb)])
    return phi, phx, phy


def quadrature_2d(n):
    t, w = gauss_01(n)
    XI, ETA = np.meshgrid(t, t)
    W = np.outer(w, w)
    return XI.ravel(), ETA.ravel(), W.ravel()


@dataclass(frozen=True)
class ElementMatrices:
    """Local matrices on one hx-by-hy rectangle."""

    stiffness_x: np.ndarray  # int dphi_i/dx dphi_j/dx, Q2 x Q2
    stiffness_y: np.ndarray
    mass: np.ndarray  # Q2 x Q2
    grad_x: np.ndarray  # int phi_i dphi_j/dx
    grad_y: np.ndarray
    div_x: np.ndarray  # int q_k dphi_j/dx, Q1 x Q2
    div_y: np.ndarray


def element_matrices(hx, hy, nq=QUAD_POINTS):
    xi, eta, w = quadrature_2d(nq)
    phi, pxi, peta = tabulate(2, xi, eta)
    q1 = tabulate(1, xi, eta)[0]
    px, py = pxi / hx, peta / hy
    jw = w * hx * hy
    return ElementMatrices(
        stiffness_x=(px * jw) @ px.T,
        stiffness_y=(py * jw) @ py.T,
        mass=(phi * jw) @ phi.T,
        grad_x=(phi * jw) @ px.T,
        grad_y=(phi * jw) @ py.T,
        div_x=(q1 * jw) @ px.T,
        div_y=(q1 * jw) @ py.T,
    )


def scatter(local, rows, cols, shape):
    """Assemble identical local blocks into a global CSR matrix.

    ``rows`` is ``(n_el, nr)``, ``cols`` is ``(n_el, nc)``, ``local`` is ``(nr, nc)``.
    """
    n_el = rows.shape[0]
    R = np.broadcast_to(rows[:, :, None], (n_el, rows.shape[1], cols.shape[1]))
    C = np.broadcast_to(cols[:, None, :], R.shape)
    V = np.broadcast_to(local[None, :, :], R.shape)
    A = sp.coo_matrix((V.ravel(), (R.ravel(), C.ravel())), shape=shape)
    return to_csr(A)


def quadrature_points(mesh, nq=QUAD_POINTS):
    """Physical quadrature points ``(X, Y)`` and weights, shape ``(n_el, nq*nq)``."""
    xi, eta, w = quadrature_2d(nq)
    ex, ey = np.meshgrid(np.arange(mesh.nx), np.arange(mesh.ny))
    ex, ey = ex.ravel()[:, None], ey.ravel()[:, None]
    X = mesh.origin[0] + (ex + xi[None, :]) * mesh.hx
    Y = mesh.origin[1] + (ey + eta[None, :]) * mesh.hy
    return X, Y, w * mesh.hx * mesh.hy, (xi, eta)


def load_vector(dofmap, f, nq=QUAD_POINTS):
    """``int f phi_i`` for a scalar function ``f(x, y)`` on a scalar dofmap."""
    mesh = dofmap.mesh
    X, Y, jw, (xi, eta) = quadrature_points(mesh, nq)
    phi = tabulate(dofmap.degree, xi, eta)[0]
    fq = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape)
    local = (fq * jw) @ phi.T  # (n_el, n_basis)
    return np.bincount(dofmap.cell_nodes.ravel(), local.ravel(), minlength=dofmap.n_nodes)


def interface_mass_local(h, nq=QUAD_POINTS):
    t, w = gauss_01(nq)
    L = lagrange_1d(2, t)[0]
    return (L * w * h) @ L.T


def assemble_interface_mass(mesh):
    """1D Q2 mass matrix on the interface, in left-to-right node order."""
    n = 2 * mesh.nx + 1
    local = interface_mass_local(mesh.hx)
    rows = 2 * np.arange(mesh.nx)[:, None] + np.arange(3)[None, :]
    return scatter(local, rows, rows, (n, n))


def interface_load(mesh, g, nq=QUAD_POINTS):
    """``int_Gamma g phi_j`` over the interface trace basis."""
    t, w = gauss_01(nq)
    L = lagrange_1d(2, t)[0]
    e = np.arange(mesh.nx)[:, None]
    X = mesh.origin[0] + (e + t[None, :]) * mesh.hx
    Y = np.full_like(X, mesh.interface_y)
    gq = np.broadcast_to(np.asarray(g(X, Y), dtype=float), X.shape)
    local = (gq * w * mesh.hx) @ L.T
    rows = 2 * np.arange(mesh.nx)[:, None] + np.arange(3)[None, :]
    return np.bincount(rows.ravel(), local.ravel(), minlength=2 * mesh.nx + 1)


# ---------------------------------------------------------------------------
# boundary conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """One piece of an external boundary side.

    ``span`` restricts the segment to nodes whose coordinate along the side
    lies in the closed interval; ``None`` means the whole side. For Stokes,
    ``components`` lists the constrained velocity components and ``value``
    returns a pair of arrays; for Darcy ``value`` returns one array.
    """

    side: str
    kind: str  # "dirichlet" or "natural"
    value: Optional[Callable] = None
    components: tuple = (0, 1)
    span: Optional[tuple] = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"unknown side {self.side!r}")
        if self.kind not in ("dirichlet", "natural"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "dirichlet" and self.value is None:
            raise ValueError("Dirichlet segment needs a value function")


def _segment_nodes(dofmap, seg, tol=1e-10):
    nodes = dofmap.side_nodes[seg.side]
    if seg.span is None:
        return nodes
    along = dofmap.coords[nodes, 1 if seg.side in ("left", "right") else 0]
    lo, hi = seg.span
    return nodes[(along >= lo - tol) & (along <= hi + tol)]


def check_coverage(dofmap, segments):
    """Every node on a non-interface side must belong to some segment."""
    iface = dofmap.mesh.interface_side
    covered = set()
    for seg in segments:
        if seg.side == iface:
            raise ValueError(f"boundary segment placed on the interface side {iface!r}")
        covered.update(_segment_nodes(dofmap, seg).tolist())
    for side in SIDES:
        if side == iface:
            continue
        missing = set(dofmap.side_nodes[side].tolist()) - covered
        if missing:
            xy = dofmap.coords[min(missing)]
            raise ValueError(
                f"no boundary condition for {len(missing)} node(s) on side {side!r}, "
                f"e.g. at ({xy[0]:.6g}, {xy[1]:.6g})"
            )


def dirichlet_data(dofmap, segments):
    """Boolean mask and values of strongly constrained dofs.

    Segments are applied in order; a node constrained by several segments
    gets the union of their components (Dirichlet wins over natural).
    """
    mask = np.zeros(dofmap.n_dofs, dtype=bool)
    values = np.zeros(dofmap.n_dofs)
    for seg in segments:
        if seg.kind != "dirichlet":
            continue
        nodes = _segment_nodes(dofmap, seg)
        x, y = dofmap.coords[nodes, 0], dofmap.coords[nodes, 1]
        val = seg.value(x, y)
        if dofmap.n_components == 1:
            dofs = nodes
            mask[dofs] = True
            values[dofs] = np.broadcast_to(np.asarray(val, dtype=float), x.shape)
        else:
            for c in seg.components:
                dofs = dofmap.component_dofs(nodes, c)
                mask[dofs] = True
                values[dofs] = np.broadcast_to(np.asarray(val[c], dtype=float), x.shape)
    return mask, values


def interface_free(mesh, bc_spec, space_kind, component=0):
    """Interface nodes whose ``component`` is not strongly constrained by ``bc_spec``."""
    dm = build_dofmap(mesh, space_kind)
    mask, _ = dirichlet_data(dm, bc_spec)
    return ~mask[dm.interface_dofs(component)]


def eliminate(A, mask, values, load):
    """Symmetric row/column elimination of constrained dofs.

    Returns the modified matrix (identity on constrained dofs) and the
    lifted right-hand side.
    """
    free = (~mask).astype(float)
    D = sp.diags(free)
    A_bc = to_csr(D @ A @ D + sp.diags(mask.astype(float)))
    rhs = free * (load - A @ values) + values
    return A_bc, rhs


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

@dataclass
class FieldSolution:
    tag: str
    values: np.ndarray
    dofmap: object

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != self.dofmap.n_dofs:
            raise ValueError(
                f"{self.tag}: {self.values.shape[0]} values for {self.dofmap.n_dofs} dofs"
            )

    def component(self, c):
        n = self.dofmap.n_nodes
        return self.values[c * n : (c + 1) * n]

    def interface_trace(self, component=0):
        return self.values[self.dofmap.interface_dofs(component)]


@dataclass
class SourceFields:
    """Volume sources and optional interface tangential load.

    ``f_ff(x, y)`` returns a pair of arrays, ``f_pm(x, y)`` one array.
    ``interface_traction(x, y)``, when set, is an extra known term on the
    right of the slip condition; manufactured solutions use it.
    """

    f_ff: Optional[Callable] = None
    f_pm: Optional[Callable] = None
    interface_traction: Optional[Callable] = None


# ---------------------------------------------------------------------------
# Stokes
# ---------------------------------------------------------------------------

@dataclass
class StokesSystem:
    """Assembled and factorized Stokes subproblem.

    Unknown ordering: ``[v1 nodes, v2 nodes, p nodes]``. ``rhs_base`` holds
    body force, interface traction load and Dirichlet lifting; interface
    functionals are added per solve through :meth:`solve`.
    """

    mesh: object
    velocity: object
    pressure: object
    matrix: sp.csr_matrix
    raw_matrix: sp.csr_matrix = field(repr=False)
    rhs_base: np.ndarray = field(repr=False)
    dirichlet_mask: np.ndarray = field(repr=False)
    dirichlet_values: np.ndarray = field(repr=False)
    factor: object = field(repr=False)
    n_velocity: int = 0
    robin_rows: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_dofs(self):
        return self.matrix.shape[0]

    @property
    def normal_sign(self):
        return self.mesh.normal_sign

    @property
    def normal_dofs(self):
        """Global dofs of the normal velocity component on the interface."""
        return self.velocity.interface_dofs(1)

    @property
    def tangential_dofs(self):
        return self.velocity.interface_dofs(0)

    @property
    def normal_free(self):
        return ~self.dirichlet_mask[self.normal_dofs]

    @property
    def tangential_free(self):
        return ~self.dirichlet_mask[self.tangential_dofs]

    def interface_rhs(self, lam_gamma, lam_pm):
        """Right-hand side contribution ``+lam_gamma`` on tangential rows and
        ``-lam_pm`` tested with ``u.n`` on normal rows."""
        r = np.zeros(self.n_dofs)
        r[self.tangential_dofs] += lam_gamma
        r[self.normal_dofs] -= self.normal_sign * lam_pm
        return r

    def solve(self, extra, homogeneous=False):
        free = ~self.dirichlet_mask
        rhs = np.where(free, extra, 0.0)
        if not homogeneous:
            rhs = rhs + self.rhs_base
        return self.factor.solve(rhs)

    def normal_trace(self, x):
        """Nodal values of ``v.n`` on the interface."""
        return self.normal_sign * x[self.normal_dofs]

    def split(self, x):
        v = FieldSolution("v_ff", x[: self.n_velocity], self.velocity)
        p = FieldSolution("p_ff", x[self.n_velocity :], self.pressure)
        return v, p


def stokes_volume_matrix(vel, pre):
    """Saddle-point matrix of ``int grad v : grad u - int p div u - int q div v``."""
    mesh = vel.mesh
    em = element_matrices(mesh.hx, mesh.hy)
    nn, npr = vel.n_nodes, pre.n_nodes
    K = scatter(em.stiffness_x + em.stiffness_y, vel.cell_nodes, vel.cell_nodes, (nn, nn))
    B1 = scatter(em.div_x, pre.cell_nodes, vel.cell_nodes, (npr, nn))
    B2 = scatter(em.div_y, pre.cell_nodes, vel.cell_nodes, (npr, nn))
    return to_csr(
        sp.bmat(
            [
                [K, None, -B1.T],
                [None, K, -B2.T],
                [-B1, -B2, None],
            ]
        )
    )


def _robin_rows(n, robin_rows):
    if robin_rows is None:
        return np.ones(n, dtype=bool)
    robin_rows = np.asarray(robin_rows, dtype=bool)
    if robin_rows.shape != (n,):
        raise ValueError(f"robin_rows has shape {robin_rows.shape}, expected ({n},)")
    return robin_rows


def stokes_interface_matrix(vel, n_pressure, params, alpha_ff, robin_rows=None):
    """Interface terms ``alpha_ff (v.n)(u.n) + 1/(eps N1) (v.tau)(u.tau)``.

    The Robin term is kept only in the normal-velocity rows flagged by
    ``robin_rows`` (interface node order); the others take pure normal
    stress data.
    """
    mesh = vel.mesh
    M = assemble_interface_mass(mesh).tocoo()
    n = 2 * vel.n_nodes + n_pressure
    keep = _robin_rows(2 * mesh.nx + 1, robin_rows)[M.row]
    t_dofs = vel.interface_dofs(0)
    n_dofs = vel.interface_dofs(1)
    rows = np.concatenate([t_dofs[M.row], n_dofs[M.row[keep]]])
    cols = np.concatenate([t_dofs[M.col], n_dofs[M.col[keep]]])
    vals = np.concatenate([params.slip_coefficient * M.data, alpha_ff * M.data[keep]])
    return to_csr(sp.coo_matrix((vals, (rows, cols)), shape=(n, n)))


def stokes_load(vel, pre, sources):
    n = 2 * vel.n_nodes + pre.n_nodes
    load = np.zeros(n)
    if sources is not None and sources.f_ff is not None:
        f = sources.f_ff
        load[: vel.n_nodes] = load_vector(vel, lambda x, y: f(x, y)[0])
        load[vel.n_nodes : 2 * vel.n_nodes] = load_vector(vel, lambda x, y: f(x, y)[1])
    if sources is not None and sources.interface_traction is not None:
        load[vel.interface_dofs(0)] += interface_load(vel.mesh, sources.interface_traction)
    return load


def assemble_stokes(mesh, params, robin, sources, bc_spec, factor=True, robin_rows=None):
    """Assemble the Stokes subproblem with Robin weight ``robin.alpha_ff``.

    ``bc_spec`` is a list of :class:`Segment` covering every external side.
    ``robin_rows`` (default: all) selects the interface nodes whose normal
    rows carry the Robin term.
    """
    if params.nsbl != 0:
        raise ValueError("generalized momentum term not supported (nsbl must be 0)")
    vel = build_dofmap(mesh, "q2_vector")
    pre = build_dofmap(mesh, "q1_scalar")
    check_coverage(vel, bc_spec)
    robin_rows = _robin_rows(vel.interface_nodes.size, robin_rows)
    A = stokes_volume_matrix(vel, pre) + stokes_interface_matrix(
        vel, pre.n_nodes, params, robin.alpha_ff, robin_rows
    )
    A = to_csr(A)
    mask_v, values_v = dirichlet_data(vel, bc_spec)
    mask = np.concatenate([mask_v, np.zeros(pre.n_nodes, dtype=bool)])
    values = np.concatenate([values_v, np.zeros(pre.n_nodes)])
    load = stokes_load(vel, pre, sources)
    A_bc, rhs = eliminate(A, mask, values, load)
    return StokesSystem(
        mesh=mesh,
        velocity=vel,
        pressure=pre,
        matrix=A_bc,
        raw_matrix=A,
        rhs_base=rhs,
        dirichlet_mask=mask,
        dirichlet_values=values,
        factor=factorize(A_bc) if factor else None,
        n_velocity=vel.n_dofs,
        robin_rows=robin_rows,
    )


# ---------------------------------------------------------------------------
# Darcy
# ---------------------------------------------------------------------------

@dataclass
class DarcySystem:
    mesh: object
    pressure: object
    matrix: sp.csr_matrix
    raw_matrix: sp.csr_matrix = field(repr=False)
    rhs_base: np.ndarray = field(repr=False)
    dirichlet_mask: np.ndarray = field(repr=False)
    dirichlet_values: np.ndarray = field(repr=False)
    factor: object = field(repr=False)
    alpha_pm: float = 1.0
    robin_rows: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_dofs(self):
        return self.matrix.shape[0]

    @property
    def interface_dofs(self):
        return self.pressure.interface_dofs()

    @property
    def interface_free(self):
        return ~self.dirichlet_mask[self.interface_dofs]

    def interface_rhs(self, lam_ff):
        r = np.zeros(self.n_dofs)
        r[self.interface_dofs] = lam_ff / self.alpha_pm
        return r

    def solve(self, extra, homogeneous=False):
        rhs = np.where(self.dirichlet_mask, 0.0, extra)
        if not homogeneous:
            rhs = rhs + self.rhs_base
        return self.factor.solve(rhs)


def darcy_volume_matrix(dofmap, params):
    mesh = dofmap.mesh
    em = element_matrices(mesh.hx, mesh.hy)
    local = params.kappa11 * em.stiffness_x + params.kappa22 * em.stiffness_y
    return scatter(local, dofmap.cell_nodes, dofmap.cell_nodes, (dofmap.n_nodes,) * 2)


def darcy_load(dofmap, sources):
    if sources is None or sources.f_pm is None:
        return np.zeros(dofmap.n_nodes)
    return load_vector(dofmap, sources.f_pm)


def assemble_darcy(mesh, params, robin, sources, bc_spec, factor=True, robin_rows=None):
    """Assemble ``int K grad p . grad psi + 1/alpha_pm int_Gamma p psi``.

    The interface term is kept only in the rows flagged by ``robin_rows``.
    """
    if params.nsbl != 0:
        raise ValueError("generalized momentum term not supported (nsbl must be 0)")
    dm = build_dofmap(mesh, "q2_scalar")
    check_coverage(dm, bc_spec)
    C = darcy_volume_matrix(dm, params)
    M = assemble_interface_mass(mesh).tocoo()
    idofs = dm.interface_dofs()
    robin_rows = _robin_rows(idofs.size, robin_rows)
    keep = robin_rows[M.row]
    robin_term = sp.coo_matrix(
        (M.data[keep] / robin.alpha_pm, (idofs[M.row[keep]], idofs[M.col[keep]])),
        shape=C.shape,
    )
    A = to_csr(C + robin_term)
    mask, values = dirichlet_data(dm, bc_spec)
    A_bc, rhs = eliminate(A, mask, values, darcy_load(dm, sources))
    return DarcySystem(
        mesh=mesh,
        pressure=dm,
        matrix=A_bc,
        raw_matrix=A,
        rhs_base=rhs,
        dirichlet_mask=mask,
        dirichlet_values=values,
        factor=factorize(A_bc) if factor else None,
        alpha_pm=robin.alpha_pm,
        robin_rows=robin_rows,
    )


# ---------------------------------------------------------------------------
# gradient recovery and interface functionals
# ---------------------------------------------------------------------------

class GradientRecovery:
    """Global L2 projection of the gradient of a Q2 scalar onto Q2 vectors."""

    def __init__(self, dofmap):
        self.dofmap = dofmap
        mesh = dofmap.mesh
        em = element_matrices(mesh.hx, mesh.hy)
        shape = (dofmap.n_nodes,) * 2
        self.mass = scatter(em.mass, dofmap.cell_nodes, dofmap.cell_nodes, shape)
        self.grad_x = scatter(em.grad_x, dofmap.cell_nodes, dofmap.cell_nodes, shape)
        self.grad_y = scatter(em.grad_y, dofmap.cell_nodes, dofmap.cell_nodes, shape)
        self._mass_factor = factorize(self.mass)

    def dx(self, p):
        return self._mass_factor.solve(self.grad_x @ p)

    def dy(self, p):
        return self._mass_factor.solve(self.grad_y @ p)

    def __call__(self, p):
        return np.concatenate([self.dx(p), self.dy(p)])


def recover_pressure_gradient(p_pm, recovery=None):
    """Continuous Q2 approximation of ``grad p_pm`` (L2 projection)."""
    if p_pm.dofmap.kind != "q2_scalar":
        raise ValueError("gradient recovery expects a Q2 scalar field")
    if recovery is None:
        recovery = GradientRecovery(p_pm.dofmap)
    vec = build_dofmap(p_pm.dofmap.mesh, "q2_vector")
    return FieldSolution("grad_p_pm", recovery(p_pm.values), vec)


def assemble_interface_functionals(p_pm, grad_p, params, robin):
    """Discrete ``lambda_Gamma`` and ``lambda_pm`` of a porous-medium pressure.

    ``lambda_Gamma = -(eps/N1) M11 dp/dx`` tested with ``u.tau``;
    ``lambda_pm = alpha_ff K grad p . n + p`` tested with ``u.n``.
    ``grad_p`` must be the recovered gradient of ``p_pm``.
    """
    if grad_p is None:
        raise ValueError("interface functionals need the recovered pressure gradient")
    mesh = p_pm.dofmap.mesh
    M = assemble_interface_mass(mesh)
    n_y = -mesh.normal_sign  # the Darcy interface normal points out of the free flow
    gx = grad_p.interface_trace(0)
    gy = grad_p.interface_trace(1)
    p = p_pm.interface_trace()
    lam_gamma = -params.tangential_gradient_coefficient * (M @ gx)
    lam_pm = M @ (robin.alpha_ff * params.kappa22 * n_y * gy + p)
    return lam_gamma, lam_pm


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

def evaluate_at_quadrature(field_, nq=4):
    """Field values at the physical quadrature points, per component."""
    dm = field_.dofmap
    X, Y, jw, (xi, eta) = quadrature_points(dm.mesh, nq)
    phi = tabulate(dm.degree, xi, eta)[0]
    comps = [field_.component(c)[dm.cell_nodes] @ phi for c in range(dm.n_components)]
    return X, Y, jw, comps


def l2_error(field_, exact, nq=4):
    """L2 norm of ``field - exact`` by element-wise Gauss quadrature.

    ``exact(x, y)`` returns an array for scalar fields and a pair of arrays
    for vector fields.
    """
    X, Y, jw, comps = evaluate_at_quadrature(field_, nq)
    ex = exact(X, Y)
    if field_.dofmap.n_components == 1:
        ex = [ex]
    total = 0.0
    for uh, ue in zip(comps, ex):
        total += np.sum((uh - np.broadcast_to(ue, uh.shape)) ** 2 * jw)
    return float(np.sqrt(total))


def l2_norm(field_, nq=4):
    X, Y, jw, comps = evaluate_at_quadrature(field_, nq)
    return float(np.sqrt(sum(np.sum(u**2 * jw) for u in comps)))
