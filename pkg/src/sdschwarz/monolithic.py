"""Direct solve of the coupled problem without domain decomposition.

Reference for the interface iteration: the same element spaces, the same
recovered pressure gradient in the slip condition, and the coupling
conditions imposed as matrix blocks instead of Robin data. Unknowns are
``[v1, v2, p_ff | p_pm | g_x]`` where ``g_x`` is the L2-projected
``dp_pm/dx`` (its defining rows are ``M g_x - G_x p_pm = 0``).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import fem
from .linalg import to_csr
from .mesh import build_dofmap


@dataclass
class MonolithicSolution:
    v_ff: fem.FieldSolution
    p_ff: fem.FieldSolution
    p_pm: fem.FieldSolution
    matrix: sp.csr_matrix


def _interface_block(M, rows, cols, shape, scale):
    M = M.tocoo()
    return sp.coo_matrix((scale * M.data, (rows[M.row], cols[M.col])), shape=shape)


def assemble_monolithic(case):
    """Global matrix and right-hand side after Dirichlet elimination."""
    params, src = case.params, case.sources
    ff, pm = case.ff_mesh, case.pm_mesh
    vel = build_dofmap(ff, "q2_vector")
    pre = build_dofmap(ff, "q1_scalar")
    dp = build_dofmap(pm, "q2_scalar")
    fem.check_coverage(vel, case.ff_bcs)
    fem.check_coverage(dp, case.pm_bcs)

    ns = 2 * vel.n_nodes + pre.n_nodes
    nd = dp.n_nodes
    N = ns + 2 * nd
    off_p, off_g = ns, ns + nd
    shape = (N, N)
    M = fem.assemble_interface_mass(ff)
    n_y = ff.normal_sign

    # Stokes block with the slip term only (no Robin term)
    stokes = fem.stokes_volume_matrix(vel, pre)
    slip = _interface_block(
        M, vel.interface_dofs(0), vel.interface_dofs(0), stokes.shape, params.slip_coefficient
    )
    darcy = fem.darcy_volume_matrix(dp, params)
    rec = fem.GradientRecovery(dp)
    blocks = [
        [to_csr(stokes + slip), None, None],
        [None, darcy, None],
        [None, -rec.grad_x, rec.mass],
    ]
    A = sp.bmat(blocks, format="csr")

    t_dofs = vel.interface_dofs(0)
    v2_dofs = vel.interface_dofs(1)
    p_dofs = dp.interface_dofs() + off_p
    g_dofs = dp.interface_dofs() + off_g
    coupling = [
        # normal stress balance: + n_y int p_pm (u.n) on the v2 rows
        _interface_block(M, v2_dofs, p_dofs, shape, n_y),
        # mass balance: - int (v.n) psi on the Darcy rows
        _interface_block(M, p_dofs, v2_dofs, shape, -n_y),
        # slip condition: + (eps M11/N1) int g_x (u.tau) on the v1 rows
        _interface_block(M, t_dofs, g_dofs, shape, params.tangential_gradient_coefficient),
    ]
    A = to_csr(A + sum(coupling))

    load = np.zeros(N)
    load[:ns] = fem.stokes_load(vel, pre, src)
    load[off_p:off_g] = fem.darcy_load(dp, src)

    mask_v, val_v = fem.dirichlet_data(vel, case.ff_bcs)
    mask_p, val_p = fem.dirichlet_data(dp, case.pm_bcs)
    mask = np.concatenate([mask_v, np.zeros(pre.n_nodes, bool), mask_p, np.zeros(nd, bool)])
    values = np.concatenate([val_v, np.zeros(pre.n_nodes), val_p, np.zeros(nd)])
    A_bc, rhs = fem.eliminate(A, mask, values, load)
    return A_bc, rhs, (vel, pre, dp)


def solve_monolithic(case):
    A, rhs, (vel, pre, dp) = assemble_monolithic(case)
    x = spla.spsolve(sp.csc_matrix(A), rhs)
    if not np.all(np.isfinite(x)):
        raise np.linalg.LinAlgError("monolithic system is singular")
    nv = vel.n_dofs
    ns = nv + pre.n_nodes
    return MonolithicSolution(
        fem.FieldSolution("v_ff", x[:nv], vel),
        fem.FieldSolution("p_ff", x[nv:ns], pre),
        fem.FieldSolution("p_pm", x[ns : ns + dp.n_nodes], dp),
        A,
    )


def relative_difference(a, b):
    """``||a - b|| / ||b||`` in L2 for two fields on the same dofmap."""
    diff = fem.FieldSolution("diff", a.values - b.values, b.dofmap)
    return fem.l2_norm(diff) / fem.l2_norm(b)
