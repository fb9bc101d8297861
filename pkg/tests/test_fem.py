import numpy as np
import pytest

from sdschwarz import PhysicalParams, RobinParams, build_dofmap, build_mesh
from sdschwarz import fem
from sdschwarz.cases import test1


def test_element_matrices_integrate_polynomials():
    hx, hy = 0.3, 0.2
    em = fem.element_matrices(hx, hy)
    one = np.ones(9)
    xi = np.array([0, 0.5, 1] * 3) * hx  # nodal x coordinate of each local node
    assert one @ em.mass @ one == pytest.approx(hx * hy)
    assert np.allclose(em.stiffness_x @ one, 0) and np.allclose(em.stiffness_y @ one, 0)
    assert xi @ em.stiffness_x @ xi == pytest.approx(hx * hy)  # int (dx x)^2
    assert one @ em.grad_x @ xi == pytest.approx(hx * hy)
    assert np.ones(4) @ em.div_x @ xi == pytest.approx(hx * hy)
    assert np.allclose(em.mass, em.mass.T)
    assert np.all(np.linalg.eigvalsh(em.mass) > 0)


def test_interface_mass_closed_form():
    h = 0.1
    ref = h / 30 * np.array([[4, 2, -1], [2, 16, 2], [-1, 2, 4]])
    assert np.allclose(fem.interface_mass_local(h), ref)
    mesh = build_mesh((0, 0), (1.5, 1), 6, 2, "top")
    M = fem.assemble_interface_mass(mesh)
    assert M.sum() == pytest.approx(1.5)
    assert np.allclose(M.toarray(), M.toarray().T)
    assert np.all(np.linalg.eigvalsh(M.toarray()) > 0)


def test_load_vectors_of_constants():
    mesh = build_mesh((0, 0), (2, 1), 4, 3, "top")
    dm = build_dofmap(mesh, "q2_scalar")
    assert fem.load_vector(dm, lambda x, y: 3.0 + 0 * x).sum() == pytest.approx(6.0)
    assert fem.interface_load(mesh, lambda x, y: 2.0 + 0 * x).sum() == pytest.approx(4.0)


def test_l2_error_of_interpolated_quadratic_is_zero():
    mesh = build_mesh((0, 0), (1, 1), 3, 3, "top")
    dm = build_dofmap(mesh, "q2_scalar")
    f = lambda x, y: x**2 - 3 * x * y + y**2 + 1
    field = fem.FieldSolution("p", f(dm.coords[:, 0], dm.coords[:, 1]), dm)
    assert fem.l2_error(field, f) < 1e-13
    assert fem.l2_norm(fem.FieldSolution("c", np.ones(dm.n_dofs), dm)) == pytest.approx(1.0)


def test_field_solution_length_check():
    dm = build_dofmap(build_mesh((0, 0), (1, 1), 2, 2, "top"), "q1_scalar")
    with pytest.raises(ValueError):
        fem.FieldSolution("p", np.zeros(3), dm)


def test_gradient_recovery_is_exact_for_quadratics():
    mesh = build_mesh((0, 0.5), (1, 0.5), 4, 2, "bottom")
    dm = build_dofmap(mesh, "q2_scalar")
    x, y = dm.coords.T
    p = fem.FieldSolution("p", x**2 + x * y - 2 * y**2, dm)
    g = fem.recover_pressure_gradient(p)
    assert np.allclose(g.component(0), 2 * x + y, atol=1e-12)
    assert np.allclose(g.component(1), x - 4 * y, atol=1e-12)


def test_segments_and_coverage():
    mesh = build_mesh((0, 0), (1, 0.5), 4, 2, "bottom")
    vel = build_dofmap(mesh, "q2_vector")
    zero = lambda x, y: (0 * x, 0 * x)
    with pytest.raises(ValueError, match="interface side"):
        fem.check_coverage(vel, [fem.Segment("bottom", "dirichlet", zero)])
    with pytest.raises(ValueError, match="no boundary condition"):
        fem.check_coverage(vel, [fem.Segment("top", "dirichlet", zero)])
    with pytest.raises(ValueError):
        fem.Segment("top", "dirichlet")
    with pytest.raises(ValueError):
        fem.Segment("middle", "natural")
    part = fem.Segment("right", "dirichlet", zero, components=(0,), span=(0.0, 0.25))
    mask, _ = fem.dirichlet_data(vel, [part])
    nodes = vel.side_nodes["right"]
    assert mask[nodes].tolist() == [True, True, True, False, False]
    assert not mask[vel.component_dofs(nodes, 1)].any()


def _quadratic_stokes_case():
    """v = (x^2, -2xy), p = x + y on [0,1]x[0,0.5], interface on top."""
    v = lambda x, y: (x**2, -2 * x * y)
    p = lambda x, y: x + y
    f = lambda x, y: (-2.0 + 1.0 + 0 * x, 1.0 + 0 * x)
    return v, p, f


def test_stokes_subproblem_reproduces_polynomial_solution():
    v, p, f = _quadratic_stokes_case()
    mesh = build_mesh((0, 0), (1, 0.5), 4, 2, "top")
    params = PhysicalParams.isotropic(1e-2, 0.1, 0.3, 0.0)
    robin = RobinParams(3.0, 2.0)
    bcs = [fem.Segment(s, "dirichlet", v) for s in ("left", "right", "bottom")]
    st = fem.assemble_stokes(mesh, params, robin, fem.SourceFields(f_ff=f), bcs)
    # on y = 0.5, n = (0, 1): d_n v = (0, -2x)
    lam_pm = fem.interface_load(mesh, lambda x, y: p(x, y) + 2 * x - robin.alpha_ff * v(x, y)[1])
    lam_g = fem.interface_load(mesh, lambda x, y: 0 * x + params.slip_coefficient * v(x, y)[0])
    x = st.solve(st.interface_rhs(lam_g, lam_pm))
    vh, ph = st.split(x)
    assert fem.l2_error(vh, v) < 1e-10
    assert fem.l2_error(ph, p) < 1e-10


def test_darcy_subproblem_reproduces_polynomial_solution():
    p = lambda x, y: x**2 - x * y + 2 * y
    kappa = 0.5
    f = lambda x, y: -kappa * (2.0 + 0 * x)
    mesh = build_mesh((0, -0.5), (1, 0.5), 3, 3, "top")
    params = PhysicalParams.isotropic(kappa, 0.1, 0.3, 0.0)
    robin = RobinParams(1.0, 4.0)
    bcs = [fem.Segment(s, "dirichlet", p) for s in ("left", "right", "bottom")]
    dc = fem.assemble_darcy(mesh, params, robin, fem.SourceFields(f_pm=f), bcs)
    # outward normal of the porous block on y = 0 is (0, 1): K dp/dy = kappa (2 - x)
    lam = fem.interface_load(mesh, lambda x, y: p(x, y) + robin.alpha_pm * kappa * (2 - x))
    ph = fem.FieldSolution("p", dc.solve(dc.interface_rhs(lam)), dc.pressure)
    assert fem.l2_error(ph, p) < 1e-10


def test_generalized_momentum_term_rejected():
    mesh = build_mesh((0, 0), (1, 1), 2, 2, "top")
    bad = object.__new__(PhysicalParams)
    object.__setattr__(bad, "nsbl", 1.0)
    with pytest.raises(ValueError, match="not supported"):
        fem.assemble_stokes(mesh, bad, RobinParams(1, 1), None, [])


def test_interface_functionals_need_gradient():
    c = test1(h=0.25)
    dm = build_dofmap(c.pm_mesh, "q2_scalar")
    with pytest.raises(ValueError):
        fem.assemble_interface_functionals(fem.FieldSolution("p", np.zeros(dm.n_dofs), dm), None,
                                           c.params, RobinParams(1, 1))


def _functional_errors(h):
    c = test1(h=h)
    dm = build_dofmap(c.pm_mesh, "q2_scalar")
    ex = c.exact
    p = fem.FieldSolution("p", ex.p_pm(dm.coords[:, 0], dm.coords[:, 1]), dm)
    robin = RobinParams(100.0, 50.0)
    lg, lp = fem.assemble_interface_functionals(p, fem.recover_pressure_gradient(p), c.params, robin)
    coef = c.params.tangential_gradient_coefficient
    n_y = c.ff_mesh.normal_sign
    eg = fem.interface_load(c.pm_mesh, lambda x, y: -coef * ex.grad_p_pm(x, y)[0])
    ep = fem.interface_load(
        c.pm_mesh,
        lambda x, y: robin.alpha_ff * c.params.kappa22 * n_y * ex.grad_p_pm(x, y)[1] + ex.p_pm(x, y),
    )
    return np.abs(lg - eg).max(), np.abs(lp - ep).max()


def test_interface_functionals_of_exact_pressure_converge_at_third_order():
    e4 = _functional_errors(2.0**-4)
    e5 = _functional_errors(2.0**-5)
    for a, b in zip(e4, e5):
        assert np.log2(a / b) > 2.8
