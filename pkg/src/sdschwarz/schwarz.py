"""Robin-Robin domain decomposition for the coupled Stokes-Darcy problem.

The interface unknowns are tested functionals on the interface trace
space, stored left to right:

* ``lambda_ff``: Darcy-side Robin data, tested with the Darcy pressure basis;
* ``lambda_pm``: Stokes-side Robin data, tested with ``u.n``;
* ``lambda_gamma``: slip-condition data, tested with ``u.tau``;
* ``eta_pm = (-lambda_gamma, lambda_pm)``.

One Robin-Robin sweep (Stokes solve, ``lambda_ff`` update, Darcy solve,
``eta_pm`` update) is one block Gauss-Seidel step on the interface system

    [ I      S_ff ] [lambda_ff]   [b_ff     ]
    [ S~_pm  I    ] [eta_pm   ] = [b~_pm    ]

which is also solved matrix-free with GMRES.

Entries of the interface vectors at strongly constrained nodes carry no
information (their test functions are not in the test space) and are
kept at zero. Where only one side is constrained (e.g. a Darcy Dirichlet
corner next to a free Stokes normal velocity) the other side drops its
Robin term in that row and takes plain data: the normal stress
``M p`` on the Stokes side, the flux ``alpha_pm M v.n`` on the Darcy side.
"""

from dataclasses import dataclass, field
import time

import numpy as np
import scipy.sparse.linalg as spla

from . import fem
from .linalg import ConvergenceError, gmres


@dataclass
class InterfaceState:
    lambda_ff: np.ndarray
    lambda_pm: np.ndarray
    lambda_gamma: np.ndarray

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))

    @classmethod
    def from_vector(cls, x):
        """Build from the stacked GMRES unknown ``(lambda_ff, eta_pm)``."""
        n = x.shape[0] // 3
        return cls(x[:n].copy(), x[2 * n :].copy(), -x[n : 2 * n])

    @property
    def eta_pm(self):
        return np.concatenate([-self.lambda_gamma, self.lambda_pm])

    def as_vector(self):
        return np.concatenate([self.lambda_ff, self.eta_pm])


@dataclass
class IterationLog:
    records: list = field(default_factory=list)

    def add(self, iteration, residual, seconds):
        if self.records and iteration <= self.records[-1][0]:
            raise ValueError("iteration indices must increase")
        self.records.append((int(iteration), float(residual), float(seconds)))

    @property
    def iterations(self):
        return self.records[-1][0] if self.records else 0

    @property
    def residuals(self):
        return [r[1] for r in self.records]

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("iteration,residual,seconds\n")
            for it, res, sec in self.records:
                fh.write(f"{it},{res:.16e},{sec:.6f}\n")


@dataclass
class DDResult:
    state: InterfaceState
    v_ff: fem.FieldSolution
    p_ff: fem.FieldSolution
    p_pm: fem.FieldSolution
    log: IterationLog
    mode: str

    @property
    def iterations(self):
        return self.log.iterations

    @property
    def final_residual(self):
        return self.log.records[-1][1] if self.log.records else 0.0


class RobinRobinSolver:
    """Subdomain systems plus the interface operators built on them.

    Parameters
    ----------
    stokes : fem.StokesSystem
    darcy : fem.DarcySystem
    params : PhysicalParams
    robin : RobinParams
        Must be the weights the two systems were assembled with.
    """

    def __init__(self, stokes, darcy, params, robin):
        xs = stokes.mesh.interface_x()
        xp = darcy.mesh.interface_x()
        if xs.shape != xp.shape or not np.array_equal(xs, xp):
            raise ValueError("subdomain meshes are not conforming on the interface")
        if stokes.mesh.interface_y != darcy.mesh.interface_y:
            raise ValueError("subdomain interfaces do not coincide")
        if stokes.normal_sign == darcy.mesh.normal_sign:
            raise ValueError("subdomains must lie on opposite sides of the interface")
        fs, fd = stokes.normal_free, darcy.interface_free
        both = fs & fd
        for name, sys_ in (("Stokes", stokes), ("Darcy", darcy)):
            rows = sys_.robin_rows
            if rows is not None and not np.array_equal(rows, both):
                raise ValueError(
                    f"{name} system carries Robin terms on constrained interface nodes; "
                    "assemble it with robin_rows = both sides free (see build_solver)"
                )
        self.stokes = stokes
        self.darcy = darcy
        self.params = params
        self.robin = robin
        self.M = fem.assemble_interface_mass(stokes.mesh)
        self.recovery = fem.GradientRecovery(darcy.pressure)
        self.n = xs.shape[0]
        self.both = both.astype(float)
        self.stokes_only = (fs & ~fd).astype(float)
        self.darcy_only = (~fs & fd).astype(float)
        self.tangential_free = stokes.tangential_free.astype(float)
        self._b = None

    # -- the four algorithm steps -------------------------------------------

    def stokes_step(self, state, homogeneous=False):
        rhs = self.stokes.interface_rhs(state.lambda_gamma, state.lambda_pm)
        return self.stokes.solve(rhs, homogeneous=homogeneous)

    def update_lambda_ff(self, lambda_pm, v_trace):
        a = self.robin.alpha_ff + self.robin.alpha_pm
        mv = self.M @ v_trace
        return self.both * (lambda_pm + a * mv) + self.darcy_only * (self.robin.alpha_pm * mv)

    def darcy_step(self, lambda_ff, homogeneous=False):
        return self.darcy.solve(self.darcy.interface_rhs(lambda_ff), homogeneous=homogeneous)

    def tangential_functional(self, p):
        gx = self.recovery.dx(p)[self.darcy.interface_dofs]
        return -self.tangential_free * (
            self.params.tangential_gradient_coefficient * (self.M @ gx)
        )

    def update_eta_pm(self, p, lambda_ff):
        """Return ``(lambda_gamma, lambda_pm)`` from the new Darcy pressure."""
        r = self.robin.alpha_ff / self.robin.alpha_pm
        mp = self.M @ p[self.darcy.interface_dofs]
        lambda_pm = self.both * (-r * lambda_ff + (r + 1.0) * mp) + self.stokes_only * mp
        return self.tangential_functional(p), lambda_pm

    def sweep(self, state):
        """One Robin-Robin iteration; returns ``(new_state, x_ff, p_pm)``."""
        x_ff = self.stokes_step(state)
        lambda_ff = self.update_lambda_ff(state.lambda_pm, self.stokes.normal_trace(x_ff))
        p = self.darcy_step(lambda_ff)
        lambda_gamma, lambda_pm = self.update_eta_pm(p, lambda_ff)
        return InterfaceState(lambda_ff, lambda_pm, lambda_gamma), x_ff, p

    # -- interface operators ------------------------------------------------

    def apply_S_ff(self, eta):
        """Linear part of the Stokes half-step: ``lambda_ff = -S_ff eta + b_ff``."""
        n = self.n
        st = InterfaceState(np.zeros(n), eta[n:], -eta[:n])
        x = self.stokes_step(st, homogeneous=True)
        return -self.update_lambda_ff(st.lambda_pm, self.stokes.normal_trace(x))

    def apply_S_pm_tilde(self, lambda_ff):
        """Linear part of the Darcy half-step: ``eta_pm = -S~_pm lambda_ff + b~_pm``."""
        p = self.darcy_step(lambda_ff, homogeneous=True)
        lambda_gamma, lambda_pm = self.update_eta_pm(p, lambda_ff)
        return np.concatenate([lambda_gamma, -lambda_pm])

    def rhs(self):
        """``(b_ff, b~_pm)`` from one Stokes and one Darcy solve with zero
        interface data."""
        if self._b is None:
            n = self.n
            x = self.stokes_step(InterfaceState.zeros(n))
            b_ff = self.update_lambda_ff(np.zeros(n), self.stokes.normal_trace(x))
            p = self.darcy_step(np.zeros(n))
            lg, lp = self.update_eta_pm(p, np.zeros(n))
            self._b = np.concatenate([b_ff, -lg, lp])
        return self._b

    def operator(self):
        n = self.n

        def matvec(x):
            x = np.ravel(x)
            lam, eta = x[:n], x[n:]
            return np.concatenate([lam + self.apply_S_ff(eta), eta + self.apply_S_pm_tilde(lam)])

        return spla.LinearOperator((3 * n, 3 * n), matvec=matvec, dtype=float)

    # -- fields ---------------------------------------------------------------

    def reconstruct(self, state):
        x_ff = self.stokes_step(state)
        p = self.darcy_step(state.lambda_ff)
        return x_ff, p

    def _result(self, state, x_ff, p, log, mode):
        v, pf = self.stokes.split(x_ff)
        pp = fem.FieldSolution("p_pm", p, self.darcy.pressure)
        return DDResult(state, v, pf, pp, log, mode)

    @property
    def n_solves(self):
        return self.stokes.factor.n_solves, self.darcy.factor.n_solves

    # -- drivers ------------------------------------------------------------

    def gauss_seidel_solve(self, initial=None, tol=1e-9, max_iter=500):
        """Iterate Robin-Robin sweeps until the relative ``eta_pm`` increment
        drops below ``tol``."""
        state = InterfaceState.zeros(self.n) if initial is None else initial
        log = IterationLog()
        t0 = time.perf_counter()
        for m in range(1, max_iter + 1):
            new, x_ff, p = self.sweep(state)
            d = np.linalg.norm(new.eta_pm - state.eta_pm)
            scale = np.linalg.norm(new.eta_pm)
            inc = d / scale if scale > 0 else (0.0 if d == 0 else np.inf)
            log.add(m, inc, time.perf_counter() - t0)
            state = new
            if inc <= tol:
                return self._result(state, x_ff, p, log, "gauss_seidel")
        raise ConvergenceError(
            f"Robin-Robin iteration did not converge in {max_iter} sweeps "
            f"(last increment {inc:.3e})",
            x=self._result(state, x_ff, p, log, "gauss_seidel"),
            history=log,
        )

    def gmres_interface_solve(self, tol=1e-9, max_iter=500):
        """Solve the interface system with unrestarted GMRES from zero."""
        b = self.rhs()
        log = IterationLog()
        t0 = time.perf_counter()
        try:
            x, history = gmres(self.operator(), b, tol=tol, max_iter=min(max_iter, b.size))
        except ConvergenceError as err:
            for i, r in enumerate(err.history, 1):
                log.add(i, r, time.perf_counter() - t0)
            state = InterfaceState.from_vector(err.x)
            err.x = self._result(state, *self.reconstruct(state), log, "gmres")
            err.history = log
            raise
        elapsed = time.perf_counter() - t0
        for i, r in enumerate(history, 1):
            log.add(i, r, elapsed)
        state = InterfaceState.from_vector(x)
        return self._result(state, *self.reconstruct(state), log, "gmres")


def darcy_velocity(p_pm, params, recovery=None):
    """Seepage velocity ``-K grad p`` from the recovered gradient."""
    g = fem.recover_pressure_gradient(p_pm, recovery)
    n = g.dofmap.n_nodes
    vals = np.concatenate([-params.kappa11 * g.values[:n], -params.kappa22 * g.values[n:]])
    return fem.FieldSolution("v_pm", vals, g.dofmap)


def build_solver(case, robin):
    """Assemble and factorize both subproblems of a test case."""
    both = fem.interface_free(case.ff_mesh, case.ff_bcs, "q2_vector", 1) & fem.interface_free(
        case.pm_mesh, case.pm_bcs, "q2_scalar"
    )
    stokes = fem.assemble_stokes(
        case.ff_mesh, case.params, robin, case.sources, case.ff_bcs, robin_rows=both
    )
    darcy = fem.assemble_darcy(
        case.pm_mesh, case.params, robin, case.sources, case.pm_bcs, robin_rows=both
    )
    return RobinRobinSolver(stokes, darcy, case.params, robin)
