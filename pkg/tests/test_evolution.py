import cmath

import numpy as np
import pytest
import scipy.linalg

from sepsym.errors import StepMismatch, ZeroAmplitude
from sepsym.evolution import (
    EvolutionConfig,
    evolve,
    extract_indices,
    index_ode_solve,
    scaling_test,
    separation_test,
)
from sepsym.hierarchy import Generator, Hierarchy
from sepsym.mixedpow import IndexPair, matrix_rep, mixed_power
from sepsym.opcalc import op_combine
from sepsym.operators import (
    cross_ratio_op,
    lambda_op,
    log_modulus_op,
    nonseparating_op,
    rms_log_modulus_op,
    site_matrix_op,
    zero_op,
)
from sepsym.scenario import random_hermitian
from sepsym.space import WaveFunction, random_state


def nz(n, space, rng):
    return random_state(n, space, rng, nowhere_zero=True)


class TestEvolve:
    def test_zero_operator_keeps_state(self, space4, rng):
        phi = random_state(2, space4, rng)
        cfg = EvolutionConfig(dt=0.01, t0=0.0, t1=0.2)
        out = evolve(zero_op(space4, 2), phi, cfg)
        assert np.array_equal(out.data, phi.data)

    def test_linear_matches_expm_oracle(self, space4, rng):
        A = random_hermitian(space4, rng)
        F = site_matrix_op(space4, A)
        phi = random_state(1, space4, rng)
        errs = []
        for dt in (0.02, 0.01):
            cfg = EvolutionConfig(dt=dt, t0=0.0, t1=1.0)
            out = evolve(F, phi, cfg)
            oracle = scipy.linalg.expm(-1j * A) @ phi.data
            errs.append(np.abs(out.data - oracle).max())
            # Hermitian drive conserves the 2-norm up to the same order
            assert abs(np.linalg.norm(out.data) - np.linalg.norm(phi.data)) <= 10 * errs[-1] + 1e-12
        assert errs[0] <= 1e-6
        assert 12.0 <= errs[0] / errs[1] <= 20.0

    def test_lambda_unit_modulus_phase_rotation(self, space4, rng):
        # i hbar dw/dt = p w ln w with |w| = 1: ln w(t) = i theta e^{-ipt}
        p = 1.2
        F = lambda_op(IndexPair(p, p), 1, space4)
        theta = rng.uniform(-2.0, 2.0, 4)
        phi = WaveFunction(1, space4, np.exp(1j * theta))
        cfg = EvolutionConfig(dt=0.001, t0=0.0, t1=1.0)
        out = evolve(F, phi, cfg)
        oracle = np.exp(1j * theta * cmath.exp(-1j * p))
        assert np.abs(out.data - oracle).max() <= 1e-10

    def test_lambda_general_pointwise_oracle(self, space4, rng):
        # d(ln w)/dt is the real-linear action of -i(p,q)/hbar on ln w
        idx = IndexPair(0.8 + 0.3j, 0.5 - 0.2j)
        hbar = 1.7
        F = lambda_op(idx, 1, space4)
        phi = nz(1, space4, rng)
        cfg = EvolutionConfig(dt=0.0005, t0=0.0, t1=0.5, hbar=hbar)
        out = evolve(F, phi, cfg)
        rot = np.array([[0.0, 1.0], [-1.0, 0.0]])  # multiplication by -i
        M = rot @ matrix_rep(idx) / hbar
        flow = scipy.linalg.expm(0.5 * M)
        ln0 = np.log(phi.data)
        comps = np.stack([ln0.real, ln0.imag])
        ln1 = flow @ comps
        oracle = np.exp(ln1[0] + 1j * ln1[1])
        assert np.abs(out.data - oracle).max() <= 1e-9

    def test_zero_crossing_aborts(self, space4):
        # imaginary first index drains the modulus towards the floor
        F = lambda_op(IndexPair(5j, 0), 1, space4)
        phi = WaveFunction(1, space4, np.full(4, 0.3 + 0j))
        cfg = EvolutionConfig(dt=0.01, t0=0.0, t1=2.0)
        with pytest.raises(ZeroAmplitude):
            evolve(F, phi, cfg)

    def test_step_mismatch(self):
        with pytest.raises(StepMismatch):
            EvolutionConfig(dt=0.3, t0=0.0, t1=1.0)
        with pytest.raises(StepMismatch):
            EvolutionConfig(dt=0.1, t0=1.0, t1=0.5)


class TestSeparation:
    def hierarchy(self, space):
        gens = [
            Generator(op=log_modulus_op(space, 1.0), ell=1, indices=IndexPair(1.0, 0)),
            Generator(op=cross_ratio_op(space, coupling=0.25), ell=2, indices=IndexPair(0, 0)),
        ]
        return Hierarchy.from_generators(space, gens, 3)

    def test_fourth_order_decay(self, space3, rng):
        H = self.hierarchy(space3)
        pairs = [(nz(1, space3, rng), nz(2, space3, rng)) for _ in range(3)]
        res = []
        for dt in (0.02, 0.01):
            cfg = EvolutionConfig(dt=dt, t0=0.0, t1=0.5)
            res.append(sum(separation_test(H, p1, p2, cfg) for p1, p2 in pairs))
        assert res[0] <= 1e-6
        assert 10.0 <= res[0] / res[1] <= 22.0

    def test_linear_hierarchy_separates(self, space3, rng):
        A = random_hermitian(space3, rng)
        g = Generator(op=site_matrix_op(space3, A), ell=1, indices=IndexPair(0, 0))
        H = Hierarchy.from_generators(space3, [g], 3)
        phi1, phi2 = nz(1, space3, rng), nz(2, space3, rng)
        res = [
            separation_test(H, phi1, phi2, EvolutionConfig(dt=dt, t0=0.0, t1=0.5))
            for dt in (0.02, 0.01)
        ]
        assert res[0] <= 1e-5  # pure time-discretisation error
        assert 12.0 <= res[0] / res[1] <= 20.0

    def test_non_separating_plateau(self, space3, rng):
        H = self.hierarchy(space3)
        ops = list(H.ops)
        ops[1] = op_combine([ops[1], nonseparating_op(space3, 2, 0.5)])
        bad = Hierarchy(space=space3, n_max=3, ops=tuple(ops))
        phi1, phi2 = nz(1, space3, rng), nz(2, space3, rng)
        r1 = separation_test(bad, phi1, phi2, EvolutionConfig(dt=0.02, t0=0.0, t1=0.5))
        r2 = separation_test(bad, phi1, phi2, EvolutionConfig(dt=0.01, t0=0.0, t1=0.5))
        assert r1 > 1e-2 and r2 > 1e-2
        assert abs(r1 - r2) / r1 < 0.01  # dt-independent limit


class TestIndexOde:
    def test_zero_indices_stay_one(self):
        cfg = EvolutionConfig(dt=0.01, t0=0.0, t1=1.0)
        traj = index_ode_solve(0.0, 0.0, 0.0, 1.0, cfg)
        assert np.abs(traj.a - 1.0).max() == 0.0
        assert np.abs(traj.b - 1.0).max() == 0.0

    def test_constant_real_closed_form(self):
        p = 1.3
        cfg = EvolutionConfig(dt=0.01, t0=0.0, t1=1.0)
        traj = index_ode_solve(p, p, 0.0, 1.0, cfg)
        assert abs(complex(traj.a[-1]) - cmath.exp(-1.3j)) <= 1e-8
        assert abs(complex(traj.b[-1]) - cmath.exp(-1.3j)) <= 1e-8

    def test_matrix_exponential_oracle(self):
        # the real 2x2 system d[Re a, Im a]/dt = rot . rep(p, q) / hbar
        p, q = 1.1, 0.4
        hbar = 1.3
        cfg = EvolutionConfig(dt=0.002, t0=0.0, t1=1.0, hbar=hbar)
        traj = index_ode_solve(p, q, 0.0, 1.0, cfg)
        rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
        Ma = rot @ matrix_rep(IndexPair(p, q)) / hbar
        va = scipy.linalg.expm(Ma) @ np.array([1.0, 0.0])
        assert abs(complex(traj.a[-1]) - complex(va[0], va[1])) <= 1e-10
        Mb = rot @ matrix_rep(IndexPair(q, p)) / hbar
        vb = scipy.linalg.expm(Mb) @ np.array([1.0, 0.0])
        assert abs(complex(traj.b[-1]) - complex(vb[0], vb[1])) <= 1e-10

    def test_extraction_second_order(self):
        p, q = 1.3, 0.6
        errs = []
        for dt in (0.02, 0.01):
            cfg = EvolutionConfig(dt=dt, t0=0.0, t1=1.0)
            est = extract_indices(index_ode_solve(p, q, 0.0, 1.0, cfg))
            errs.append(max(abs(est.a - p), abs(est.b - q)))
        assert errs[1] <= 1.0 * 0.01**2
        assert 3.0 <= errs[0] / errs[1] <= 5.0

    def test_time_dependent_indices(self):
        # p(t) = c t: i hbar a' = c t a  =>  a(1) = exp(-i c / (2 hbar))
        c = 0.9
        cfg = EvolutionConfig(dt=0.001, t0=0.0, t1=1.0)
        traj = index_ode_solve(lambda t: c * t, lambda t: c * t, 0.0, 1.0, cfg)
        assert abs(complex(traj.a[-1]) - cmath.exp(-1j * c / 2)) <= 1e-10


class TestScaling:
    def test_strictly_homogeneous_exact(self, space4, rng):
        F = rms_log_modulus_op(space4, 0.8)
        phi = nz(1, space4, rng)
        cfg = EvolutionConfig(dt=0.01, t0=0.0, t1=0.5)
        assert scaling_test(F, phi, 0.7 - 0.4j, cfg) <= 1e-12

    def test_lambda_fourth_order(self, space4, rng):
        F = lambda_op(IndexPair(1.3, 1.3), 1, space4)
        phi = nz(1, space4, rng)
        res = [
            scaling_test(F, phi, 1.4 + 0.3j, EvolutionConfig(dt=dt, t0=0.0, t1=1.0))
            for dt in (0.02, 0.01)
        ]
        assert 12.0 <= res[0] / res[1] <= 20.0

    def test_scale_factor_matches_closed_form(self, space4, rng):
        # for p = q real the factor is the plain power k^(e^{-ip t}-weighted pair)
        p = 1.3
        k = 1.4 + 0.3j
        cfg = EvolutionConfig(dt=0.005, t0=0.0, t1=1.0)
        traj = index_ode_solve(p, p, 0.0, 1.0, cfg)
        factor = mixed_power(k, traj.final())
        closed = mixed_power(k, IndexPair(cmath.exp(-1.3j), cmath.exp(-1.3j)))
        assert abs(factor - closed) <= 1e-8

    def test_requires_declared_indices(self, space4, rng):
        F = cross_ratio_op(space4)
        from dataclasses import replace

        F = replace(F, indices=None)
        with pytest.raises(ValueError):
            scaling_test(F, nz(2, space4, rng), 2.0, EvolutionConfig(dt=0.01, t0=0.0, t1=0.5))
