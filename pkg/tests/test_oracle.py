import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giantssh.coupling import EQUIVALENCE_TABLE, SingleConfig, TwoAtomConfig
from giantssh.errors import IllConditioned, OutOfBand, SolveFailure
from giantssh.lattice import Band, LatticeParams
from giantssh.oracle import OracleSettings, build_system, scatter_oracle, solve
from giantssh.runner.fixtures import DELTA_158, DELTA_ABAB_CT
from giantssh.single_atom import Mode, scatter_single
from giantssh.two_atom import scatter_two

from helpers import two

GE_158 = 2.108185e-4


class TestFreeChain:
    @pytest.mark.parametrize("band", [Band.UPPER, Band.LOWER])
    def test_no_scatterer(self, band):
        p = LatticeParams(delta=0.5, band=band)
        sol = scatter_oracle(None, p.sign * 1.5, 0.0, p, OracleSettings(cells=400))
        assert abs(sol.r) < 1e-12
        assert abs(sol.t - 1) < 1e-12

    def test_residual_contract(self, trivial):
        sol = scatter_oracle(SingleConfig.from_label("AB", 3), 1.4, 1e-4, trivial)
        assert sol.residual < 1e-10
        assert sol.flux_error < 1e-8


class TestAgainstClosedForms:
    # Exactly on resonance a fully decoupled atom is a bound state in the
    # continuum and the chain equations are singular, so probe around it.
    NEAR = np.array([-0.5, -0.1, -1e-3, 1e-3, 0.1, 0.5]) * GE_158

    def test_aa_d2_transparent(self, trivial):
        cfg = SingleConfig.from_label("AA", 2)
        for x in self.NEAR:
            assert abs(scatter_oracle(cfg, DELTA_158, x, trivial).r) < 1e-6

    def test_abab_complete_transmission(self, topological):
        for x in self.NEAR:
            assert abs(scatter_oracle(two("ABAB"), DELTA_ABAB_CT, x, topological).r) < 1e-6

    def test_bound_state_in_continuum_is_flagged(self, trivial):
        with pytest.raises(IllConditioned):
            scatter_oracle(SingleConfig.from_label("AA", 2), DELTA_158, 0.0, trivial)

    def test_ab_d1_grid(self, trivial):
        cfg = SingleConfig.from_label("AB", 1)
        worst = 0.0
        for x in np.linspace(-8, 8, 21) * GE_158:
            sol = scatter_oracle(cfg, DELTA_158, x, trivial)
            ref = scatter_single(cfg, DELTA_158, x, trivial, Mode.EXACT).R
            worst = max(worst, abs(sol.R - ref))
        assert worst < 1e-6

    @settings(max_examples=25)
    @given(st.sampled_from(["AA", "AB", "BA", "BB"]), st.integers(1, 6), st.floats(0.2, 0.7),
           st.sampled_from([1, -1]), st.floats(0.05, 0.95), st.floats(-8, 8), st.sampled_from(list(Band)))
    def test_single_amplitudes(self, label, d, mag, sgn, f, x, band):
        p = LatticeParams(delta=sgn * mag, band=band)
        lo = 2 * mag
        D = p.sign * (lo + 0.05 + (2 - lo - 0.1) * f)
        cfg = SingleConfig.from_label(label, d)
        ref = scatter_single(cfg, D, 0.0, p, Mode.EXACT)
        sol = scatter_oracle(cfg, D, 0.0, p, OracleSettings(cells=400))
        assert abs(sol.r - ref.r) < 1e-6 and abs(sol.t - ref.t) < 1e-6
        dk = x * 2e-4
        ref = scatter_single(cfg, D, dk, p, Mode.EXACT)
        sol = scatter_oracle(cfg, D, dk, p, OracleSettings(cells=400))
        assert abs(sol.r.real - ref.r.real) < 1e-6 and abs(sol.r.imag - ref.r.imag) < 1e-6
        assert abs(sol.t.real - ref.t.real) < 1e-6 and abs(sol.t.imag - ref.t.imag) < 1e-6

    @settings(max_examples=25)
    @given(st.sampled_from(sorted(EQUIVALENCE_TABLE)), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6),
           st.floats(0.2, 0.7), st.sampled_from([1, -1]), st.floats(0.05, 0.95), st.floats(-8, 8))
    def test_two_atom_amplitudes(self, label, d1, d2, d21, mag, sgn, f, x):
        p = LatticeParams(delta=sgn * mag)
        lo = 2 * mag
        D = lo + 0.05 + (2 - lo - 0.1) * f
        cfg = TwoAtomConfig.from_label(label, d1, d2, d21)
        dk = x * 2e-4
        ref = scatter_two(cfg, D, dk, p, Mode.EXACT)
        sol = scatter_oracle(cfg, D, dk, p, OracleSettings(cells=600))
        assert abs(sol.r - ref.r) < 1e-6 and abs(sol.t - ref.t) < 1e-6
        assert sol.flux_error < 1e-8


class TestStructure:
    def test_doubling_chain(self, trivial):
        cfg = two("ABBA")
        a = scatter_oracle(cfg, 1.45, 1e-4, trivial, OracleSettings(cells=600))
        b = scatter_oracle(cfg, 1.45, 1e-4, trivial, OracleSettings(cells=1200))
        assert abs(abs(a.r) - abs(b.r)) < 1e-8

    @pytest.mark.parametrize("label", ["AAAB", "ABAB", "AABB"])
    def test_plane_waves_between_legs(self, trivial, label):
        sol = scatter_oracle(TwoAtomConfig.from_label(label, 4, 5, 6), 1.3, 2e-4, trivial)
        assert sol.plane_wave_residual() < 1e-6

    def test_atom_amplitudes_per_atom(self, trivial):
        assert scatter_oracle(two("ABBA"), 1.5, 0.0, trivial).atom_amplitudes.shape == (2,)
        assert scatter_oracle(SingleConfig.from_label("AB", 2), 1.5, 0.0, trivial).atom_amplitudes.shape == (1,)

    def test_default_length(self, trivial):
        system = build_system(two("AAAA", 3), 1.5, 0.0, trivial)
        assert system.cells == 2 * 150 + 9 + 100

    def test_lower_band(self):
        p = LatticeParams(delta=-0.4, band=Band.LOWER)
        cfg = two("ABAB", 3)
        sol = scatter_oracle(cfg, -1.5, 1e-4, p)
        assert abs(sol.R - scatter_two(cfg, -1.5, 1e-4, p, Mode.EXACT).R) < 1e-8


class TestErrors:
    def test_gap_energy(self, trivial):
        with pytest.raises(OutOfBand):
            scatter_oracle(SingleConfig.from_label("AA", 1), 0.5, 0.0, trivial)

    @pytest.mark.parametrize("kw", [{"lead_margin": 99}, {"solver_tol": 0.0}])
    def test_settings(self, kw):
        with pytest.raises(ValueError):
            OracleSettings(**kw)

    def test_chain_too_short(self, trivial):
        with pytest.raises(ValueError, match="minimum"):
            scatter_oracle(two("AAAA"), 1.5, 0.0, trivial, OracleSettings(cells=300))

    def test_solve_failure_reports_residual(self, trivial):
        s = OracleSettings(solver_tol=1e-30)
        system = build_system(SingleConfig.from_label("AA", 1), 1.5, 0.0, trivial, s)
        with pytest.raises(SolveFailure):
            solve(system, s)

    def test_unknown_configuration_type(self, trivial):
        with pytest.raises(TypeError):
            scatter_oracle("AA", 1.5, 0.0, trivial)
