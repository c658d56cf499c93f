import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from giantssh.errors import BandEdge, GapClosing, OutOfBand
from giantssh.lattice import (
    Band,
    BlochPoint,
    LatticeParams,
    bloch_offdiag,
    dispersion,
    emission_rate,
    group_velocity,
    in_band,
    omega,
    topo_phase,
    wave_vector_from_detuning,
)

ks = st.floats(-np.pi + 1e-3, -1e-3)
deltas = st.floats(-0.95, 0.95).filter(lambda d: abs(d) > 1e-3)


def wrap(x):
    return np.angle(np.exp(1j * np.asarray(x)))


class TestParams:
    def test_hoppings(self):
        p = LatticeParams(J=2.0, delta=0.25)
        assert p.xi1 == pytest.approx(2.5)
        assert p.xi2 == pytest.approx(1.5)
        assert p.gap == pytest.approx(2.0)

    @pytest.mark.parametrize("kw", [{"J": 0.0}, {"J": -1.0}, {"delta": 1.0}, {"delta": -1.2}])
    def test_rejects_bad_values(self, kw):
        with pytest.raises(ValueError):
            LatticeParams(**kw)

    def test_gapless_is_accepted_but_flagged(self):
        p = LatticeParams(delta=0.0)
        assert p.gapless and p.gap == 0.0

    def test_band_accepts_strings(self):
        assert LatticeParams(band="lower").sign == -1

    def test_band_interval(self):
        assert LatticeParams(delta=0.5).band_interval == (1.0, 2.0)
        assert LatticeParams(delta=0.5, band=Band.LOWER).band_interval == (-2.0, -1.0)


class TestDispersion:
    @pytest.mark.parametrize(
        "k, expected", [(0.0, 2.0), (-np.pi, 1.0), (-np.pi / 2, np.sqrt(2.5))]
    )
    def test_reference_points(self, trivial, k, expected):
        assert dispersion(k, trivial) == pytest.approx(expected, abs=1e-14)

    def test_lower_band_is_mirror(self):
        p = LatticeParams(band=Band.LOWER)
        assert dispersion(-1.0, p) == pytest.approx(-omega(-1.0, p))

    @given(ks, deltas)
    def test_blind_to_dimerization_sign(self, k, d):
        assert dispersion(k, LatticeParams(delta=d)) == dispersion(k, LatticeParams(delta=-d))

    @given(ks, deltas)
    def test_equals_modulus_of_offdiag(self, k, d):
        p = LatticeParams(delta=d)
        assert abs(bloch_offdiag(k, p)) == pytest.approx(omega(k, p), rel=1e-13)

    @given(ks, deltas)
    def test_kernel_eigenvalues(self, k, d):
        # Diagonalize the 2x2 Bloch kernel directly.
        p = LatticeParams(delta=d)
        y = bloch_offdiag(k, p)
        h = np.array([[0.0, y], [np.conj(y), 0.0]])
        ev = np.linalg.eigvalsh(h)
        w = omega(k, p)
        assert np.max(np.abs(ev - np.array([-w, w]))) < 1e-12


class TestTopoPhase:
    def test_gapless_quarter_zone(self):
        p = LatticeParams(delta=0.0)
        assert topo_phase(-np.pi / 2, p) == pytest.approx(-3 * np.pi / 4)

    @pytest.mark.parametrize("d", [-0.9, -0.5, 0.1, 0.5, 0.9])
    def test_zone_centre_is_pi(self, d):
        assert topo_phase(0.0, LatticeParams(delta=d)) == pytest.approx(np.pi)

    def test_principal_branch(self):
        ph = topo_phase(np.linspace(-np.pi + 1e-3, np.pi, 501), LatticeParams(delta=0.3))
        assert np.all(ph > -np.pi) and np.all(ph <= np.pi)

    def test_sum_rule_on_grid(self):
        rng = np.random.default_rng(1)
        k = rng.uniform(-np.pi, 0, 1000)
        d = rng.uniform(0.01, 0.95, 1000)
        s = np.array([
            topo_phase(ki, LatticeParams(delta=di)) + topo_phase(ki, LatticeParams(delta=-di)) + ki
            for ki, di in zip(k, d)
        ])
        assert np.max(np.abs(wrap(s))) < 1e-12

    def test_gap_closing(self):
        with pytest.raises(GapClosing):
            topo_phase(-np.pi, LatticeParams(delta=0.0))


class TestGroupVelocity:
    def test_reference_value(self, trivial):
        assert group_velocity(-np.pi / 2, trivial) == pytest.approx(0.75 / np.sqrt(2.5), rel=1e-12)

    @given(st.floats(-np.pi + 0.05, -0.05), deltas)
    def test_matches_finite_difference(self, k, d):
        p = LatticeParams(delta=d)
        h = 1e-6
        fd = (dispersion(k + h, p) - dispersion(k - h, p)) / (2 * h)
        assert group_velocity(k, p) == pytest.approx(fd, rel=1e-6)

    @given(ks, deltas)
    def test_positive_on_upper_band(self, k, d):
        assert group_velocity(k, LatticeParams(delta=d)) > 0

    @given(st.floats(0.01, np.pi - 0.01), deltas)
    def test_positive_on_lower_band_half_zone(self, k, d):
        assert group_velocity(k, LatticeParams(delta=d, band=Band.LOWER)) > 0

    @pytest.mark.parametrize("k", [0.0, -np.pi, -1e-8])
    def test_band_edges(self, trivial, k):
        with pytest.raises(BandEdge):
            group_velocity(k, trivial)

    @given(ks, deltas)
    def test_sign_blind(self, k, d):
        assert group_velocity(k, LatticeParams(delta=d)) == group_velocity(k, LatticeParams(delta=-d))


class TestEmissionRate:
    def test_reference_value(self, trivial):
        assert emission_rate(-np.pi / 2, 0.01, trivial) == pytest.approx(2.108185e-4, rel=1e-6)

    def test_zero_coupling(self, trivial):
        assert emission_rate(-1.0, 0.0, trivial) == 0.0

    def test_negative_coupling_rejected(self, trivial):
        with pytest.raises(ValueError):
            emission_rate(-1.0, -0.1, trivial)

    @given(ks, deltas)
    def test_sign_blind(self, k, d):
        assert emission_rate(k, 0.01, LatticeParams(delta=d)) == emission_rate(k, 0.01, LatticeParams(delta=-d))


class TestInversion:
    def test_quarter_zone(self, trivial, topological):
        for p in (trivial, topological):
            assert wave_vector_from_detuning(np.sqrt(2.5), p) == pytest.approx(-np.pi / 2, abs=1e-12)

    @pytest.mark.parametrize("Delta", [2.0, 1.0, 0.5, 2.5, -1.5])
    def test_outside_band(self, trivial, Delta):
        with pytest.raises(OutOfBand):
            wave_vector_from_detuning(Delta, trivial)

    def test_fixed_point(self, trivial):
        assert dispersion(wave_vector_from_detuning(1.2, trivial), trivial) == pytest.approx(1.2, abs=1e-12)

    @given(st.floats(-np.pi + 1e-3, -1e-3), deltas)
    def test_round_trip(self, k, d):
        p = LatticeParams(delta=d)
        E = dispersion(k, p)
        if in_band(E, p):
            assert wave_vector_from_detuning(E, p) == pytest.approx(k, abs=1e-10)

    @given(st.floats(1e-3, np.pi - 1e-3), deltas)
    def test_round_trip_lower_band(self, k, d):
        p = LatticeParams(delta=d, band=Band.LOWER)
        E = dispersion(k, p)
        if in_band(E, p):
            assert wave_vector_from_detuning(E, p) == pytest.approx(k, abs=1e-10)

    def test_vectorized(self, trivial):
        E = np.linspace(1.1, 1.9, 9)
        k = wave_vector_from_detuning(E, trivial)
        assert k.shape == E.shape
        assert np.all((k > -np.pi) & (k < 0))


class TestBlochPoint:
    @given(ks, deltas)
    def test_bundle_is_consistent(self, k, d):
        p = LatticeParams(delta=d)
        bp = BlochPoint.at(k, p, g=0.02)
        w = np.sqrt(2 * (1 + d * d) + 2 * (1 - d * d) * np.cos(k))
        assert bp.omega_k == pytest.approx(w, rel=1e-14)
        assert bp.v_g > 0
        assert bp.gamma_e == pytest.approx(0.02**2 / bp.v_g)
        assert -np.pi < bp.phi_k <= np.pi
