"""Tests for the system description and the collective Hamiltonian."""

import math
from functools import reduce

import numpy as np
import pytest

from nuresource.core.exceptions import CapacityError, ValidationError
from nuresource.model import (
    SIGMA_X,
    SIGMA_Z,
    Basis,
    CouplingKind,
    CouplingProfile,
    Flavor,
    SystemSpec,
    build_one_body,
    coupling_at,
    default_omegas,
    dense_hamiltonian,
    format_flavor_config,
    hamiltonian_terms,
    initial_state,
    mass_sigma_z,
    parse_flavor_config,
    pmns_matrix,
    total_mass_jz,
)


class TestFlavorConfig:
    """Tests for flavor configuration parsing."""

    def test_compact_string(self):
        flavors = parse_flavor_config("mmmeeeeeeeee")
        assert len(flavors) == 12
        assert flavors[:3] == (Flavor.MUON,) * 3
        assert flavors[3:] == (Flavor.ELECTRON,) * 9

    def test_label_list(self):
        assert parse_flavor_config(["mu", "electron", "nu_e", "μ"]) == (
            Flavor.MUON, Flavor.ELECTRON, Flavor.ELECTRON, Flavor.MUON,
        )

    def test_round_trip_string(self):
        assert format_flavor_config(parse_flavor_config("memeee")) == "memeee"

    def test_unknown_label(self):
        with pytest.raises(ValidationError, match="Unknown flavor"):
            parse_flavor_config("mex")

    def test_empty(self):
        with pytest.raises(ValidationError, match="cannot be empty"):
            parse_flavor_config("")

    def test_flipped(self):
        assert Flavor.ELECTRON.flipped is Flavor.MUON
        assert Flavor.MUON.flipped is Flavor.ELECTRON


class TestCouplingProfile:
    """Tests for the mu(t) profiles."""

    def test_constant(self):
        profile = CouplingProfile(CouplingKind.CONSTANT, mu0=2.5)
        assert coupling_at(profile, 0.0) == 2.5
        assert coupling_at(profile, 1e6) == 2.5

    def test_power_decay(self):
        profile = CouplingProfile(CouplingKind.POWER_DECAY, mu0=5.0, radius=50.0, exponent=3.0)
        assert coupling_at(profile, 0.0) == pytest.approx(5.0)
        assert coupling_at(profile, 50.0) == pytest.approx(5.0 / 8.0)

    def test_power_decay_is_decreasing(self):
        profile = CouplingProfile()
        values = [profile(t) for t in np.linspace(0, 500, 11)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_supernova_single_angle(self):
        profile = CouplingProfile(CouplingKind.SUPERNOVA_SINGLE_ANGLE, mu0=4.0, radius=10.0)
        assert coupling_at(profile, 0.0) == pytest.approx(4.0)
        ratio = 10.0 / 20.0
        expected = 4.0 * (1 - math.sqrt(1 - ratio**2)) ** 2
        assert coupling_at(profile, 10.0) == pytest.approx(expected)

    def test_start_radius_defaults_to_radius(self):
        base = CouplingProfile(CouplingKind.SUPERNOVA_SINGLE_ANGLE, mu0=4.0, radius=10.0)
        same = CouplingProfile(
            CouplingKind.SUPERNOVA_SINGLE_ANGLE, mu0=4.0, radius=10.0, start_radius=10.0
        )
        for t in (0.0, 3.0, 40.0):
            assert coupling_at(same, t) == pytest.approx(coupling_at(base, t))

    def test_start_radius_sets_initial_value(self):
        profile = CouplingProfile(
            CouplingKind.SUPERNOVA_SINGLE_ANGLE, mu0=5.0, radius=32.2, start_radius=210.64
        )
        assert coupling_at(profile, 0.0) == pytest.approx(5.0)
        # far from the radius mu falls off as r^-4
        ratio = coupling_at(profile, 2540.0) / coupling_at(profile, 0.0)
        assert ratio == pytest.approx((210.64 / 2750.64) ** 4, rel=0.05)

    def test_start_radius_inside_radius(self):
        with pytest.raises(ValidationError, match="start_radius"):
            CouplingProfile(CouplingKind.SUPERNOVA_SINGLE_ANGLE, radius=10.0, start_radius=5.0)

    def test_kind_from_string(self):
        assert CouplingProfile("constant").kind is CouplingKind.CONSTANT

    def test_negative_time(self):
        with pytest.raises(ValidationError):
            coupling_at(CouplingProfile(), -1.0)

    def test_negative_mu0(self):
        with pytest.raises(ValidationError, match="mu0"):
            CouplingProfile(mu0=-1.0)


class TestSystemSpec:
    """Tests for SystemSpec validation."""

    def test_default_grid(self):
        spec = SystemSpec.build("mmee", omega0=0.5)
        assert spec.omegas == default_omegas(4, 0.5) == (0.5, 1.0, 1.5, 2.0)
        assert spec.n_sites == 4

    def test_single_mode_allowed(self):
        assert SystemSpec.build("e").n_sites == 1

    def test_non_increasing_omegas(self):
        with pytest.raises(ValidationError, match="strictly increasing"):
            SystemSpec.build("mmee", omegas=[1.0, 2.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="initial_config"):
            SystemSpec.build("mme", omegas=[1.0, 2.0])

    @pytest.mark.parametrize("angle", [0.0, -0.1, 1.0])
    def test_mixing_angle_range(self, angle):
        with pytest.raises(ValidationError, match="mixing_angle"):
            SystemSpec.build("me", mixing_angle=angle)


class TestSingleModeOperators:
    """Tests for the mixing rotation."""

    def test_pmns_maps_electron_mass_vector_to_flavor(self):
        theta = 0.3
        electron_in_mass_basis = np.array([math.cos(theta), math.sin(theta)])
        np.testing.assert_allclose(pmns_matrix(theta) @ electron_in_mass_basis, [1.0, 0.0], atol=1e-15)

    def test_pmns_is_orthogonal(self):
        u = pmns_matrix(0.2)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-15)

    def test_mass_sigma_z_in_flavor_basis(self):
        theta = 0.25
        u = pmns_matrix(theta)
        np.testing.assert_allclose(mass_sigma_z(theta), u @ SIGMA_Z @ u.conj().T, atol=1e-15)
        c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
        np.testing.assert_allclose(mass_sigma_z(theta), c2 * SIGMA_Z - s2 * SIGMA_X, atol=1e-15)

    def test_mass_sigma_z_in_mass_basis(self):
        np.testing.assert_array_equal(mass_sigma_z(0.3, Basis.MASS), SIGMA_Z)

    def test_one_body_mass_basis(self):
        (term,) = build_one_body(SystemSpec.build("e"), Basis.MASS)
        np.testing.assert_allclose(term, -0.5 * SIGMA_Z)

    def test_one_body_maximal_mixing(self):
        (term,) = build_one_body(SystemSpec.build("e", mixing_angle=math.pi / 4), Basis.FLAVOR)
        np.testing.assert_allclose(term, -0.5 * SIGMA_X, atol=1e-15)

    def test_one_body_scales_with_omega(self):
        terms = build_one_body(SystemSpec.build("me", mixing_angle=0.1))
        c2, s2 = math.cos(0.2), math.sin(0.2)
        for omega, term in zip((1.0, 2.0), terms):
            np.testing.assert_allclose(term, -0.5 * omega * (c2 * SIGMA_Z - s2 * SIGMA_X))


class TestHamiltonian:
    """Tests for the full-space Hamiltonian."""

    def test_hermitian(self, decaying_spec):
        h = dense_hamiltonian(decaying_spec, 3.0).toarray()
        np.testing.assert_allclose(h, h.conj().T, atol=1e-14)

    def test_basis_consistency(self):
        """H_flavor = U^N H_mass U^N dagger."""
        spec = SystemSpec.build(
            "mee", mixing_angle=0.35, coupling=CouplingProfile(CouplingKind.CONSTANT, mu0=1.7)
        )
        u = reduce(np.kron, [pmns_matrix(spec.mixing_angle)] * spec.n_sites)
        h_mass = dense_hamiltonian(spec, 0.0, Basis.MASS).toarray()
        h_flavor = dense_hamiltonian(spec, 0.0, Basis.FLAVOR).toarray()
        np.testing.assert_allclose(h_flavor, u @ h_mass @ u.conj().T, atol=1e-13)

    def test_mass_basis_one_body_is_diagonal(self):
        spec = SystemSpec.build("me", coupling=CouplingProfile(CouplingKind.CONSTANT, mu0=0.0))
        h = dense_hamiltonian(spec, 0.0, Basis.MASS).toarray()
        # -(w1 sz x 1 + 1 x w2 sz) / 2 with w = (1, 2)
        np.testing.assert_allclose(np.diag(h).real, [-1.5, 0.5, -0.5, 1.5])
        np.testing.assert_allclose(h - np.diag(np.diag(h)), 0.0)

    def test_pair_term_is_swap(self):
        """mu/2 sigma.sigma = mu/2 (2 SWAP - 1) on two modes."""
        mu = 3.0
        spec = SystemSpec.build("me", coupling=CouplingProfile(CouplingKind.CONSTANT, mu0=mu))
        free = SystemSpec.build("me", coupling=CouplingProfile(CouplingKind.CONSTANT, mu0=0.0))
        pair = dense_hamiltonian(spec, 0.0).toarray() - dense_hamiltonian(free, 0.0).toarray()
        swap = np.eye(4)[[0, 2, 1, 3]]
        np.testing.assert_allclose(pair, 0.5 * mu * (2 * swap - np.eye(4)), atol=1e-14)

    def test_pair_coupling_is_half_mu(self, decaying_spec):
        terms = hamiltonian_terms(decaying_spec, 10.0)
        assert terms.pair_coupling == pytest.approx(0.5 * coupling_at(decaying_spec.coupling, 10.0))

    def test_total_mass_jz_commutes(self, decaying_spec):
        h = dense_hamiltonian(decaying_spec, 1.0).toarray()
        jz = total_mass_jz(decaying_spec).toarray()
        np.testing.assert_allclose(h @ jz - jz @ h, 0.0, atol=1e-12)

    def test_capacity_guard(self):
        spec = SystemSpec.build("e" * 15)
        with pytest.raises(CapacityError) as exc_info:
            dense_hamiltonian(spec, 0.0)
        assert exc_info.value.limit == 14


class TestInitialState:
    """Tests for the initial product state."""

    def test_site_zero_is_most_significant(self):
        state = initial_state(SystemSpec.build("em"))
        np.testing.assert_allclose(state.amplitudes, [0, 1, 0, 0])

    def test_all_electron(self):
        state = initial_state(SystemSpec.build("eee"))
        assert state.amplitudes[0] == 1.0
        assert state.norm() == pytest.approx(1.0)
