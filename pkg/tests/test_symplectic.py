import math

import numpy as np
import pytest

from cvtypical.errors import (
    DimensionMismatch,
    DomainError,
    InvalidCovariance,
    InvalidSubsystem,
    NonUnitaryInput,
    PairingFailure,
)
from cvtypical.haar import SeededStream, sample_haar_unitary
from cvtypical.symplectic import (
    PURE_CLAMP,
    average_energy,
    concentration_f,
    entropy_G,
    entropy_g,
    eta_embed,
    fiducial_covariance,
    gaussian_entropy,
    inverse_temperature_beta,
    mode_energy_from_squeezing,
    photon_number,
    reduce_covariance,
    rotate_covariance,
    spectral_deviation_delta,
    squeezing_from_energy,
    symplectic_form,
    symplectic_spectrum,
    validate_covariance,
)


def test_symplectic_form_square():
    for n in (1, 2, 5):
        J = symplectic_form(n)
        assert J.shape == (2 * n, 2 * n)
        assert np.array_equal(J.T, -J)
        assert np.array_equal(J @ J, -np.eye(2 * n))


def test_symplectic_form_rejects_nonpositive_n():
    with pytest.raises(DomainError):
        symplectic_form(0)


def test_eta_embed_is_orthogonal_symplectic():
    """The unitary embedding must land in Sp(2n) and O(2n) simultaneously."""
    gen = SeededStream(11).generator()
    for n in (1, 3, 6):
        U = sample_haar_unitary(n, gen)
        O = eta_embed(U)
        J = symplectic_form(n)
        assert np.allclose(O.T @ O, np.eye(2 * n), atol=1e-12)
        assert np.allclose(O @ J @ O.T, J, atol=1e-12)


def test_eta_embed_is_a_homomorphism():
    gen = SeededStream(12).generator()
    U = sample_haar_unitary(4, gen)
    V = sample_haar_unitary(4, gen)
    assert np.allclose(eta_embed(U @ V), eta_embed(U) @ eta_embed(V), atol=1e-12)


def test_eta_embed_rejects_nonunitary():
    with pytest.raises(NonUnitaryInput):
        eta_embed(np.eye(3) * 2.0)


def test_fiducial_covariance_layout():
    M = fiducial_covariance([4.0, 1.0])
    assert np.allclose(M, np.diag([4.0, 1.0, 0.25, 1.0]))


def test_fiducial_covariance_rejects_squeezing_below_one():
    with pytest.raises(DomainError):
        fiducial_covariance([0.5, 2.0])


def test_rotate_covariance_preserves_symmetry_and_spectrum():
    gen = SeededStream(13).generator()
    z = np.array([3.0, 1.5, 1.0])
    M = fiducial_covariance(z)
    O = eta_embed(sample_haar_unitary(3, gen))
    M2 = rotate_covariance(M, O)
    assert np.allclose(M2, M2.T, atol=1e-12)
    # orthogonal conjugation keeps the ordinary eigenvalues
    assert np.allclose(
        np.sort(np.linalg.eigvalsh(M2)), np.sort(np.linalg.eigvalsh(M)), atol=1e-10
    )


def test_rotate_covariance_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        rotate_covariance(np.eye(4), np.eye(6))


def test_reduce_covariance_picks_leading_modes():
    n, k = 4, 2
    gen = SeededStream(14).generator()
    M = rotate_covariance(
        fiducial_covariance([2.0, 1.5, 1.25, 1.0]),
        eta_embed(sample_haar_unitary(n, gen)),
    )
    idx = list(range(k)) + list(range(n, n + k))
    assert np.array_equal(reduce_covariance(M, k), M[np.ix_(idx, idx)])


def test_reduce_covariance_rejects_bad_subsystem():
    M = np.eye(8)
    with pytest.raises(InvalidSubsystem):
        reduce_covariance(M, 0)
    with pytest.raises(InvalidSubsystem):
        reduce_covariance(M, 5)


def test_validate_covariance_accepts_physical_states():
    validate_covariance(np.eye(6))
    validate_covariance(fiducial_covariance([5.0, 1.0]))
    validate_covariance(3.0 * np.eye(4))


def test_validate_covariance_rejects_below_vacuum():
    with pytest.raises(InvalidCovariance):
        validate_covariance(0.5 * np.eye(4))


def test_validate_covariance_rejects_asymmetric():
    M = np.eye(4)
    M[0, 1] = 0.3
    with pytest.raises(InvalidCovariance):
        validate_covariance(M)


def test_symplectic_spectrum_pure_state_is_flat():
    gen = SeededStream(15).generator()
    z = np.array([6.0, 2.0, 1.0, 1.0])
    M = rotate_covariance(fiducial_covariance(z), eta_embed(sample_haar_unitary(4, gen)))
    spec = symplectic_spectrum(M)
    assert spec.lambdas.shape == (4,)
    assert np.max(np.abs(spec.lambdas - 1.0)) < 1e-10
    assert spec.pairing_residual < 1e-10


def test_symplectic_spectrum_thermal_state():
    assert np.allclose(symplectic_spectrum(2.5 * np.eye(6)).lambdas, 2.5)


def test_symplectic_spectrum_sorted_descending():
    M = fiducial_covariance([4.0, 1.0]) + 0.0
    # direct sum with a thermal mode: spectrum {1, 3}
    big = np.zeros((6, 6))
    big[np.ix_([0, 3], [0, 3])] = M[np.ix_([0, 2], [0, 2])]
    big[np.ix_([1, 4], [1, 4])] = M[np.ix_([1, 3], [1, 3])]
    big[2, 2] = big[5, 5] = 3.0
    lam = symplectic_spectrum(big).lambdas
    assert list(lam) == sorted(lam, reverse=True)
    assert np.allclose(np.sort(lam), [1.0, 1.0, 3.0], atol=1e-10)


def test_symplectic_spectrum_rejects_unpaired_matrix():
    # J itself is antisymmetric: spec(J J) gives real eigenvalues, no +/- i pairs
    with pytest.raises(PairingFailure):
        symplectic_spectrum(symplectic_form(2) + 0.0)


def test_symplectic_spectrum_rejects_unphysical_state():
    with pytest.raises(InvalidCovariance):
        symplectic_spectrum(0.5 * np.eye(4))


def test_average_energy_flat_trace():
    z = np.array([3.0, 1.0, 1.0, 1.0])
    M = fiducial_covariance(z)
    assert average_energy(z) == pytest.approx(np.trace(M) / 8.0, rel=1e-14)
    assert average_energy([1.0, 1.0]) == 1.0


def test_mode_energy_round_trip():
    for z in (1.0, 1.5, 10.0, 1000.0):
        E = mode_energy_from_squeezing(z)
        assert E >= 2.0
        assert squeezing_from_energy(E) == pytest.approx(z, rel=1e-10)
    assert squeezing_from_energy(2.0) == 1.0
    assert mode_energy_from_squeezing(2.0) == pytest.approx(2.5)


def test_energy_domain_errors():
    with pytest.raises(DomainError):
        mode_energy_from_squeezing(0.9)
    with pytest.raises(DomainError):
        squeezing_from_energy(1.9)


def test_total_energy_invariant_under_rotation():
    """Passive rotations redistribute but never create energy: tr M is fixed."""
    gen = SeededStream(16).generator()
    z = np.array([5.0, 2.0, 1.0])
    M = fiducial_covariance(z)
    total = sum(mode_energy_from_squeezing(v) for v in z)
    assert np.trace(M) == pytest.approx(total, rel=1e-12)
    for _ in range(3):
        O = eta_embed(sample_haar_unitary(3, gen))
        assert np.trace(rotate_covariance(M, O)) == pytest.approx(total, rel=1e-12)


def test_photon_number_values_and_clamp():
    assert photon_number(1.0) == 0.0
    assert photon_number(1.0 + 0.5 * PURE_CLAMP) == 0.0
    assert photon_number(1.0 - 0.5 * PURE_CLAMP) == 0.0
    assert photon_number(3.0) == 1.0
    assert photon_number(1.0 + 1e-6) == pytest.approx(5e-7)
    with pytest.raises(DomainError):
        photon_number(1.0 - 1e-6)


def test_entropy_g_pinned_values():
    assert entropy_g(0.0) == 0.0
    assert entropy_g(1.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-14)
    with pytest.raises(DomainError):
        entropy_g(-1e-9)


def test_entropy_G_pinned_values():
    assert entropy_G(1.0) == 0.0
    assert entropy_G(3.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-14)


def test_inverse_temperature_values():
    assert inverse_temperature_beta(3.0) == pytest.approx(math.log(2.0), rel=1e-14)
    assert inverse_temperature_beta(1.0) == math.inf


def test_beta_is_twice_entropy_slope():
    # 2 G'(lambda) = beta(lambda), checked by central difference
    for lam in (1.3, 2.5, 7.0):
        h = 1e-6
        slope = (entropy_G(lam + h) - entropy_G(lam - h)) / (2.0 * h)
        assert 2.0 * slope == pytest.approx(inverse_temperature_beta(lam), rel=1e-7)


def test_gaussian_entropy_additive_over_modes():
    lams = np.array([3.0, 2.0, 1.0])
    expected = sum(entropy_G(v) for v in lams)
    assert gaussian_entropy(lams) == pytest.approx(expected, rel=1e-14)
    spec = symplectic_spectrum(np.diag([3.0, 3.0]))
    assert gaussian_entropy(spec) == pytest.approx(entropy_G(3.0), rel=1e-14)


def test_concentration_f_single_thermal_mode():
    """For diag(lam, lam) the functional is exactly 2 (lam^2 - c^2)^2."""
    lam, lam_bar = 2.0, 1.5
    M = np.diag([lam, lam])
    expected = 2.0 * (lam_bar**2 - lam**2) ** 2
    assert concentration_f(M, lam_bar) == pytest.approx(expected, rel=1e-12)
    assert concentration_f(np.eye(2), 1.0) == pytest.approx(0.0, abs=1e-14)


def test_concentration_f_matches_deviation_delta():
    gen = SeededStream(17).generator()
    z = np.array([4.0, 2.0, 1.0, 1.0, 1.0])
    lam_bar = average_energy(z)
    M = rotate_covariance(fiducial_covariance(z), eta_embed(sample_haar_unitary(5, gen)))
    M_red = reduce_covariance(M, 2)
    f = concentration_f(M_red, lam_bar)
    delta = spectral_deviation_delta(symplectic_spectrum(M_red), lam_bar)
    assert f == pytest.approx(2.0 * delta**2, rel=1e-10)


def test_spectral_deviation_delta_hand_value():
    value = spectral_deviation_delta(np.array([2.0, 1.0]), 1.5)
    assert value == pytest.approx(math.sqrt((4.0 - 2.25) ** 2 + (2.25 - 1.0) ** 2), rel=1e-14)
