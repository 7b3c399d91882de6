import numpy as np
import pytest

from gbsval import (DataError, DimensionError, TransmissionMatrix,
                    generate_haar_unitary, load_matrix, make_transmission,
                    save_matrix, unitarity_defect)


def test_single_mode_unitary_is_a_phase():
    u = generate_haar_unitary(1, 123)
    assert abs(abs(u.entries[0, 0]) - 1.0) <= 1e-12


def test_unitarity_by_construction():
    u = generate_haar_unitary(20, 42)
    defect = np.max(np.abs(u.entries @ u.entries.conj().T - np.eye(20)))
    assert defect <= 1e-12


def test_zero_dimension_rejected():
    with pytest.raises(DimensionError):
        generate_haar_unitary(0, 1)


def test_deterministic_in_seed():
    a = generate_haar_unitary(8, 5).entries
    b = generate_haar_unitary(8, 5).entries
    c = generate_haar_unitary(8, 6).entries
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("dim", [2, 10, 50])
def test_haar_first_entry_moment(dim):
    # E|U_ij|^2 = 1/M for the Haar measure; brute-force Monte Carlo average.
    draws = 10_000
    vals = np.empty(draws)
    for i in range(draws):
        vals[i] = abs(generate_haar_unitary(dim, 10_000 * dim + i).entries[0, 0]) ** 2
    se = vals.std(ddof=1) / np.sqrt(draws)
    assert abs(vals.mean() - 1.0 / dim) <= 5 * se


def test_lossless_transmission_is_the_unitary():
    u = generate_haar_unitary(6, 1)
    t = make_transmission(u, 1.0)
    assert np.array_equal(t.entries, np.sqrt(1.0) * u.entries)


def test_half_loss_singular_values():
    u = generate_haar_unitary(20, 3)
    t = make_transmission(u, 0.5)
    sv = np.linalg.svd(t.entries, compute_uv=False)
    assert np.max(np.abs(sv - np.sqrt(0.5))) <= 1e-12


def test_total_loss_gives_zero_matrix():
    u = generate_haar_unitary(4, 9)
    t = make_transmission(u, 0.0)
    assert np.all(t.entries == 0)


def test_negative_transmission_rejected():
    u = generate_haar_unitary(2, 0)
    with pytest.raises(DataError):
        make_transmission(u, -0.1)


def test_fit_correction_above_unity_warns():
    u = generate_haar_unitary(3, 4)
    with pytest.warns(UserWarning):
        t = make_transmission(u, 1.0235)
    assert t.intensity_transmission == pytest.approx(1.0235)


def test_loss_composition():
    u = generate_haar_unitary(7, 11)
    once = make_transmission(u, 0.3 * 0.6)
    twice = make_transmission(make_transmission(u, 0.3), 0.6)
    assert np.max(np.abs(once.entries - twice.entries)) <= 1e-14


def test_unitarity_defect_identity():
    t = TransmissionMatrix(entries=np.eye(5, dtype=complex))
    rep = unitarity_defect(t)
    assert rep.defect == 0.0
    assert rep.physical


def test_unitarity_defect_half_loss():
    u = generate_haar_unitary(8, 2)
    rep = unitarity_defect(make_transmission(u, 0.5))
    # T T^dag = 0.5 I exactly, so the defect is 0.5
    assert abs(rep.defect - 0.5) <= 1e-12
    assert abs(rep.min_loss_eigenvalue - 0.5) <= 1e-12


def test_oversized_singular_value_flagged_unphysical():
    with pytest.warns(UserWarning):
        t = TransmissionMatrix(entries=1.1 * np.eye(3, dtype=complex),
                               check_physical=False)
    rep = unitarity_defect(t)
    assert rep.min_loss_eigenvalue < 0
    assert not rep.physical


@pytest.mark.parametrize("ext", ["json", "csv"])
def test_matrix_round_trip_bit_exact(tmp_path, ext):
    rng = np.random.default_rng(0)
    m = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    path = tmp_path / f"m.{ext}"
    save_matrix(path, m)
    back = load_matrix(path)
    assert np.array_equal(m, back)
