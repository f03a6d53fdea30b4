import numpy as np
import pytest
from scipy.linalg import expm

import rdl
from rdl.errors import NotInSpanError, SingularSystemError

from test_consistency import constrained_family


def test_model_params_validation():
    with pytest.raises(ValueError):
        rdl.ModelParams(omega=0.0, t=1.0)
    with pytest.raises(ValueError):
        rdl.ModelParams(omega=1.0, t=-0.5)
    assert rdl.ModelParams(omega=2.0, t=0.75).angle == pytest.approx(1.5)


@pytest.mark.parametrize("angle", [0.3, 1.1, np.pi / 2, 2.9])
def test_model_unitary_matches_exponential(angle):
    """The closed form agrees with the matrix exponential of the generator."""
    h = (angle / 2) * np.kron(rdl.SIGMA_Z, rdl.SIGMA_X)
    u = rdl.model_unitary(rdl.ModelParams(omega=angle, t=1.0))
    assert np.abs(u - expm(-1j * h)).max() < 1e-12
    rdl.require_unitary(u)


def test_model_unitary_time_scaling():
    a = rdl.model_unitary(rdl.ModelParams(omega=0.7, t=2.0))
    b = rdl.model_unitary(rdl.ModelParams(omega=1.4, t=1.0))
    assert np.abs(a - b).max() < 1e-14


def test_swap_unitary_exchanges_factors(rng):
    for d in (2, 3):
        s = rdl.swap_unitary(d)
        rdl.require_unitary(s)
        assert np.abs(s @ s - np.eye(d * d)).max() < 1e-14
        a = rdl.random_density_matrix(d, rng)
        b = rdl.random_density_matrix(d, rng)
        swapped = s @ rdl.tensor(a, b) @ s.conj().T
        assert np.abs(swapped - rdl.tensor(b, a)).max() < 1e-12


def test_bloch_vector_of_pauli_eigenstates():
    states = rdl.pauli_eigenstates()
    assert len(states) == 6
    expected = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    for s, e in zip(states, expected):
        rdl.require_density(s)
        assert np.abs(rdl.bloch_vector(s) - np.array(e)).max() < 1e-12


def test_analytic_step_matches_exact_dynamics(rng):
    dims = rdl.BipartiteDims(2, 2)
    for angle in (0.0, 0.6, 1.3, np.pi / 2):
        if angle == 0.0:
            u = np.eye(4, dtype=complex)
        else:
            u = rdl.model_unitary(rdl.ModelParams(omega=angle, t=1.0))
        for _ in range(5):
            p = rdl.random_two_qubit_params(rng)
            rho = rdl.assemble_two_qubit(p)
            out = rdl.partial_trace_env(rdl.adjoint_action(u, rho), dims)
            got = rdl.analytic_bloch_step(p.alpha, p.gamma[0, 0], p.gamma[1, 0], angle)
            assert np.abs(got - rdl.bloch_vector(out)).max() < 1e-11


def test_analytic_step_leaves_z_component_alone(rng):
    p = rdl.random_two_qubit_params(rng)
    out = rdl.analytic_bloch_step(p.alpha, p.gamma[0, 0], p.gamma[1, 0], 1.7)
    assert out[2] == pytest.approx(p.alpha[2])


def test_coefficients_recovered_from_four_records():
    coeffs = rdl.LinearityCoefficients(
        a11=0.3, b11=np.array([0.2, -0.1, 0.4]), a21=-0.2, b21=np.array([0.0, 0.3, -0.3])
    )
    alphas = [np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0])]
    records = []
    for a in alphas:
        g11, g21 = coeffs.predict(a)
        records.append((a, g11, g21))
    got = rdl.solve_linearity_coefficients(records)
    assert abs(got.a11 - coeffs.a11) < 1e-12
    assert abs(got.a21 - coeffs.a21) < 1e-12
    assert np.abs(got.b11 - coeffs.b11).max() < 1e-12
    assert np.abs(got.b21 - coeffs.b21).max() < 1e-12


def test_solver_needs_exactly_four_records():
    rec = (np.zeros(3), 0.0, 0.0)
    with pytest.raises(ValueError):
        rdl.solve_linearity_coefficients([rec] * 3)
    with pytest.raises(ValueError):
        rdl.solve_linearity_coefficients([rec] * 5)


def test_solver_rejects_degenerate_geometry():
    # four states on a line in Bloch space cannot pin down the affine law
    records = [(np.array([x, 0.0, 0.0]), 0.1, 0.2) for x in (0.0, 0.1, 0.2, 0.3)]
    with pytest.raises(SingularSystemError):
        rdl.solve_linearity_coefficients(records)


def test_linearity_residuals_vanish_on_constrained_family():
    fam = constrained_family()
    coeffs = rdl.LinearityCoefficients(
        a11=0.15, b11=np.array([0.1, 0.0, 0.05]), a21=-0.1, b21=np.array([0.0, 0.1, 0.0])
    )
    res = rdl.linearity_residuals(fam, coeffs)
    assert res.shape == (len(fam), 2)
    assert np.abs(res).max() < 1e-12
    # and they do not vanish for the wrong coefficients
    wrong = rdl.LinearityCoefficients(
        a11=0.35, b11=np.array([0.1, 0.0, 0.05]), a21=-0.1, b21=np.array([0.0, 0.1, 0.0])
    )
    assert np.abs(rdl.linearity_residuals(fam, wrong)).max() > 0.1


def test_swap_experiment_is_constant_cp_map(rng):
    omega = 0.5 * (np.eye(2, dtype=complex) + 0.3 * rdl.SIGMA_Z)
    exp = rdl.swap_experiment(list(rdl.pauli_eigenstates()), omega)
    assert exp.consistency.consistent
    assert exp.subspace.kernel_dim == 0
    assert exp.constant_output_deviation < 1e-12
    assert exp.map_verdicts.completely_positive
    assert exp.map_verdicts.trace_preserving
    assert np.abs(exp.superoperator.choi - rdl.tensor(np.eye(2), omega)).max() < 1e-10
    assert len(exp.pairs) == 15
    for pair in exp.pairs:
        assert not pair.increased
        assert pair.after <= pair.before + 1e-12


def test_swap_experiment_rejects_unequal_dims(rng):
    omega3 = rdl.random_density_matrix(3, rng)
    with pytest.raises(rdl.DimensionError):
        rdl.swap_experiment([rdl.random_density_matrix(2, rng)], omega3)


def test_custom_experiment_runs_on_full_span():
    fam = rdl.full_two_qubit_family()
    sub = rdl.build_subspace(fam)
    u = rdl.model_unitary(rdl.ModelParams(omega=np.pi / 2, t=1.0))
    probes = [(np.eye(2, dtype=complex) / 2, (np.eye(2) + 0.8 * rdl.SIGMA_X).astype(complex) / 2)]
    exp = rdl.custom_subspace_experiment(sub, u, probes)
    assert not exp.consistency.consistent
    assert len(exp.pairs) == 1


def test_custom_experiment_rejects_probes_outside_span():
    omega = np.diag([0.8, 0.2]).astype(complex)
    fam = rdl.product_family(
        [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)], omega
    )
    sub = rdl.build_subspace(fam)
    probes = [((np.eye(2) + 0.5 * rdl.SIGMA_X).astype(complex) / 2, np.eye(2, dtype=complex) / 2)]
    with pytest.raises(NotInSpanError):
        rdl.custom_subspace_experiment(sub, rdl.swap_unitary(2), probes)
