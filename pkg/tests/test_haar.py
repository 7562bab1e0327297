import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwreath.errors import (
    DegenerateDelta,
    NotErgodic,
    NotTwoErgodic,
    UnsupportedElement,
)
from qwreath.multimatrix import AlgebraElement, make_algebra, onb_element
from qwreath.actions import (
    pauli_action,
    s3hat_fixtures,
    symmetric_coordinate_action,
    trivial_action,
)
from qwreath.haar import (
    MomentIndex,
    beta_kappa,
    brute_force_moment,
    cond_expectation,
    haar_first_moment,
    haar_projection,
    haar_second_moment,
    second_moment_table,
)


def all_entries(algebra):
    return [
        (kappa, i, j)
        for kappa, n in enumerate(algebra.sizes)
        for i in range(n)
        for j in range(n)
    ]


def all_moment_indices(algebra):
    entries = all_entries(algebra)
    return [
        MomentIndex(i, j, kappa, k, l, gamma)
        for (kappa, i, j), (gamma, k, l) in itertools.product(entries, entries)
    ]


def test_first_moment_requires_ergodicity():
    alg = make_algebra([(1, [0.5]), (1, [0.5])])
    action = trivial_action(alg)
    with pytest.raises(NotErgodic):
        haar_first_moment(action, MomentIndex(0, 0, 0, 0, 0, 0))
    # bare algebra route: a non-δ-form state is rejected
    skew = make_algebra([(1, [1 / 3]), (2, [1 / 3, 1 / 3])])
    with pytest.raises(NotErgodic):
        haar_first_moment(skew, MomentIndex(0, 0, 0, 0, 0, 0))


def test_degenerate_delta_rejected():
    point = make_algebra([(1, [1.0])])
    with pytest.raises((DegenerateDelta, NotTwoErgodic)):
        haar_second_moment(point, MomentIndex(0, 0, 0, 0, 0, 0), MomentIndex(0, 0, 0, 0, 0, 0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_symmetric_first_moments_vs_average(n):
    action = symmetric_coordinate_action(n)
    for idx in all_moment_indices(action.algebra):
        closed = haar_first_moment(action, idx)
        oracle = brute_force_moment(action, [idx])
        assert abs(closed - oracle) < 1e-9


@pytest.mark.parametrize("n", [2, 3])
def test_symmetric_second_moments_vs_average(n):
    action = symmetric_coordinate_action(n)
    indices = all_moment_indices(action.algebra)
    for idx1 in indices:
        for idx2 in indices:
            closed = haar_second_moment(action, idx1, idx2)
            oracle = brute_force_moment(action, [idx1, idx2])
            assert abs(closed - oracle) < 1e-9


def test_second_moment_table_matches_projection_and_closed_form():
    # the Pauli action is deliberately absent: it is ergodic but its
    # endomorphism algebra is 4-dimensional, so the rank-2 closed form
    # does not describe its moments
    for source in (
        symmetric_coordinate_action(3),
        make_algebra([(1, [1 / 5]), (2, [2 / 5, 2 / 5])]),
        make_algebra([(2, [0.5, 0.5])]),
    ):
        table = second_moment_table(source)
        proj = haar_projection(source)
        assert np.max(np.abs(table - proj)) < 1e-9
        algebra = source if not hasattr(source, "algebra") else source.algebra
        d = algebra.dim
        indices = all_moment_indices(algebra)
        for idx1, idx2 in itertools.islice(itertools.product(indices, indices), 400):
            closed = haar_second_moment(source, idx1, idx2)
            entry = table[
                idx1.row(algebra) * d + idx2.row(algebra),
                idx1.col(algebra) * d + idx2.col(algebra),
            ]
            assert abs(closed - entry) < 1e-9


def test_dual_second_moments_two_ergodic_fixture():
    action = next(a for a in s3hat_fixtures() if a.algebra.dim == 2)
    indices = all_moment_indices(action.algebra)
    for idx1 in indices:
        for idx2 in indices:
            closed = haar_second_moment(action, idx1, idx2)
            oracle = brute_force_moment(action, [idx1, idx2])
            assert abs(closed - oracle) < 1e-9


def test_frozen_moment_values():
    # uniform weights on C^2, δ = 2: the only invariant data
    action = symmetric_coordinate_action(2)
    idx = MomentIndex(0, 0, 0, 0, 0, 0)
    assert haar_first_moment(action, idx) == pytest.approx(0.5)
    assert haar_second_moment(action, idx, idx) == pytest.approx(0.5)
    # frozen oracle for weights (2/3, 1/3) on C^2: the GNS inner product
    # of the off-diagonal unit with itself is λ_row/λ_col scaled; here we
    # freeze the state pairing ψ(e_12* e_12) = λ_2·(λ_2^{-1}) λ_1 = 1/3
    alg = make_algebra([(2, [2 / 3, 1 / 3])])
    e12 = AlgebraElement(alg, [np.array([[0.0, 1.0], [0.0, 0.0]])])
    val = (e12.star() * e12).state_value()
    assert val == pytest.approx(1 / 3)


def test_word_length_cap():
    action = symmetric_coordinate_action(2)
    idx = MomentIndex(0, 0, 0, 0, 0, 0)
    with pytest.raises(UnsupportedElement):
        brute_force_moment(action, [idx] * 5)


def test_cyclic_table_for_vector_case():
    # C^K with uniform weights: E_i(u_jk) values and the second-moment
    # pattern {1/K, 0, 1/(K(K-1))}
    K = 3
    action = symmetric_coordinate_action(K)
    for j in range(K):
        for k in range(K):
            idx1 = MomentIndex(0, 0, 0, 0, 0, j)
            idx2 = MomentIndex(0, 0, 0, 0, 0, k)
            val = haar_second_moment(action, idx1, idx2)
            assert val == pytest.approx(1 / K if j == k else 0.0, abs=1e-12)
    # the three distinct raw values
    vals = set()
    for idx1 in all_moment_indices(action.algebra):
        for idx2 in all_moment_indices(action.algebra):
            vals.add(round(haar_second_moment(action, idx1, idx2), 12))
    assert vals == {
        round(1 / K, 12),
        0.0,
        round(1 / (K * (K - 1)), 12),
    }


def test_conditional_expectation_inverts_embedding():
    rng = np.random.default_rng(7)
    for action in (symmetric_coordinate_action(3), pauli_action(), s3hat_fixtures()[3]):
        algebra = action.algebra
        for _ in range(10):
            coords = rng.normal(size=algebra.dim) + 1j * rng.normal(size=algebra.dim)
            a = AlgebraElement.from_coords(algebra, coords)
            for kappa in range(algebra.num_blocks):
                back = cond_expectation(action, kappa, beta_kappa(action, kappa, a))
                assert np.linalg.norm(back.coords() - a.coords()) < 1e-9


def test_conditional_expectation_of_unit_tensor():
    # E_κ(e^κ_{rs} ⊗ 1) = δ_rs/(δ λ_{κ,r}) · 1_B
    action = s3hat_fixtures()[3]
    algebra = action.algebra
    model_one = np.zeros(algebra.dim, dtype=complex)
    from qwreath.haar import MatrixOverCoefficients
    from qwreath.actions import CoefficientAlgebra
    from qwreath.multimatrix import delta_form_check, unit_coords

    delta = delta_form_check(algebra)
    coeff = CoefficientAlgebra(action)
    kappa = 2
    n = algebra.sizes[kappa]
    lam = algebra.blocks[kappa].weights
    for r in range(n):
        for s in range(n):
            entries = np.zeros((n, n, action.group.order), dtype=complex)
            entries[r, s] = coeff.one()
            # the matrix unit e^κ_{rs} = λ_s^{1/2} b^κ_{rs}; feed b and scale
            out = cond_expectation(
                action, kappa, MatrixOverCoefficients(action, kappa, entries)
            )
            got = lam[s] ** 0.5 * out.coords()
            want = (
                unit_coords(algebra) / (delta * lam[r])
                if r == s
                else model_one
            )
            assert np.linalg.norm(got - want) < 1e-9


def test_state_compatibility_of_expectation():
    # ψ ∘ E_κ = ψ_κ^{-1} ⊗ h on β-pushed elements and on unit tensors
    from qwreath.haar import MatrixOverCoefficients
    from qwreath.actions import CoefficientAlgebra
    from qwreath.multimatrix import delta_form_check
    from qwreath.multimatrix import inverse_state

    action = pauli_action()
    algebra = action.algebra
    coeff = CoefficientAlgebra(action)
    rng = np.random.default_rng(11)
    kappa = 0
    n = algebra.sizes[kappa]
    inv = inverse_state(algebra, kappa)
    for _ in range(10):
        entries = rng.normal(size=(n, n, action.group.order)) + 1j * rng.normal(
            size=(n, n, action.group.order)
        )
        X = MatrixOverCoefficients(action, kappa, entries)
        lhs = cond_expectation(action, kappa, X).state_value()
        # ψ_κ^{-1} ⊗ h applied entrywise: Σ_r inv_r λ_r^{-1/2}... work in
        # matrix units: X = Σ_{rs} b_{rs} ⊗ a_{rs} = Σ e_{rs} λ_s^{-1/2} ⊗ a_{rs}
        lam = np.asarray(algebra.blocks[kappa].weights)
        rhs = sum(
            inv[r] * lam[r] ** -0.5 * coeff.haar(entries[r, r]) for r in range(n)
        )
        assert abs(lhs - rhs) < 1e-9
