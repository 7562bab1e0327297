import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwreath.errors import (
    ConjugateEquationFailed,
    NotDeltaForm,
    NotIntertwiner,
    ShapeMismatch,
)
from qwreath.groups import sign_rep, standard_rep, symmetric_group, trivial_rep, tensor_rep
from qwreath.multimatrix import delta_form_check, make_algebra, modular_data
from qwreath.actions import symmetric_coordinate_action
from qwreath.repcat import (
    RepData,
    conjugate_data_u,
    conjugate_equation_residual,
    flip_23,
    pair_q_operator,
    rep_intertwiner_residual,
    wreath_conjugate,
    wreath_morphism,
    wreath_morphism_check,
)


DELTA_FORM_ALGEBRAS = [
    make_algebra([(2, [0.5, 0.5])]),                       # M_2, δ = 4
    make_algebra([(1, [0.25]), (1, [0.25]), (1, [0.25]), (1, [0.25])]),  # C^4
    make_algebra([(1, [1 / 5]), (2, [2 / 5, 2 / 5])]),     # C ⊕ M_2, δ = 5
]


def test_conjugate_equation_residual_shapes():
    with pytest.raises(ShapeMismatch):
        conjugate_equation_residual(np.eye(2), np.eye(3))


@pytest.mark.parametrize("algebra", DELTA_FORM_ALGEBRAS)
def test_defining_pair(algebra):
    report = conjugate_data_u(algebra)
    delta = delta_form_check(algebra)
    assert report.pair.residual < 1e-9
    nabla, _ = modular_data(algebra)
    assert np.linalg.norm(report.q - nabla) < 1e-9
    assert report.dim_q == pytest.approx(delta)


def test_defining_pair_with_action_checks_standardness():
    action = symmetric_coordinate_action(3)
    report = conjugate_data_u(action)
    assert report.standardness_residual < 1e-9


def test_defining_pair_rejects_non_delta_form():
    skew = make_algebra([(1, [1 / 3]), (2, [1 / 3, 1 / 3])])
    with pytest.raises(NotDeltaForm):
        conjugate_data_u(skew)


@pytest.mark.parametrize("algebra", DELTA_FORM_ALGEBRAS)
@pytest.mark.parametrize("dv", [1, 2, 3])
def test_induced_pairs(algebra, dv):
    # q-weights with Tr(Q) != Tr(Q^-1) allowed for the raw pair
    q = tuple(0.5 + 0.5 * k for k in range(dv))
    v = RepData(dv, q)
    delta = delta_form_check(algebra)
    report = wreath_conjugate(v, algebra)
    assert report.residual < 1e-9
    assert report.norm_sq_v == pytest.approx(sum(q) * delta)
    assert report.norm_sq_vbar == pytest.approx(sum(1 / x for x in q) * delta)
    assert report.dim_q == pytest.approx(sum(q) * delta)
    # Q of the pair is Q_v ⊗ ∇_ψ
    nabla, _ = modular_data(algebra)
    expected = np.kron(np.diag(q), nabla)
    assert np.linalg.norm(report.q - expected) < 1e-9


def test_standard_repdata_validation():
    RepData(2, (2.0, 0.5), standard=True)  # Tr(Q) = Tr(Q^-1) = 2.5
    with pytest.raises(ShapeMismatch):
        RepData(2, (2.0, 1.0), standard=True)
    with pytest.raises(ShapeMismatch):
        RepData(2, (1.0, -1.0))


def test_flip_23_is_permutation():
    P = flip_23(2, 3, 2, 3)
    assert np.array_equal(P @ P.T, np.eye(36))
    x = np.arange(36.0)
    # spot-check one coordinate: (a,b,c,e) -> (a,c,b,e)
    src = ((1 * 3 + 2) * 2 + 1) * 3 + 0   # a=1,b=2,c=1,e=0
    dst = ((1 * 2 + 1) * 3 + 2) * 3 + 0
    assert (P @ x)[dst] == x[src]


def test_wreath_morphism_shape_check():
    alg = DELTA_FORM_ALGEBRAS[0]
    v = RepData(2, (1.0, 1.0))
    t = RepData(3, (1.0,) * 3)
    with pytest.raises(ShapeMismatch):
        wreath_morphism(np.eye(2), v, v, t, alg)


def test_morphism_check_accepts_true_intertwiners():
    s3 = symmetric_group(3)
    sgn = sign_rep(s3)
    triv = trivial_rep(s3)
    std = standard_rep(s3)
    h = symmetric_coordinate_action(2)

    # sign ⊗ sign contains the trivial representation
    r = wreath_morphism_check(np.array([[1.0]]), sgn, sgn, triv, h)
    assert r["quotient_model_residual"] < 1e-9

    # the symmetric part of std ⊗ std contains the trivial representation
    S = np.zeros((1, 4))
    S[0, 0] = S[0, 3] = 1 / np.sqrt(2)
    assert rep_intertwiner_residual(S, std, std, triv) < 1e-9
    r = wreath_morphism_check(S, std, std, triv, h)
    assert r["quotient_model_residual"] < 1e-9


def test_morphism_check_rejects_non_intertwiners():
    s3 = symmetric_group(3)
    sgn = sign_rep(s3)
    std = standard_rep(s3)
    h = symmetric_coordinate_action(2)
    with pytest.raises(NotIntertwiner):
        wreath_morphism_check(np.array([[1.0, 0.0]]), sgn, std, trivial_rep(s3), h)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_random_conjugate_pairs_satisfy_q_identity(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    S = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    # build the unique solving partner: S̄ = conj(S^{-1}), then the
    # equations hold exactly and Q = S S^H
    while abs(np.linalg.det(S)) < 1e-2:
        S = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Sb = np.linalg.inv(S).conj()
    assert conjugate_equation_residual(S, Sb) < 1e-7
    q = pair_q_operator(S)
    assert np.linalg.norm(q - q.conj().T) < 1e-9
    assert np.all(np.linalg.eigvalsh(q) > 0)
