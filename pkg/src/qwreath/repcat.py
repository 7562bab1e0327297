"""Conjugate pairs, quantum dimensions and the free-wreath morphism
calculus at the level of concrete tensors.

A vector s ∈ H ⊗ H' is stored as a matrix S with S[a,b] the coefficient
on e_a ⊗ e'_b.  For a pair (s, s̄) with s ∈ H⊗H̄ and s̄ ∈ H̄⊗H the two
conjugate equations read S·conj(S̄) = id_H and S̄·conj(S) = id_H̄.
The positive operator of the pair is Q = S·S^H (the J-map recipe).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConjugateEquationFailed,
    NotDeltaForm,
    NotIntertwiner,
    ResidualTooLarge,
    ShapeMismatch,
)
from .actions import intertwiner_space, is_ergodic
from .multimatrix import delta_form_check, modular_data, structure_tensors


class RepData:
    """Finite-dimensional representation stand-in: a dimension, positive
    diagonal Q-weights, and optionally concrete unitary matrices."""

    def __init__(self, dim, q, rep=None, standard=False, tolerance=1e-9):
        if dim < 1 or len(q) != dim:
            raise ShapeMismatch("need one positive Q-weight per dimension")
        q = tuple(float(x) for x in q)
        if any(x <= 0 for x in q):
            raise ShapeMismatch("Q-weights must be strictly positive")
        if standard:
            tr = sum(q)
            tr_inv = sum(1.0 / x for x in q)
            if abs(tr - tr_inv) > tolerance * max(tr, tr_inv):
                raise ShapeMismatch(
                    f"standard pair requires Tr(Q)=Tr(Q^-1), got {tr} vs {tr_inv}"
                )
        self.dim = dim
        self.q = q
        self.rep = rep

    def q_trace(self):
        return sum(self.q)

    def __repr__(self):
        return f"RepData(dim={self.dim})"


@dataclass
class ConjugatePair:
    s: np.ndarray        # matrix of s ∈ H⊗H̄, shape (dim H, dim H̄)
    sbar: np.ndarray     # matrix of s̄ ∈ H̄⊗H, shape (dim H̄, dim H)
    residual: float


def conjugate_equation_residual(S, Sb):
    """Max deviation of the two conjugate equations from the identity."""
    d = S.shape[0]
    db = Sb.shape[0]
    if S.shape != (d, db) or Sb.shape != (db, d):
        raise ShapeMismatch("conjugate-pair matrices have incompatible shapes")
    r1 = np.linalg.norm(S @ Sb.conj() - np.eye(d))
    r2 = np.linalg.norm(Sb @ S.conj() - np.eye(db))
    return float(max(r1, r2))


def pair_q_operator(S):
    """The positive operator attached to the pair through the J-map."""
    return S @ S.conj().T


@dataclass
class ConjugateReport:
    pair: ConjugatePair
    q: np.ndarray
    dim_q: float
    standardness_residual: float


def conjugate_data_u(source):
    """The self-conjugate pair (m★η, m★η) of the representation u of an
    ergodic action (or of the quantum-automorphism data of a δ-form
    algebra): verifies the conjugate equations, that the pair's positive
    operator is the modular operator, and dim_q(u) = δ.

    Standardness (the two canonical functionals on End(u) agree) is
    checked on a computed basis of End(u) when an action is supplied.
    """
    if hasattr(source, "algebra"):
        action, algebra = source, source.algebra
    else:
        action, algebra = None, source
    delta = delta_form_check(algebra)
    if delta is None:
        raise NotDeltaForm("conjugate data for u needs a δ-form state")
    d = algebra.dim
    m, eta, mstar = structure_tensors(algebra)
    S = (mstar @ eta).reshape(d, d)

    residual = conjugate_equation_residual(S, S)
    tol = 1e3 * algebra.tolerance
    if residual > tol:
        raise ConjugateEquationFailed(residual)

    q = pair_q_operator(S)
    nabla, _ = modular_data(algebra)
    if np.linalg.norm(q - nabla) > tol:
        raise ConjugateEquationFailed(float(np.linalg.norm(q - nabla)))
    dim_q = float(np.trace(q).real)

    std_res = 0.0
    if action is not None:
        if not is_ergodic(action):
            raise NotDeltaForm("standardness check needs an ergodic action")
        sv = mstar @ eta
        for T in intertwiner_space(action, 1, 1):
            left = np.kron(np.eye(d), T) @ sv
            right = np.kron(T, np.eye(d)) @ sv
            phi = complex(eta @ (m @ left))
            psi = complex(eta @ (m @ right))
            std_res = max(std_res, abs(phi - psi))
        if std_res > tol:
            raise ConjugateEquationFailed(std_res)

    return ConjugateReport(ConjugatePair(S, S, residual), q, dim_q, std_res)


@dataclass
class WreathConjugateReport:
    s_v: np.ndarray
    s_vbar: np.ndarray
    residual: float
    norm_sq_v: float
    norm_sq_vbar: float
    q: np.ndarray
    dim_q: float


def wreath_conjugate(v, algebra):
    """The conjugate pair (S_v, S_v̄) of the induced representation a(v)
    on H_v ⊗ B, built from the explicit coefficient formulas:

    S_v  = Σ sqrt(Q_{v,i} λ_{κ,j}/λ_{κ,k}) e^v_i ⊗ b^κ_{jk} ⊗ e^v̄_i ⊗ b^κ_{kj}
    S_v̄ = Σ sqrt(λ_{κ,j}/(Q_{v,i} λ_{κ,k})) e^v̄_i ⊗ b^κ_{jk} ⊗ e^v_i ⊗ b^κ_{kj}

    Verifies the conjugate equations and returns both squared norms; the
    norm of S_v is Tr(Q_v)·δ, the quantum dimension of a(v) for standard
    Q-weights.
    """
    delta = delta_form_check(algebra)
    if delta is None:
        raise NotDeltaForm("wreath conjugates need a δ-form state")
    d = algebra.dim
    dv = v.dim
    Sv = np.zeros((dv * d, dv * d))
    Svb = np.zeros((dv * d, dv * d))
    for kappa, n in enumerate(algebra.sizes):
        lam = algebra.blocks[kappa].weights
        for j in range(n):
            for k in range(n):
                row_b = algebra.flat_index(kappa, j, k)
                col_b = algebra.flat_index(kappa, k, j)
                for i in range(dv):
                    Sv[i * d + row_b, i * d + col_b] = (
                        v.q[i] * lam[j] / lam[k]
                    ) ** 0.5
                    Svb[i * d + row_b, i * d + col_b] = (
                        lam[j] / (v.q[i] * lam[k])
                    ) ** 0.5

    residual = conjugate_equation_residual(Sv, Svb)
    tol = 1e3 * algebra.tolerance * dv * d
    if residual > tol:
        raise ConjugateEquationFailed(residual)

    q = pair_q_operator(Sv)
    return WreathConjugateReport(
        Sv,
        Svb,
        residual,
        float(np.sum(Sv**2)),
        float(np.sum(Svb**2)),
        q,
        float(np.trace(q).real),
    )


def flip_23(d1, d2, d3, d4):
    """Permutation matrix for (x1⊗x2⊗x3⊗x4) ↦ (x1⊗x3⊗x2⊗x4)."""
    n = d1 * d2 * d3 * d4
    P = np.zeros((n, n))
    for a in range(d1):
        for b in range(d2):
            for c in range(d3):
                for e in range(d4):
                    src = ((a * d2 + b) * d3 + c) * d4 + e
                    dst = ((a * d3 + c) * d2 + b) * d4 + e
                    P[dst, src] = 1.0
    return P


def wreath_morphism(S, v, w, t, algebra):
    """(S⊗m)Σ₂₃ : H_v⊗B⊗H_w⊗B → H_t⊗B, as a dense matrix.

    S must map H_v⊗H_w → H_t.  Σ₂₃ is built as an explicit permutation
    matrix, never an implicit reshape.
    """
    S = np.asarray(S, dtype=complex)
    dv, dw, dt = v.dim, w.dim, t.dim
    if S.shape != (dt, dv * dw):
        raise ShapeMismatch(f"S must have shape ({dt},{dv * dw}), got {S.shape}")
    d = algebra.dim
    m, _, _ = structure_tensors(algebra)
    return np.kron(S, m) @ flip_23(dv, d, dw, d)


def rep_intertwiner_residual(S, v, w, t):
    """Max over the group of ‖S·(v(g)⊗w(g)) − t(g)·S‖."""
    worst = 0.0
    for g in range(v.group.order):
        lhs = S @ np.kron(v.matrices[g], w.matrices[g])
        rhs = t.matrices[g] @ S
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def wreath_morphism_check(S, v, w, t, h_action, tolerance=1e-9):
    """Verify that (S⊗m)Σ₂₃ intertwines the induced representations in the
    finite quotient model where the smeared copy of the outer group acts
    as 1_B ⊗ (group leg).

    There, the induced representation of r evaluated at a pair (h, g) is
    the matrix r(g) ⊗ α_h on H_r ⊗ B.  The check runs over every such
    pair.  This is a necessary condition (identities must survive the
    quotient), not a sufficient one.
    """
    S = np.asarray(S, dtype=complex)
    if v.group is not w.group or v.group is not t.group:
        raise ShapeMismatch("v, w, t must represent the same group")
    res_s = rep_intertwiner_residual(S, v, w, t)
    if res_s > 1e3 * tolerance * max(1.0, float(np.linalg.norm(S))):
        raise NotIntertwiner(f"S is not an intertwiner v⊗w → t (residual {res_s:.3e})")
    if h_action.kind != "classical":
        raise ShapeMismatch("the quotient model needs a classical inner action")

    vd = RepData(v.dim, (1.0,) * v.dim)
    wd = RepData(w.dim, (1.0,) * w.dim)
    td = RepData(t.dim, (1.0,) * t.dim)
    T = wreath_morphism(S, vd, wd, td, h_action.algebra)

    worst = 0.0
    for g in range(v.group.order):
        for M in h_action.autos:
            Xv = np.kron(v.matrices[g], M)
            Xw = np.kron(w.matrices[g], M)
            Xt = np.kron(t.matrices[g], M)
            resid = float(np.linalg.norm(T @ np.kron(Xv, Xw) - Xt @ T))
            worst = max(worst, resid)
    if worst > 1e3 * tolerance * max(1.0, float(np.linalg.norm(T))):
        raise ResidualTooLarge(worst)
    return {"intertwiner_residual": res_s, "quotient_model_residual": worst}
