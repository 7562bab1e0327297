"""Haar-state moments of the coefficients of an ergodic action.

Degree-1 and degree-2 moments have closed forms in the state weights; the
degree-2 form is also recovered independently from the rank-2 projection
onto the invariant vectors of u⊗u.  For classical and dual actions an
exhaustive averaging oracle provides a third, fully independent route.
The closed forms need only the categorical data (weights and δ), so they
also apply to the canonical quantum-automorphism data of a δ-form algebra
where no averaging oracle exists.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDelta,
    NotErgodic,
    NotTwoErgodic,
    ShapeMismatch,
    UnsupportedActionKind,
    UnsupportedElement,
)
from .actions import CoefficientAlgebra, is_ergodic, is_two_ergodic
from .multimatrix import (
    AlgebraElement,
    MultiMatrixAlgebra,
    delta_form_check,
    structure_tensors,
)


@dataclass(frozen=True)
class MomentIndex:
    """Addresses the coefficient u^{ij,kappa}_{kl,gamma} (0-based)."""

    i: int
    j: int
    kappa: int
    k: int
    l: int
    gamma: int

    def row(self, algebra):
        return algebra.flat_index(self.kappa, self.i, self.j)

    def col(self, algebra):
        return algebra.flat_index(self.gamma, self.k, self.l)


def _resolve(source):
    """Accept an action or a bare algebra (canonical quantum-automorphism
    data); return (algebra, action-or-None)."""
    if isinstance(source, MultiMatrixAlgebra):
        return source, None
    algebra = getattr(source, "algebra", None)
    if algebra is None:
        raise ShapeMismatch("expected an action or a MultiMatrixAlgebra")
    return algebra, source


def _lam(algebra, kappa, i):
    return algebra.blocks[kappa].weights[i]


def _require_ergodic(algebra, action):
    if action is not None:
        if not is_ergodic(action):
            raise NotErgodic("the action has invariant elements beyond scalars")
    elif delta_form_check(algebra) is None:
        # the canonical quantum-automorphism action is ergodic iff δ-form
        raise NotErgodic("the state is not a δ-form")


def _require_two_ergodic(algebra, action):
    if action is not None:
        if not is_two_ergodic(action):
            raise NotTwoErgodic("dim Mor(u,u) != 2")
    else:
        # the canonical quantum-automorphism action is 2-ergodic iff the
        # state is a δ-form and dim(B) >= 2
        if delta_form_check(algebra) is None or algebra.dim < 2:
            raise NotTwoErgodic("quantum-automorphism data is not 2-ergodic")


def _checked_delta(algebra):
    delta = delta_form_check(algebra)
    if delta is None:
        raise DegenerateDelta("the state is not a δ-form")
    if delta <= 1 + 1e3 * algebra.tolerance:
        raise DegenerateDelta(f"δ = {delta} is too close to 1")
    return delta


def haar_first_moment(source, idx):
    """h(u^{ij,κ}_{kl,γ}) = δ_ij δ_kl (λ_{κ,i} λ_{γ,k})^{1/2}.

    Also recomputed as the matching entry of the rank-1 projection ηη★;
    the two paths must agree.
    """
    algebra, action = _resolve(source)
    _require_ergodic(algebra, action)
    closed = 0.0
    if idx.i == idx.j and idx.k == idx.l:
        closed = (_lam(algebra, idx.kappa, idx.i) * _lam(algebra, idx.gamma, idx.k)) ** 0.5
    _, eta, _ = structure_tensors(algebra)
    projected = float(eta[idx.row(algebra)] * eta[idx.col(algebra)])
    if abs(closed - projected) > algebra.tolerance:
        raise ShapeMismatch(
            f"internal disagreement in first moment: {closed} vs {projected}"
        )
    return closed


def second_moment_closed_form(algebra, delta, idx1, idx2):
    """The four-term degree-2 closed form, exactly as printed."""
    i, j, alpha, k, l, gamma = idx1.i, idx1.j, idx1.kappa, idx1.k, idx1.l, idx1.gamma
    r, s, kappa, v, w, zeta = idx2.i, idx2.j, idx2.kappa, idx2.k, idx2.l, idx2.gamma
    la = lambda blk, x: _lam(algebra, blk, x)

    total = 0.0
    if i == j and k == l and r == s and v == w:
        total += (
            delta
            / (delta - 1)
            * (la(alpha, i) * la(gamma, k) * la(kappa, r) * la(zeta, v)) ** 0.5
        )
    if alpha == kappa and j == r and i == s and gamma == zeta and k == w and l == v:
        total += (
            1
            / (delta - 1)
            * (la(alpha, i) * la(gamma, k) / (la(alpha, j) * la(gamma, l))) ** 0.5
        )
    if i == j and r == s and gamma == zeta and k == w and l == v:
        total -= (
            1
            / (delta - 1)
            * (la(alpha, i) * la(kappa, r) * la(gamma, k) / la(gamma, l)) ** 0.5
        )
    if alpha == kappa and i == s and j == r and k == l and v == w:
        total -= (
            1
            / (delta - 1)
            * (la(alpha, i) / la(alpha, j) * la(gamma, k) * la(zeta, v)) ** 0.5
        )
    return total


def haar_second_moment(source, idx1, idx2):
    """h of a product of two coefficients, for a 2-ergodic action."""
    algebra, action = _resolve(source)
    _require_two_ergodic(algebra, action)
    delta = _checked_delta(algebra)
    return second_moment_closed_form(algebra, delta, idx1, idx2)


def haar_projection(source):
    """The orthogonal projection onto the invariant vectors of u⊗u:
    p = ηη★⊗ηη★ + (m★η−η⊗η)(m★η−η⊗η)★/(δ−1).

    Its entry at (row1*d+row2, col1*d+col2) is the degree-2 moment of the
    coefficients u_{row1,col1} u_{row2,col2}.
    """
    algebra, action = _resolve(source)
    _require_two_ergodic(algebra, action)
    delta = _checked_delta(algebra)
    _, eta, mstar = structure_tensors(algebra)
    ee = np.kron(eta, eta)
    sv = mstar @ eta
    p = np.outer(ee, ee) + np.outer(sv - ee, sv - ee) / (delta - 1)

    tol = 1e3 * algebra.tolerance
    if np.linalg.norm(p @ p - p) > tol or np.linalg.norm(p - p.conj().T) > tol:
        raise ShapeMismatch("constructed operator is not an orthogonal projection")
    if abs(np.trace(p).real - 2.0) > tol:
        raise ShapeMismatch("invariant-vector projection does not have rank 2")
    return p


def second_moment_table(source):
    """All degree-2 moments at once, as a dim(B)^2 x dim(B)^2 array built
    from the closed form (outer products of η⊗η and m★η)."""
    algebra, action = _resolve(source)
    _require_two_ergodic(algebra, action)
    delta = _checked_delta(algebra)
    _, eta, mstar = structure_tensors(algebra)
    ee = np.kron(eta, eta)
    sv = mstar @ eta
    c = 1.0 / (delta - 1)
    return (
        delta * c * np.outer(ee, ee)
        + c * np.outer(sv, sv)
        - c * (np.outer(ee, sv) + np.outer(sv, ee))
    )


def brute_force_moment(action, word):
    """Exhaustive Haar evaluation of a product of coefficients; classical
    actions average over the group, dual actions read the identity-grade
    component of the convolution product."""
    if getattr(action, "kind", None) not in ("classical", "dual"):
        raise UnsupportedActionKind("need a classical or dual action")
    if len(word) > 4:
        raise UnsupportedElement("moment words longer than 4 are not supported")
    algebra = action.algebra
    model = CoefficientAlgebra(action)
    acc = model.one()
    for idx in word:
        acc = model.multiply(acc, model.coefficient(idx.row(algebra), idx.col(algebra)))
    return model.haar(acc)


class MatrixOverCoefficients:
    """An element of M_{N_κ}(C) ⊗ (coefficient algebra of the action),
    stored as entries[r][s] = b^κ_{rs}-coefficient, a group vector."""

    def __init__(self, action, kappa, entries):
        self.action = action
        self.kappa = kappa
        n = action.algebra.sizes[kappa]
        entries = np.asarray(entries, dtype=complex)
        if entries.shape != (n, n, action.group.order):
            raise UnsupportedElement(
                f"expected shape ({n},{n},{action.group.order}), got {entries.shape}"
            )
        self.entries = entries


def beta_kappa(action, kappa, element):
    """β_κ(b) = Σ_{ij} b^κ_{ij} ⊗ u^{ij,κ}_{..}, as a MatrixOverCoefficients."""
    algebra = action.algebra
    model = CoefficientAlgebra(action)
    n = algebra.sizes[kappa]
    coords = element.coords()
    entries = np.zeros((n, n, action.group.order), dtype=complex)
    for i in range(n):
        for j in range(n):
            row = algebra.flat_index(kappa, i, j)
            for col in range(algebra.dim):
                if coords[col] != 0:
                    entries[i, j] += coords[col] * model.coefficient(row, col)
    return MatrixOverCoefficients(action, kappa, entries)


def cond_expectation(action, kappa, X):
    """The state-preserving conditional expectation E_κ onto β_κ(B):
    E_κ(b^κ_{rs}⊗a) = (δ λ²_{κ,s})^{-1} Σ_{γ,k,l} h((u^{rs,κ}_{kl,γ})* a) b^γ_{kl}.

    X is a MatrixOverCoefficients for block κ; the Haar values h(...) are
    exact for classical and dual actions, so the whole coefficient span is
    accepted.  Returns an AlgebraElement of B.
    """
    algebra = action.algebra
    delta = _checked_delta(algebra)
    if not isinstance(X, MatrixOverCoefficients) or X.kappa != kappa:
        raise UnsupportedElement("X must be a MatrixOverCoefficients for block κ")
    model = CoefficientAlgebra(action)
    n = algebra.sizes[kappa]
    out_coords = np.zeros(algebra.dim, dtype=complex)
    for r in range(n):
        for s in range(n):
            a = X.entries[r, s]
            if not np.any(a):
                continue
            lam_s = _lam(algebra, kappa, s)
            row = algebra.flat_index(kappa, r, s)
            for col in range(algebra.dim):
                ustar = model.star(model.coefficient(row, col))
                val = model.haar(model.multiply(ustar, a))
                out_coords[col] += val / (delta * lam_s**2)
    return AlgebraElement.from_coords(algebra, out_coords)
