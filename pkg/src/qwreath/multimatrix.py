"""Multimatrix algebras B = ⊕_κ M_{N_κ}(C) carrying a faithful state.

The state is given per block by a vector of strictly positive weights
(the eigenvalues of a diagonal density matrix); the weights of all blocks
together must sum to 1.  Everything downstream works in the orthonormal
basis b^κ_{ij} = λ_{κ,j}^{-1/2} e^κ_{ij} of the GNS Hilbert space, so a
linear map on B is just a dim(B) x dim(B) complex matrix.
"""

from dataclasses import dataclass, field
import numpy as np

from .errors import (
    IndexOutOfRange,
    NonPositiveWeight,
    NotNormalized,
    ShapeMismatch,
)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Block:
    size: int
    weights: tuple

    def __post_init__(self):
        if self.size < 1 or len(self.weights) != self.size:
            raise ShapeMismatch(
                f"block of size {self.size} needs exactly {self.size} weights, "
                f"got {len(self.weights)}"
            )
        for w in self.weights:
            if not (w > 0):
                raise NonPositiveWeight(f"weight {w!r} is not strictly positive")


class MultiMatrixAlgebra:
    """Immutable value: a tuple of blocks plus a comparison tolerance.

    Derived coordinate data (flat index offsets, weight vectors along the
    row/column index of each matrix unit) is computed once at construction.
    """

    def __init__(self, blocks, tolerance=DEFAULT_TOLERANCE):
        if not (tolerance > 0):
            raise ShapeMismatch("tolerance must be positive")
        self.blocks = tuple(
            b if isinstance(b, Block) else Block(b[0], tuple(float(w) for w in b[1]))
            for b in blocks
        )
        if not self.blocks:
            raise ShapeMismatch("need at least one block")
        self.tolerance = float(tolerance)

        total = sum(w for b in self.blocks for w in b.weights)
        if abs(total - 1.0) > self.tolerance:
            raise NotNormalized(total)

        self.sizes = tuple(b.size for b in self.blocks)
        self.dim = sum(n * n for n in self.sizes)
        self.offsets = tuple(
            sum(n * n for n in self.sizes[:k]) for k in range(len(self.sizes))
        )
        # lam_row[I], lam_col[I]: state weight attached to the row / column
        # index of the matrix unit with flat coordinate I.
        lam_row = np.empty(self.dim)
        lam_col = np.empty(self.dim)
        for kappa, blk in enumerate(self.blocks):
            n = blk.size
            lam = np.asarray(blk.weights)
            o = self.offsets[kappa]
            lam_row[o:o + n * n] = np.repeat(lam, n)
            lam_col[o:o + n * n] = np.tile(lam, n)
        self.lam_row = lam_row
        self.lam_col = lam_col

    @property
    def num_blocks(self):
        return len(self.blocks)

    def flat_index(self, kappa, i, j):
        self._check_index(kappa, i, j)
        n = self.sizes[kappa]
        return self.offsets[kappa] + i * n + j

    def _check_index(self, kappa, i=0, j=0):
        if not (0 <= kappa < self.num_blocks):
            raise IndexOutOfRange(f"block index {kappa} out of range")
        n = self.sizes[kappa]
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"entry index ({i},{j}) out of range for size {n}")

    def zero_blocks(self):
        return [np.zeros((n, n), dtype=complex) for n in self.sizes]

    def __eq__(self, other):
        return (
            isinstance(other, MultiMatrixAlgebra)
            and self.blocks == other.blocks
            and self.tolerance == other.tolerance
        )

    def __hash__(self):
        return hash((self.blocks, self.tolerance))

    def __repr__(self):
        parts = ", ".join(f"M{n}" for n in self.sizes)
        return f"MultiMatrixAlgebra({parts}, dim={self.dim})"


class AlgebraElement:
    """One complex matrix per block; arithmetic acts blockwise."""

    def __init__(self, algebra, block_matrices):
        self.algebra = algebra
        mats = []
        for n, m in zip(algebra.sizes, block_matrices, strict=True):
            m = np.asarray(m, dtype=complex)
            if m.shape != (n, n):
                raise ShapeMismatch(f"expected block shape ({n},{n}), got {m.shape}")
            mats.append(m)
        self.block_matrices = mats

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, algebra.zero_blocks())

    @classmethod
    def unit(cls, algebra):
        return cls(algebra, [np.eye(n, dtype=complex) for n in algebra.sizes])

    @classmethod
    def from_coords(cls, algebra, coords):
        coords = np.asarray(coords, dtype=complex)
        if coords.shape != (algebra.dim,):
            raise ShapeMismatch(f"expected {algebra.dim} coordinates")
        # coefficient on b^κ_{ij} scales the matrix unit by λ_{κ,j}^{-1/2}
        entries = coords * algebra.lam_col ** -0.5
        mats = []
        for kappa, n in enumerate(algebra.sizes):
            o = algebra.offsets[kappa]
            mats.append(entries[o:o + n * n].reshape(n, n))
        return cls(algebra, mats)

    def coords(self):
        out = np.empty(self.algebra.dim, dtype=complex)
        for kappa, n in enumerate(self.algebra.sizes):
            o = self.algebra.offsets[kappa]
            out[o:o + n * n] = self.block_matrices[kappa].reshape(-1)
        return out * self.algebra.lam_col ** 0.5

    def _same_algebra(self, other):
        if self.algebra != other.algebra:
            raise ShapeMismatch("elements live in different algebras")

    def __add__(self, other):
        self._same_algebra(other)
        return AlgebraElement(
            self.algebra,
            [a + b for a, b in zip(self.block_matrices, other.block_matrices)],
        )

    def __sub__(self, other):
        self._same_algebra(other)
        return AlgebraElement(
            self.algebra,
            [a - b for a, b in zip(self.block_matrices, other.block_matrices)],
        )

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same_algebra(other)
            return AlgebraElement(
                self.algebra,
                [a @ b for a, b in zip(self.block_matrices, other.block_matrices)],
            )
        return AlgebraElement(self.algebra, [complex(other) * a for a in self.block_matrices])

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, [complex(scalar) * a for a in self.block_matrices])

    def star(self):
        return AlgebraElement(self.algebra, [a.conj().T for a in self.block_matrices])

    def state_value(self):
        """ψ(a) = Σ_κ Tr(Q_κ a_κ) with Q_κ = diag(weights)."""
        return sum(
            complex(np.sum(np.asarray(blk.weights) * np.diag(m)))
            for blk, m in zip(self.algebra.blocks, self.block_matrices)
        )

    def __repr__(self):
        return f"AlgebraElement({self.algebra!r})"


def make_algebra(blocks, tolerance=DEFAULT_TOLERANCE):
    return MultiMatrixAlgebra(blocks, tolerance)


def onb_element(algebra, kappa, i, j):
    """The orthonormal basis vector b^κ_{ij} = λ_{κ,j}^{-1/2} e^κ_{ij}."""
    algebra._check_index(kappa, i, j)
    mats = algebra.zero_blocks()
    mats[kappa][i, j] = algebra.blocks[kappa].weights[j] ** -0.5
    return AlgebraElement(algebra, mats)


def gns_inner(algebra, a, b):
    """<a,b> = ψ(a* b); right-linear, conjugate-linear in the first slot."""
    if a.algebra != algebra or b.algebra != algebra:
        raise ShapeMismatch("elements do not belong to the given algebra")
    return complex(np.vdot(a.coords(), b.coords()))


def unit_coords(algebra):
    """Coordinates of 1_B in the orthonormal basis: λ^{1/2} on diagonals."""
    return AlgebraElement.unit(algebra).coords().real


def structure_tensors(algebra):
    """Multiplication m: B⊗B → B, unit vector η and the adjoint m★.

    All three are plain arrays in orthonormal coordinates; B⊗B coordinates
    are flattened row-major, so the (I,J) basis vector of B⊗B sits at I*d+J.
    """
    d = algebra.dim
    m = np.zeros((d, d * d))
    for kappa, n in enumerate(algebra.sizes):
        o = algebra.offsets[kappa]
        lam = np.asarray(algebra.blocks[kappa].weights)
        for i in range(n):
            for p in range(n):
                left = o + i * n + p
                for j in range(n):
                    # b^κ_{ip} b^κ_{pj} = λ_{κ,p}^{-1/2} b^κ_{ij}
                    m[o + i * n + j, left * d + (o + p * n + j)] = lam[p] ** -0.5
    eta = unit_coords(algebra)
    return m, eta, m.conj().T


def multiplication_gram(algebra):
    """mm★ as a matrix on B; diagonal with eigenvalue Tr(Q_κ^{-1}) per block."""
    m, _, mstar = structure_tensors(algebra)
    return m @ mstar


def block_inverse_traces(algebra):
    return tuple(
        float(np.sum(1.0 / np.asarray(b.weights))) for b in algebra.blocks
    )


def delta_form_check(algebra):
    """Return δ if Tr(Q_κ^{-1}) is the same for every block, else None."""
    traces = block_inverse_traces(algebra)
    scale = max(traces)
    if all(abs(t - traces[0]) <= algebra.tolerance * scale for t in traces):
        return traces[0]
    return None


@dataclass(frozen=True)
class ErgodicSummand:
    block_indices: tuple
    algebra: "MultiMatrixAlgebra" = field(compare=False)
    delta: float


def ergodic_decomposition(algebra):
    """Group blocks by Tr(Q_κ^{-1}) and renormalize each group's state.

    The groups are exactly the eigenspaces of mm★; each renormalized state
    is a δ_i-form, and summands come back sorted by δ_i ascending.
    """
    traces = block_inverse_traces(algebra)
    scale = max(traces)
    groups = []
    for kappa, t in enumerate(traces):
        for g in groups:
            if abs(t - g[0]) <= algebra.tolerance * scale:
                g[1].append(kappa)
                break
        else:
            groups.append((t, [kappa]))
    groups.sort(key=lambda g: g[0])

    summands = []
    for t, indices in groups:
        mass = sum(sum(algebra.blocks[k].weights) for k in indices)
        sub = MultiMatrixAlgebra(
            [
                Block(
                    algebra.blocks[k].size,
                    tuple(w / mass for w in algebra.blocks[k].weights),
                )
                for k in indices
            ],
            tolerance=algebra.tolerance,
        )
        # renormalizing weights by 1/mass scales Tr(Q_κ^{-1}) by mass
        summands.append(ErgodicSummand(tuple(indices), sub, t * mass))
    return summands


def modular_data(algebra):
    """The modular operator ∇_ψ and the modular flow t ↦ σ_t^ψ.

    ∇_ψ b^κ_{ij} = (λ_{κ,i}/λ_{κ,j}) b^κ_{ij};  σ_t scales by the same
    ratio to the power it.  σ_t is a ψ-preserving *-automorphism.
    """
    ratio = algebra.lam_row / algebra.lam_col
    nabla = np.diag(ratio)

    def sigma(t):
        return np.diag(ratio ** (1j * t))

    return nabla, sigma


def inverse_state(algebra, kappa):
    """Weights of ψ_κ^{-1}: proportional to λ^{-1}, normalized to sum 1."""
    algebra._check_index(kappa)
    inv = 1.0 / np.asarray(algebra.blocks[kappa].weights)
    return inv / inv.sum()


def star_matrix(algebra):
    """Matrix S with coords(a*) = S @ conj(coords(a)).

    (b^κ_{ij})* = (λ_{κ,i}/λ_{κ,j})^{1/2} b^κ_{ji}, so S carries coordinate
    (κ,i,j) to (κ,j,i) with that scale factor.
    """
    d = algebra.dim
    S = np.zeros((d, d))
    for kappa, n in enumerate(algebra.sizes):
        o = algebra.offsets[kappa]
        lam = np.asarray(algebra.blocks[kappa].weights)
        for i in range(n):
            for j in range(n):
                S[o + j * n + i, o + i * n + j] = (lam[i] / lam[j]) ** 0.5
    return S
