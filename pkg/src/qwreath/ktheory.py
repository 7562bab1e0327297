"""Exact integer arithmetic for finitely generated abelian groups and the
K-group recipes for free wreath products over quantum automorphism groups.

Everything here uses arbitrary-precision Python integers; there is no
tolerance anywhere in this module.
"""

from dataclasses import dataclass
from math import gcd

from .errors import (
    ClassificationFailed,
    MissingMarkedClass,
    ShapeMismatch,
    UnknownPreset,
)


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def int_det(matrix):
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def smith_normal_form(matrix):
    """Exact Smith normal form: returns (U, D, V) with D = U·M·V, U and V
    unimodular, and the diagonal of D a divisibility chain d1 | d2 | ...

    The unimodularity of U and V is verified by computing their exact
    determinants.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    a = [[int(x) for x in row] for row in matrix]
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, factor):
        a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + factor * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, factor):
        for row in a:
            row[dst] += factor * row[src]
        for row in V:
            row[dst] += factor * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(rows, cols):
        # find a pivot of smallest absolute value in the remaining block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear column t first; a nonzero remainder becomes the new,
            # strictly smaller pivot and the clearing restarts at once
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            # column t is zero below the pivot, so these column operations
            # touch no other row (no fill-in, no coefficient blow-up)
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # make the pivot divide every remaining entry
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    for check in (U, V):
        if abs(int_det(check)) != 1:
            raise ClassificationFailed("transformation matrix is not unimodular")
    product = _matmul(_matmul(U, [[int(x) for x in row] for row in matrix]), V)
    if product != a:
        raise ClassificationFailed("Smith normal form postcondition D = UMV failed")
    return U, a, V


@dataclass(frozen=True)
class MarkedClass:
    """A distinguished K0 element in generator coordinates."""

    label: str
    coords: tuple

    def shifted(self, offset, total):
        out = [0] * total
        for k, c in enumerate(self.coords):
            out[offset + k] = c
        return tuple(out)


class FgAbelianGroup:
    """Z^n modulo the subgroup generated by integer relation rows."""

    def __init__(self, generators, relations=()):
        if generators < 0:
            raise ShapeMismatch("generator count must be nonnegative")
        self.generators = generators
        rels = []
        for row in relations:
            row = tuple(int(x) for x in row)
            if len(row) != generators:
                raise ShapeMismatch("relation length must match generator count")
            rels.append(row)
        self.relations = tuple(rels)
        self._canonical = None

    @classmethod
    def free(cls, rank):
        return cls(rank)

    @classmethod
    def zero(cls):
        return cls(0)

    @classmethod
    def cyclic(cls, n):
        return cls(1, [(n,)])

    def canonical_form(self):
        """(free rank, invariant factors d1 | d2 | ... with each di >= 2)."""
        if self._canonical is None:
            if not self.relations:
                self._canonical = (self.generators, ())
            else:
                _, d, _ = smith_normal_form([list(r) for r in self.relations])
                diag = [
                    d[k][k]
                    for k in range(min(len(d), self.generators))
                    if d[k][k] != 0
                ]
                self._canonical = (
                    self.generators - len(diag),
                    tuple(x for x in diag if x >= 2),
                )
        return self._canonical

    def free_rank(self):
        return self.canonical_form()[0]

    def invariant_factors(self):
        return self.canonical_form()[1]

    def is_isomorphic(self, other):
        return self.canonical_form() == other.canonical_form()

    def direct_sum(self, other):
        n1, n2 = self.generators, other.generators
        rels = [r + (0,) * n2 for r in self.relations]
        rels += [(0,) * n1 + r for r in other.relations]
        return FgAbelianGroup(n1 + n2, rels)

    def quotient_by(self, classes):
        rows = []
        for c in classes:
            coords = c.coords if isinstance(c, MarkedClass) else tuple(c)
            if len(coords) != self.generators:
                raise ShapeMismatch(
                    f"class of length {len(coords)} in a group with "
                    f"{self.generators} generators"
                )
            rows.append(coords)
        return FgAbelianGroup(self.generators, list(self.relations) + rows)

    def render(self):
        rank, factors = self.canonical_form()
        parts = []
        if rank == 1:
            parts.append("Z")
        elif rank > 1:
            parts.append(f"Z^{rank}")
        parts.extend(f"Z_{d}" for d in factors)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FgAbelianGroup({self.render()})"


def direct_sum(*groups):
    out = FgAbelianGroup.zero()
    for g in groups:
        out = out.direct_sum(g)
    return out


@dataclass
class KData:
    """K-theory data of one compact quantum group: both K-groups plus
    marked classes in K0 generator coordinates."""

    k0: FgAbelianGroup
    k1: FgAbelianGroup
    marked: dict


def preset_k_data(name, param=None):
    """Built-in K-theory data.

    - "trivial": the trivial group.
    - "z_s", param s: the cyclic group of order s; [1] = sum of the
      minimal projections.
    - "free_dual", param t: the dual of the free group on t generators.
    - "aut_plus", param (N1,...,NK): the quantum automorphism group of a
      multimatrix algebra with the given block sizes and a δ-form state.
      For a single block of size N, the marked class generating the free
      part of K0 is known only up to its torsion coordinate, so all N
      candidates are listed.
    - "s_n_plus", param N: the quantum permutation group (same groups as
      "aut_plus" with N scalar blocks).
    """
    if name == "trivial":
        k0 = FgAbelianGroup.free(1)
        return KData(k0, FgAbelianGroup.zero(), {"[1]": MarkedClass("[1]", (1,))})
    if name == "z_s":
        s = int(param)
        if s < 1:
            raise UnknownPreset("z_s needs a positive order")
        k0 = FgAbelianGroup.free(s)
        return KData(
            k0, FgAbelianGroup.zero(), {"[1]": MarkedClass("[1]", (1,) * s)}
        )
    if name == "free_dual":
        t = int(param)
        if t < 0:
            raise UnknownPreset("free_dual needs a nonnegative rank")
        return KData(
            FgAbelianGroup.free(1),
            FgAbelianGroup.free(t),
            {"[1]": MarkedClass("[1]", (1,))},
        )
    if name == "s_n_plus":
        return preset_k_data("aut_plus", (1,) * int(param))
    if name == "aut_plus":
        sizes = tuple(int(n) for n in param)
        if not sizes or any(n < 1 for n in sizes):
            raise UnknownPreset("aut_plus needs positive block sizes")
        K = len(sizes)
        d = 0
        for n in sizes:
            d = gcd(d, n)
        free = K * K - 2 * K + 2
        torsion = 2 * K - 1
        n_gen = free + torsion
        rels = [
            tuple(d if j == free + k else 0 for j in range(n_gen))
            for k in range(torsion)
        ]
        k0 = FgAbelianGroup(n_gen, rels)
        marked = {}
        if K == 1:
            # single block of size N: K0 = Z ⊕ Z_N; the class of the image
            # of a minimal projection under the coaction generates the free
            # part, with an undetermined torsion coordinate
            marked["[beta(e11)]"] = [
                MarkedClass("[beta(e11)]", (1, t)) for t in range(max(d, 1))
            ]
        return KData(k0, FgAbelianGroup.free(1), marked)
    raise UnknownPreset(f"unknown preset {name!r}")


def block_k_groups(g_data, h_data, num_blocks, beta_classes, sign=1):
    """K-groups of one block algebra of the free wreath product with a
    trivial amalgam.

    K1 is the direct sum K1(G)^{⊕K} ⊕ K1(H).  K0 is the direct sum
    K0(G)^{⊕K} ⊕ K0(H) modulo one relation per block γ identifying the
    class of a minimal projection of block γ (the unit class of the γ-th
    copy of K0(G)) with the supplied class of its image under the
    coaction inside K0(H).  `sign` = ±1 selects the relative sign of the
    two sides; the results are invariant under it.
    """
    if "[1]" not in g_data.marked:
        raise MissingMarkedClass("need the class [1] in the K0 data of G")
    if len(beta_classes) != num_blocks:
        raise MissingMarkedClass("need one coaction image class per block")
    n_g = g_data.k0.generators
    n_h = h_data.k0.generators
    total = num_blocks * n_g + n_h

    k0 = FgAbelianGroup(
        total, _stacked_relations(g_data.k0, num_blocks, h_data.k0)
    )
    unit = g_data.marked["[1]"]
    relations = []
    for gamma in range(num_blocks):
        row = list(unit.shifted(gamma * n_g, total))
        beta = beta_classes[gamma]
        if len(beta.coords) != n_h:
            raise MissingMarkedClass(
                "coaction image class length must match the K0 data of H"
            )
        for k, c in enumerate(beta.coords):
            row[num_blocks * n_g + k] -= sign * c
        relations.append(tuple(row))
    k0 = k0.quotient_by(relations)

    k1 = direct_sum(*([g_data.k1] * num_blocks), h_data.k1)
    return k0, k1


def _stacked_relations(g_k0, copies, h_k0):
    n_g = g_k0.generators
    n_h = h_k0.generators
    total = copies * n_g + n_h
    rels = []
    for c in range(copies):
        for r in g_k0.relations:
            row = [0] * total
            row[c * n_g:(c + 1) * n_g] = list(r)
            rels.append(tuple(row))
    for r in h_k0.relations:
        row = [0] * total
        row[copies * n_g:] = list(r)
        rels.append(tuple(row))
    return rels


def wreath_k_groups(g_data, h_data, block_sizes, beta_classes, sign=1,
                    cross_images=None):
    """K-groups of the full free wreath product with trivial amalgam.

    The block groups are assembled into a direct sum and, when the base
    algebra has more than one block, the images of the K0(H) generators
    in the different block groups are identified.  With a single block no
    identification is needed.  `cross_images` optionally overrides the
    default coordinate inclusion of K0(H) into each block group.
    """
    K = len(block_sizes)
    k0_block, k1_block = block_k_groups(g_data, h_data, K, beta_classes, sign)
    n_block = k0_block.generators
    n_g = g_data.k0.generators
    n_h = h_data.k0.generators

    k0 = direct_sum(*([k0_block] * K))
    if K > 1:
        if cross_images is None:
            # default: K0(H) sits in each block group as the trailing
            # coordinates (the H-part of the direct sum before quotient)
            cross_images = [
                [
                    MarkedClass(
                        f"[h{j}]",
                        tuple(
                            1 if c == K * n_g + j else 0 for c in range(n_block)
                        ),
                    )
                    for j in range(n_h)
                ]
                for _ in range(K)
            ]
        relations = []
        for kappa in range(K - 1):
            for j in range(n_h):
                row = [0] * (K * n_block)
                left = cross_images[kappa][j]
                right = cross_images[kappa + 1][j]
                for c, x in enumerate(left.coords):
                    row[kappa * n_block + c] += x
                for c, x in enumerate(right.coords):
                    row[(kappa + 1) * n_block + c] -= x
                relations.append(tuple(row))
        k0 = k0.quotient_by(relations)

    k1 = direct_sum(h_data.k1, *([g_data.k1] * (K * K)))
    return k0, k1


def wreath_k_groups_over_aut_plus(g_data, block_size):
    """K-groups of (G wreath the quantum automorphism group of one matrix
    block of the given size).

    The torsion coordinate of the coaction-image class is undetermined,
    so the computation runs over every candidate and both relation signs
    and insists the answers agree.
    """
    h_data = preset_k_data("aut_plus", (block_size,))
    candidates = h_data.marked["[beta(e11)]"]
    results = []
    for beta in candidates:
        for sign in (1, -1):
            results.append(wreath_k_groups(g_data, h_data, (block_size,), [beta], sign))
    first_k0, first_k1 = results[0]
    for k0, k1 in results[1:]:
        if not (k0.is_isomorphic(first_k0) and k1.is_isomorphic(first_k1)):
            raise ClassificationFailed(
                "K-groups depend on the undetermined torsion coordinate"
            )
    return first_k0, first_k1
