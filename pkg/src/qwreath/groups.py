"""Finite groups as explicit multiplication tables, plus unitary matrix
representations used by the classical-action and wreath-morphism code."""

import itertools

import numpy as np

from .errors import NotHomomorphism, ShapeMismatch


class FiniteGroup:
    """Group elements are indices 0..order-1 into a multiplication table.

    table[a][b] is the index of (element a) * (element b).  Associativity,
    an identity and inverses are all checked at construction; these groups
    are tiny so the cubic check is cheap.
    """

    def __init__(self, table, names=None):
        table = np.asarray(table, dtype=int)
        n = table.shape[0]
        if table.shape != (n, n) or n < 1:
            raise ShapeMismatch("multiplication table must be square and nonempty")
        if table.min() < 0 or table.max() >= n:
            raise ShapeMismatch("table entries must be element indices")
        self.table = table
        self.order = n

        identity = None
        for e in range(n):
            if all(table[e, x] == x and table[x, e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise ShapeMismatch("multiplication table has no identity element")
        self.identity = identity

        inverse = np.full(n, -1, dtype=int)
        for a in range(n):
            for b in range(n):
                if table[a, b] == identity and table[b, a] == identity:
                    inverse[a] = b
                    break
            if inverse[a] < 0:
                raise ShapeMismatch(f"element {a} has no inverse")
        self.inverse = inverse

        for a in range(n):
            for b in range(n):
                if not np.array_equal(table[table[a, b]], table[a][table[b]]):
                    raise ShapeMismatch("multiplication table is not associative")

        self.names = tuple(names) if names is not None else tuple(str(k) for k in range(n))
        if len(self.names) != n:
            raise ShapeMismatch("need one name per element")

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def subgroup_generated(self, generators):
        seen = {self.identity}
        frontier = list(set(generators) | {self.identity})
        while frontier:
            x = frontier.pop()
            for g in generators:
                for y in (self.mul(x, g), self.mul(g, x)):
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return seen

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def trivial_group():
    return FiniteGroup([[0]], names=["e"])


def cyclic_group(n):
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, names=[f"g{k}" for k in range(n)])


def symmetric_group(n):
    """S_n with elements listed in lexicographic order of image tuples.

    A permutation p acts as i ↦ p[i]; the product is composition,
    (p*q)[i] = p[q[i]].
    """
    elements = sorted(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(elements)}
    table = [
        [index[tuple(p[q[i]] for i in range(n))] for q in elements]
        for p in elements
    ]
    group = FiniteGroup(table, names=["".join(map(str, p)) for p in elements])
    group.permutations = elements
    return group


def direct_product(g1, g2):
    n1, n2 = g1.order, g2.order
    table = [
        [
            (g1.mul(a1, b1)) * n2 + g2.mul(a2, b2)
            for b1 in range(n1)
            for b2 in range(n2)
        ]
        for a1 in range(n1)
        for a2 in range(n2)
    ]
    names = [
        f"({g1.names[a1]},{g2.names[a2]})" for a1 in range(n1) for a2 in range(n2)
    ]
    return FiniteGroup(table, names=names)


class GroupRep:
    """A unitary representation: one matrix per group element."""

    def __init__(self, group, matrices, tolerance=1e-9):
        self.group = group
        mats = [np.asarray(m, dtype=complex) for m in matrices]
        if len(mats) != group.order:
            raise ShapeMismatch("need one matrix per group element")
        d = mats[0].shape[0]
        for m in mats:
            if m.shape != (d, d):
                raise ShapeMismatch("representation matrices must share one square shape")
        self.dim = d
        self.matrices = mats
        self.tolerance = tolerance

        eye = np.eye(d)
        for m in mats:
            if np.linalg.norm(m.conj().T @ m - eye) > tolerance * max(1.0, d):
                raise NotHomomorphism("representation matrix is not unitary")
        for a in range(group.order):
            for b in range(group.order):
                resid = np.linalg.norm(mats[group.mul(a, b)] - mats[a] @ mats[b])
                if resid > tolerance * max(1.0, d):
                    raise NotHomomorphism(
                        f"v(ab) != v(a)v(b) for elements ({a},{b}), residual {resid:.3e}"
                    )

    def __repr__(self):
        return f"GroupRep(dim={self.dim}, group_order={self.group.order})"


def trivial_rep(group):
    return GroupRep(group, [np.eye(1)] * group.order)


def sign_rep(sym_group):
    """One-dimensional sign character of a symmetric_group value."""
    mats = []
    for p in sym_group.permutations:
        sgn = 1
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if p[i] > p[j]:
                    sgn = -sgn
        mats.append(np.array([[float(sgn)]]))
    return GroupRep(sym_group, mats)


def cyclic_character(cyc_group, k):
    """The character g ↦ exp(2πi k g / n) of cyclic_group(n)."""
    n = cyc_group.order
    return GroupRep(
        cyc_group,
        [np.array([[np.exp(2j * np.pi * k * a / n)]]) for a in range(n)],
    )


def permutation_rep(sym_group):
    """The natural n-dimensional permutation representation of S_n."""
    n = len(sym_group.permutations[0])
    mats = []
    for p in sym_group.permutations:
        m = np.zeros((n, n))
        for i in range(n):
            m[p[i], i] = 1.0
        mats.append(m)
    return GroupRep(sym_group, mats)


def standard_rep(sym_group):
    """The (n-1)-dimensional complement of the fixed vector inside the
    permutation representation, in a fixed orthonormal basis."""
    n = len(sym_group.permutations[0])
    perm = permutation_rep(sym_group)
    # orthonormal basis of the complement of (1,...,1)/sqrt(n), fixed once
    basis = np.linalg.qr(
        np.column_stack([np.ones(n) / np.sqrt(n), np.eye(n)[:, : n - 1]])
    )[0][:, 1:]
    return GroupRep(sym_group, [basis.conj().T @ m @ basis for m in perm.matrices])


def tensor_rep(rep1, rep2):
    if rep1.group is not rep2.group:
        raise ShapeMismatch("tensor factors must share the same group")
    return GroupRep(
        rep1.group,
        [np.kron(a, b) for a, b in zip(rep1.matrices, rep2.matrices)],
    )


def rep_morphism_space(rep_from, rep_to, tolerance=1e-9):
    """Orthonormal basis of {T : T v(g) = w(g) T for all g}.

    Computed as the fixed space of the averaged operator
    T ↦ mean_g w(g) T v(g)*, via the nullspace of (Φ - I).
    """
    if rep_from.group is not rep_to.group:
        raise ShapeMismatch("representations must share the same group")
    dk, dl = rep_from.dim, rep_to.dim
    phi = np.zeros((dl * dk, dl * dk), dtype=complex)
    for a, b in zip(rep_to.matrices, rep_from.matrices):
        phi += np.kron(a, b.conj())
    phi /= rep_from.group.order
    _, svals, vh = np.linalg.svd(phi - np.eye(dl * dk))
    cutoff = 1e3 * tolerance * max(1.0, svals[0] if len(svals) else 0.0)
    basis = vh[svals <= cutoff].conj()
    return [vec.reshape(dl, dk) for vec in basis]
