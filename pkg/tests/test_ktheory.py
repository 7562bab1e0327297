import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwreath.errors import MissingMarkedClass, UnknownPreset
from qwreath.ktheory import (
    FgAbelianGroup,
    MarkedClass,
    block_k_groups,
    direct_sum,
    int_det,
    preset_k_data,
    smith_normal_form,
    wreath_k_groups,
    wreath_k_groups_over_aut_plus,
)


int_matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-20, 20), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@given(int_matrices)
@settings(max_examples=200, deadline=None)
def test_smith_normal_form_properties(mat):
    U, D, V = smith_normal_form(mat)
    rows, cols = len(mat), len(mat[0])
    # unimodularity (also enforced internally, re-checked here)
    assert abs(int_det(U)) == 1
    assert abs(int_det(V)) == 1
    # D = U M V exactly over the integers (object dtype keeps Python ints,
    # so this cannot silently overflow)
    prod = np.array(U, dtype=object) @ np.array(mat, dtype=object) @ np.array(V, dtype=object)
    assert np.array_equal(prod, np.array(D, dtype=object))
    # divisibility chain on the diagonal, zeros trailing
    diag = [D[k][k] for k in range(min(rows, cols))]
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert all(x >= 0 for x in diag)
    # off-diagonal zero
    for r in range(rows):
        for c in range(cols):
            if r != c:
                assert D[r][c] == 0


def test_smith_normal_form_frozen_example():
    _, D, _ = smith_normal_form([[2, 4], [6, 8]])
    assert [D[0][0], D[1][1]] == [2, 4]


def test_fg_abelian_group_canonicals():
    assert FgAbelianGroup.free(3).canonical_form() == (3, ())
    assert FgAbelianGroup.cyclic(6).canonical_form() == (0, (6,))
    assert FgAbelianGroup(1, [(1,)]).canonical_form() == (0, ())
    g = FgAbelianGroup(2, [(2, 0), (0, 3)])
    # Z_2 + Z_3 = Z_6 in canonical form
    assert g.canonical_form() == (0, (6,))
    assert g.is_isomorphic(FgAbelianGroup.cyclic(6))
    assert g.render() == "Z_6"
    assert FgAbelianGroup.zero().render() == "0"
    assert direct_sum(
        FgAbelianGroup.free(2), FgAbelianGroup.cyclic(3)
    ).render() == "Z^2 + Z_3"


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=5), st.randoms())
@settings(max_examples=60, deadline=None)
def test_canonical_form_invariant_under_relation_order(rel_rows, rnd):
    g1 = FgAbelianGroup(3, rel_rows)
    shuffled = list(rel_rows)
    rnd.shuffle(shuffled)
    g2 = FgAbelianGroup(3, shuffled)
    assert g1.is_isomorphic(g2)


def test_presets():
    z3 = preset_k_data("z_s", 3)
    assert z3.k0.canonical_form() == (3, ())
    assert z3.k1.canonical_form() == (0, ())
    fd = preset_k_data("free_dual", 2)
    assert fd.k0.canonical_form() == (1, ())
    assert fd.k1.canonical_form() == (2, ())
    ap = preset_k_data("aut_plus", (3,))
    assert ap.k0.canonical_form() == (1, (3,))
    assert ap.k1.canonical_form() == (1, ())
    snp = preset_k_data("s_n_plus", 4)
    # N scalar blocks: free rank N^2-2N+2, torsion killed (gcd of sizes = 1)
    assert snp.k0.canonical_form() == (4 * 4 - 2 * 4 + 2, ())
    with pytest.raises(UnknownPreset):
        preset_k_data("nope")


@pytest.mark.parametrize("s", [1, 2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_wreath_groups_cyclic_base(s, n):
    k0, k1 = wreath_k_groups_over_aut_plus(preset_k_data("z_s", s), n)
    assert k0.is_isomorphic(
        FgAbelianGroup.free(s).direct_sum(FgAbelianGroup.cyclic(n))
    )
    assert k1.is_isomorphic(FgAbelianGroup.free(1))


@pytest.mark.parametrize("t", [1, 2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_wreath_groups_free_dual_base(t, n):
    k0, k1 = wreath_k_groups_over_aut_plus(preset_k_data("free_dual", t), n)
    assert k0.is_isomorphic(
        FgAbelianGroup.free(1).direct_sum(FgAbelianGroup.cyclic(n))
    )
    assert k1.is_isomorphic(FgAbelianGroup.free(t + 1))


def test_wreath_groups_sign_and_torsion_invariance():
    # explicit invariance across the undetermined data, not just via the
    # aggregating helper
    g = preset_k_data("z_s", 2)
    h = preset_k_data("aut_plus", (3,))
    results = []
    for beta in h.marked["[beta(e11)]"]:
        for sign in (1, -1):
            results.append(wreath_k_groups(g, h, (3,), [beta], sign))
    for k0, k1 in results[1:]:
        assert k0.is_isomorphic(results[0][0])
        assert k1.is_isomorphic(results[0][1])


def test_block_groups_need_marked_classes():
    g = preset_k_data("z_s", 2)
    h = preset_k_data("aut_plus", (3,))
    beta = h.marked["[beta(e11)]"][0]
    with pytest.raises(MissingMarkedClass):
        block_k_groups(g, h, 2, [beta])  # one class for two blocks
    g_bad = preset_k_data("z_s", 2)
    g_bad.marked = {}
    with pytest.raises(MissingMarkedClass):
        block_k_groups(g_bad, h, 1, [beta])


def test_multiblock_wreath_assembly():
    # two scalar blocks over the trivial base: the assembly must produce a
    # finitely generated group and identify the shared K0(H) images
    g = preset_k_data("trivial")
    h = preset_k_data("s_n_plus", 2)
    beta_candidates = [
        MarkedClass("[beta]", tuple(1 if k == 0 else 0 for k in range(h.k0.generators)))
    ] * 2
    k0, k1 = wreath_k_groups(g, h, (1, 1), beta_candidates)
    rank, factors = k0.canonical_form()
    assert rank >= 1
    assert k1.is_isomorphic(h.k1)
