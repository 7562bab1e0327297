"""Built-in cross-checks runnable from the command line.

Each check exercises one layer of the package against an independent
route (closed form vs exhaustive average, explicit tensors vs defining
equations, symbolic K-groups vs assembled presentations).  Results are
deterministic for a fixed seed.
"""

import numpy as np

from .errors import QwreathError
from .multimatrix import (
    AlgebraElement,
    delta_form_check,
    make_algebra,
    star_matrix,
    structure_tensors,
)
from .groups import sign_rep, symmetric_group, trivial_rep
from .actions import (
    cyclic_translation_dual_action,
    is_ergodic,
    is_two_ergodic,
    s3hat_fixtures,
    symmetric_coordinate_action,
    verify_coefficient_relations,
    zp_dichotomy_check,
)
from .haar import (
    MomentIndex,
    beta_kappa,
    brute_force_moment,
    cond_expectation,
    haar_first_moment,
    haar_second_moment,
    second_moment_table,
)
from .repcat import RepData, conjugate_data_u, wreath_conjugate, wreath_morphism_check
from .ktheory import (
    FgAbelianGroup,
    preset_k_data,
    smith_normal_form,
    wreath_k_groups_over_aut_plus,
)

DEFAULT_SEED = 1337


def _random_element(algebra, rng):
    coords = rng.normal(size=algebra.dim) + 1j * rng.normal(size=algebra.dim)
    return AlgebraElement.from_coords(algebra, coords)


def check_structure_tensors(seed):
    """Multiplication tensor, star matrix and state vector agree with the
    blockwise operations on random elements."""
    rng = np.random.default_rng(seed)
    algebra = make_algebra([(1, [1 / 6]), (2, [1 / 3, 1 / 2])])
    m, eta, _ = structure_tensors(algebra)
    st = star_matrix(algebra)
    worst = 0.0
    for _ in range(10):
        a = _random_element(algebra, rng)
        b = _random_element(algebra, rng)
        worst = max(
            worst,
            float(np.linalg.norm((a * b).coords() - m @ np.kron(a.coords(), b.coords()))),
            float(np.linalg.norm(a.star().coords() - st @ a.coords().conj())),
            abs(a.state_value() - complex(eta @ a.coords())),
        )
    return worst


def check_symmetric_moments(seed):
    """Closed-form degree-1/2 moments of the coordinate permutation action
    of S_3 match exhaustive averaging over the group."""
    action = symmetric_coordinate_action(3)
    algebra = action.algebra
    worst = 0.0
    table = second_moment_table(action)
    d = algebra.dim
    for r1 in range(d):
        for c1 in range(d):
            i1 = MomentIndex(0, 0, r1, 0, 0, c1)
            worst = max(
                worst,
                abs(haar_first_moment(action, i1) - brute_force_moment(action, [i1])),
            )
            for r2 in range(d):
                for c2 in range(d):
                    i2 = MomentIndex(0, 0, r2, 0, 0, c2)
                    closed = haar_second_moment(action, i1, i2)
                    oracle = brute_force_moment(action, [i1, i2])
                    worst = max(worst, abs(closed - oracle))
                    worst = max(worst, abs(table[r1 * d + r2, c1 * d + c2] - closed))
    return worst


def check_dual_moments(seed):
    """Moments of dual (convolution-model) coactions: degree-1 closed form
    against the convolution oracle on the grade-translation coaction of
    Z_3, and the degree-2 closed form on a 2-ergodic bundled fixture
    (only there does the rank-2 invariant projection give all moments)."""
    action = cyclic_translation_dual_action(3)
    if zp_dichotomy_check(action) != "regular":
        raise QwreathError("translation coaction not classified as regular")
    d = action.algebra.dim
    worst = 0.0
    for r1 in range(d):
        for c1 in range(d):
            i1 = MomentIndex(0, 0, r1, 0, 0, c1)
            closed = haar_first_moment(action, i1)
            worst = max(worst, abs(closed - brute_force_moment(action, [i1])))

    two_ergodic = [a for a in s3hat_fixtures() if is_two_ergodic(a)]
    if not two_ergodic:
        raise QwreathError("no 2-ergodic dual fixture available")
    action = two_ergodic[0]
    algebra = action.algebra
    rng = np.random.default_rng(seed)
    entries = [
        (kappa, i, j)
        for kappa, n in enumerate(algebra.sizes)
        for i in range(n)
        for j in range(n)
    ]
    for _ in range(40):
        (k1, i1, j1), (g1, a1, b1), (k2, i2, j2), (g2, a2, b2) = (
            entries[rng.integers(len(entries))] for _ in range(4)
        )
        idx1 = MomentIndex(i1, j1, k1, a1, b1, g1)
        idx2 = MomentIndex(i2, j2, k2, a2, b2, g2)
        closed = haar_second_moment(action, idx1, idx2)
        oracle = brute_force_moment(action, [idx1, idx2])
        worst = max(worst, abs(closed - oracle))
    return worst


def check_conditional_expectation(seed):
    """E_kappa inverts the block embedding on random elements."""
    rng = np.random.default_rng(seed)
    action = symmetric_coordinate_action(3)
    algebra = action.algebra
    worst = 0.0
    for _ in range(5):
        a = _random_element(algebra, rng)
        for kappa in range(len(algebra.sizes)):
            back = cond_expectation(action, kappa, beta_kappa(action, kappa, a))
            worst = max(worst, float(np.linalg.norm(back.coords() - a.coords())))
    return worst


def check_conjugate_pairs(seed):
    """Conjugate equations for the defining pair and an induced pair."""
    algebra = make_algebra([(1, [1 / 5]), (2, [2 / 5, 2 / 5])])
    rep_u = conjugate_data_u(algebra)
    delta = delta_form_check(algebra)
    worst = rep_u.pair.residual
    worst = max(worst, abs(rep_u.dim_q - delta))
    v = RepData(2, (2.0, 0.5))
    rep_v = wreath_conjugate(v, algebra)
    worst = max(worst, rep_v.residual)
    worst = max(worst, abs(rep_v.norm_sq_v - v.q_trace() * delta))
    return worst


def check_relation_fixtures(seed):
    """Coefficient relations and ergodicity across the bundled fixtures."""
    worst = 0.0
    for action in s3hat_fixtures():
        if not is_ergodic(action):
            raise QwreathError("bundled dual fixture is not ergodic")
        worst = max(worst, verify_coefficient_relations(action).max_residual())
    worst = max(
        worst,
        verify_coefficient_relations(symmetric_coordinate_action(3)).max_residual(),
    )
    return worst


def check_morphism(seed):
    """sign x sign -> trivial survives the finite quotient model."""
    s3 = symmetric_group(3)
    v = sign_rep(s3)
    t = trivial_rep(s3)
    h = symmetric_coordinate_action(2)
    report = wreath_morphism_check(np.array([[1.0]]), v, v, t, h)
    return max(report["intertwiner_residual"], report["quotient_model_residual"])


def check_ktheory(seed):
    """Assembled K-group presentations match the symbolic answers, and
    Smith normal form round-trips on random integer matrices."""
    rng = np.random.default_rng(seed)
    for s in (1, 2, 3):
        for n in (2, 3, 4):
            k0, k1 = wreath_k_groups_over_aut_plus(preset_k_data("z_s", s), n)
            want_k0 = FgAbelianGroup.free(s).direct_sum(FgAbelianGroup.cyclic(n))
            if not (k0.is_isomorphic(want_k0) and k1.is_isomorphic(FgAbelianGroup.free(1))):
                raise QwreathError(f"wrong K-groups for (s={s}, N={n})")
    for _ in range(20):
        rows, cols = rng.integers(1, 7, size=2)
        mat = rng.integers(-9, 10, size=(rows, cols)).tolist()
        smith_normal_form(mat)  # verifies |det U|=|det V|=1 and D=UMV itself
    return 0.0


CHECKS = [
    ("structure-tensors", check_structure_tensors),
    ("symmetric-moments", check_symmetric_moments),
    ("dual-moments", check_dual_moments),
    ("conditional-expectation", check_conditional_expectation),
    ("conjugate-pairs", check_conjugate_pairs),
    ("relation-fixtures", check_relation_fixtures),
    ("wreath-morphism", check_morphism),
    ("ktheory", check_ktheory),
]


def run_selftest(seed=DEFAULT_SEED, tolerance=1e-9):
    checks = []
    ok = True
    for name, fn in CHECKS:
        try:
            worst = fn(seed)
            passed = worst <= 1e3 * tolerance
            detail = f"max residual {worst:.3e}"
        except QwreathError as exc:
            passed = False
            detail = str(exc)
        ok = ok and passed
        checks.append(
            {"name": name, "status": "pass" if passed else "fail", "detail": detail}
        )
    return {
        "command": "selftest",
        "seed": seed,
        "status": "pass" if ok else "fail",
        "checks": checks,
    }
