"""Command-line interface.

Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.
Reports are byte-stable for fixed inputs and seed; wall-clock timings are
only added behind --timings so the default output stays reproducible.
The QWREATH_TOLERANCE environment variable overrides the default
tolerance for descriptors that do not pin their own.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from .errors import ParseError, QwreathError, UsageError
from .multimatrix import (
    DEFAULT_TOLERANCE,
    delta_form_check,
    ergodic_decomposition,
)
from .groups import (
    cyclic_character,
    cyclic_group,
    permutation_rep,
    sign_rep,
    standard_rep,
    symmetric_group,
    trivial_rep,
)
from .actions import (
    is_ergodic,
    is_faithful,
    is_two_ergodic,
    symmetric_coordinate_action,
    verify_coefficient_relations,
)
from .haar import (
    MomentIndex,
    brute_force_moment,
    haar_first_moment,
    haar_projection,
    second_moment_table,
)
from .repcat import RepData, conjugate_data_u, wreath_conjugate, wreath_morphism_check
from .ktheory import preset_k_data, wreath_k_groups_over_aut_plus, block_k_groups
from .descriptors import (
    _require_keys,
    load_json,
    parse_action,
    parse_algebra,
    parse_matrix,
)
from .selftest import DEFAULT_SEED, run_selftest


def _env_tolerance():
    raw = os.environ.get("QWREATH_TOLERANCE")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"QWREATH_TOLERANCE must be a number, got {raw!r}")
    if tol <= 0:
        raise UsageError("QWREATH_TOLERANCE must be positive")
    return tol


def _inject_tolerance(obj, tolerance):
    """Descriptors without an explicit tolerance inherit the session one."""
    if isinstance(obj, dict):
        target = obj.get("algebra") if "kind" in obj else obj
        if isinstance(target, dict) and "tolerance" not in target:
            target["tolerance"] = tolerance
    return obj


def _load_algebra(path, tolerance):
    return parse_algebra(_inject_tolerance(load_json(path), tolerance))


def _load_action(path, tolerance):
    obj = _inject_tolerance(load_json(path), tolerance)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("expected an action descriptor with a 'kind' key")
    return parse_action(obj)


def _load_source(path, tolerance):
    obj = _inject_tolerance(load_json(path), tolerance)
    if isinstance(obj, dict) and "kind" in obj:
        return parse_action(obj)
    return parse_algebra(obj)


def _emit(report, args):
    if args.timings:
        report["elapsed_s"] = round(time.perf_counter() - args.t0, 3)
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in _render_text(report):
            print(line)
    return 0 if report.get("status", "pass") == "pass" else 1


def _render_text(report):
    lines = []
    for key in sorted(report):
        if key == "checks":
            for chk in report["checks"]:
                lines.append(f"  [{chk['status']}] {chk['name']}: {chk['detail']}")
        else:
            lines.append(f"{key} = {report[key]}")
    return lines


# ---------------------------------------------------------------- algebra


def cmd_algebra_check(args):
    algebra = _load_algebra(args.descriptor, args.tolerance)
    delta = delta_form_check(algebra)
    summands = [
        {"blocks": list(s.block_indices), "delta": s.delta}
        for s in ergodic_decomposition(algebra)
    ]
    report = {
        "command": "algebra check",
        "dim": algebra.dim,
        "block_sizes": list(algebra.sizes),
        "delta_form": delta,
        "summands": summands,
        "status": "pass",
    }
    return _emit(report, args)


# ----------------------------------------------------------------- action


def cmd_action_verify(args):
    action = _load_action(args.descriptor, args.tolerance)
    relations = verify_coefficient_relations(action)
    worst = relations.max_residual()
    ok = worst <= 1e3 * action.algebra.tolerance
    report = {
        "command": "action verify",
        "kind": action.kind,
        "group_order": action.group.order,
        "ergodic": is_ergodic(action),
        "two_ergodic": is_two_ergodic(action),
        "faithful": is_faithful(action),
        "relation_residual": worst,
        "status": "pass" if ok else "fail",
    }
    return _emit(report, args)


# ------------------------------------------------------------------- haar


def _diagonal_indices(algebra):
    out = []
    for kappa, n in enumerate(algebra.sizes):
        for i in range(n):
            for j in range(n):
                out.append((kappa, i, j))
    return out


def cmd_haar_moments(args):
    source = _load_source(args.descriptor, args.tolerance)
    action = source if hasattr(source, "algebra") else None
    algebra = source.algebra if action is not None else source
    tol = algebra.tolerance
    d = algebra.dim
    report = {"command": "haar moments", "degree": args.degree, "dim": d}

    if args.degree == 1:
        worst = 0.0
        for k1, i1, j1 in _diagonal_indices(algebra):
            for k2, i2, j2 in _diagonal_indices(algebra):
                idx = MomentIndex(i1, j1, k1, i2, j2, k2)
                closed = haar_first_moment(source, idx)
                if args.oracle and action is not None:
                    worst = max(worst, abs(closed - brute_force_moment(action, [idx])))
        report["oracle_deviation"] = worst if args.oracle else None
        report["status"] = "pass" if worst <= 1e3 * tol else "fail"
        return _emit(report, args)

    table = second_moment_table(source)
    proj = haar_projection(source)
    internal = float(np.max(np.abs(table - proj)))
    worst = 0.0
    if args.oracle:
        if action is None:
            raise UsageError("--oracle needs an action descriptor, not a bare algebra")
        rng = np.random.default_rng(args.seed)
        entries = _diagonal_indices(algebra)
        for _ in range(min(64, len(entries) ** 2)):
            k1, i1, j1 = entries[rng.integers(len(entries))]
            k2, i2, j2 = entries[rng.integers(len(entries))]
            g1, a1, b1 = entries[rng.integers(len(entries))]
            g2, a2, b2 = entries[rng.integers(len(entries))]
            idx1 = MomentIndex(i1, j1, k1, a1, b1, g1)
            idx2 = MomentIndex(i2, j2, k2, a2, b2, g2)
            closed = table[
                idx1.row(algebra) * d + idx2.row(algebra),
                idx1.col(algebra) * d + idx2.col(algebra),
            ]
            worst = max(worst, abs(closed - brute_force_moment(action, [idx1, idx2])))
    report["projection_deviation"] = internal
    report["oracle_deviation"] = worst if args.oracle else None
    ok = internal <= 1e3 * tol and worst <= 1e3 * tol
    report["status"] = "pass" if ok else "fail"
    return _emit(report, args)


# -------------------------------------------------------------------- rep


def cmd_rep_conjugate(args):
    source = _load_source(args.descriptor, args.tolerance)
    algebra = source.algebra if hasattr(source, "algebra") else source
    rep_u = conjugate_data_u(source)
    report = {
        "command": "rep conjugate",
        "residual": rep_u.pair.residual,
        "standardness_residual": rep_u.standardness_residual,
        "dim_q": rep_u.dim_q,
        "status": "pass",
    }
    if args.rep_dim is not None:
        q = (
            tuple(float(x) for x in args.rep_q.split(","))
            if args.rep_q
            else (1.0,) * args.rep_dim
        )
        if len(q) != args.rep_dim:
            raise UsageError("--rep-q must list one weight per --rep-dim")
        induced = wreath_conjugate(RepData(args.rep_dim, q), algebra)
        report["induced_residual"] = induced.residual
        report["induced_dim_q"] = induced.dim_q
        report["induced_norm_sq"] = induced.norm_sq_v
    return _emit(report, args)


_GROUPS = {
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "s2": lambda: symmetric_group(2),
    "s3": lambda: symmetric_group(3),
    "s4": lambda: symmetric_group(4),
}

_H_FIXTURES = {
    "s2_c2": lambda: symmetric_coordinate_action(2),
    "s3_c3": lambda: symmetric_coordinate_action(3),
}


def _parse_rep(rep_spec, group, pointer):
    if isinstance(rep_spec, str):
        if rep_spec == "trivial":
            return trivial_rep(group)
        if rep_spec == "sign":
            return sign_rep(group)
        if rep_spec == "standard":
            return standard_rep(group)
        if rep_spec == "permutation":
            return permutation_rep(group)
        raise ParseError(f"unknown representation {rep_spec!r}", pointer)
    _require_keys(rep_spec, pointer, required=("character",))
    return cyclic_character(group, int(rep_spec["character"]))


def cmd_rep_morphism_check(args):
    obj = load_json(args.case)
    _require_keys(obj, "", required=("group", "v", "w", "t", "s", "h_action"))
    gname = obj["group"]
    if gname not in _GROUPS:
        raise ParseError(f"unknown group {gname!r}", "/group")
    group = _GROUPS[gname]()
    v = _parse_rep(obj["v"], group, "/v")
    w = _parse_rep(obj["w"], group, "/w")
    t = _parse_rep(obj["t"], group, "/t")
    S = parse_matrix(obj["s"], "/s")
    h_raw = obj["h_action"]
    if isinstance(h_raw, str):
        if h_raw not in _H_FIXTURES:
            raise ParseError(f"unknown bundled action {h_raw!r}", "/h_action")
        h_action = _H_FIXTURES[h_raw]()
    else:
        h_action = parse_action(
            _inject_tolerance(h_raw, args.tolerance), "/h_action"
        )
    result = wreath_morphism_check(S, v, w, t, h_action, tolerance=args.tolerance)
    report = {
        "command": "rep morphism-check",
        "intertwiner_residual": result["intertwiner_residual"],
        "quotient_model_residual": result["quotient_model_residual"],
        "status": "pass",
    }
    return _emit(report, args)


# ---------------------------------------------------------------- ktheory


def parse_preset(text, role):
    """Preset syntax: "trivial", "z_s:3", "free_dual:2", "s_n_plus:4",
    "aut_plus:M3", "aut_plus:2,3"."""
    name, _, param = text.partition(":")
    try:
        if name == "trivial":
            return preset_k_data("trivial"), None
        if name in ("z_s", "free_dual", "s_n_plus"):
            return preset_k_data(name, int(param)), None
        if name == "aut_plus":
            if param.upper().startswith("M"):
                sizes = (int(param[1:]),)
            else:
                sizes = tuple(int(x) for x in param.split(","))
            return preset_k_data("aut_plus", sizes), sizes
    except ValueError:
        raise UsageError(f"bad preset parameter in {text!r}")
    raise UsageError(f"unknown {role} preset {text!r}")


def cmd_ktheory_wreath(args):
    g_data, _ = parse_preset(args.g, "--g")
    h_data, sizes = parse_preset(args.h, "--h")
    if sizes is None or len(sizes) != 1:
        raise UsageError(
            "the wreath computation supports --h aut_plus:MN (one matrix block)"
        )
    k0, k1 = wreath_k_groups_over_aut_plus(g_data, sizes[0])
    report = {
        "command": "ktheory wreath",
        "g": args.g,
        "h": args.h,
        "k0": k0.render(),
        "k1": k1.render(),
        "status": "pass",
    }
    if args.json:
        return _emit(report, args)
    print(f"K0 = {k0.render()}, K1 = {k1.render()}")
    return 0


def cmd_ktheory_block(args):
    g_data, _ = parse_preset(args.g, "--g")
    h_data, sizes = parse_preset(args.h, "--h")
    if sizes is None or len(sizes) != 1:
        raise UsageError(
            "the block computation supports --h aut_plus:MN (one matrix block)"
        )
    candidates = h_data.marked["[beta(e11)]"]
    results = [
        block_k_groups(g_data, h_data, 1, [beta], args.sign) for beta in candidates
    ]
    k0, k1 = results[0]
    for other_k0, other_k1 in results[1:]:
        if not (k0.is_isomorphic(other_k0) and k1.is_isomorphic(other_k1)):
            raise QwreathError("block K-groups depend on the torsion candidate")
    report = {
        "command": "ktheory block",
        "g": args.g,
        "h": args.h,
        "sign": args.sign,
        "k0": k0.render(),
        "k1": k1.render(),
        "status": "pass",
    }
    if args.json:
        return _emit(report, args)
    print(f"K0 = {k0.render()}, K1 = {k1.render()}")
    return 0


# --------------------------------------------------------------- selftest


def cmd_selftest(args):
    report = run_selftest(seed=args.seed, tolerance=args.tolerance)
    return _emit(report, args)


# ------------------------------------------------------------------- main


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qwreath",
        description="Finite-dimensional computations for free wreath products.",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument(
        "--timings", action="store_true", help="add wall-clock time to the report"
    )
    top = parser.add_subparsers(dest="topic", required=True)

    algebra = top.add_parser("algebra").add_subparsers(dest="verb", required=True)
    p = algebra.add_parser("check", help="validate a multimatrix descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_algebra_check)

    action = top.add_parser("action").add_subparsers(dest="verb", required=True)
    p = action.add_parser("verify", help="validate an action descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_action_verify)

    haar = top.add_parser("haar").add_subparsers(dest="verb", required=True)
    p = haar.add_parser("moments", help="Haar moments of the coefficients")
    p.add_argument("descriptor")
    p.add_argument("--degree", type=int, choices=(1, 2), default=2)
    p.add_argument("--oracle", action="store_true", help="compare to averaging")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_haar_moments)

    rep = top.add_parser("rep").add_subparsers(dest="verb", required=True)
    p = rep.add_parser("conjugate", help="conjugate pairs and quantum dimensions")
    p.add_argument("descriptor")
    p.add_argument("--rep-dim", type=int, default=None)
    p.add_argument("--rep-q", type=str, default=None)
    p.set_defaults(func=cmd_rep_conjugate)
    p = rep.add_parser("morphism-check", help="quotient-model intertwiner check")
    p.add_argument("case")
    p.set_defaults(func=cmd_rep_morphism_check)

    ktheory = top.add_parser("ktheory").add_subparsers(dest="verb", required=True)
    p = ktheory.add_parser("wreath", help="K-groups of a free wreath product")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.set_defaults(func=cmd_ktheory_wreath)
    p = ktheory.add_parser("block", help="K-groups of one block algebra")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.set_defaults(func=cmd_ktheory_block)

    p = top.add_parser("selftest", help="run the built-in cross-checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.t0 = time.perf_counter()
    try:
        args.tolerance = _env_tolerance()
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QwreathError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
