"""Strict JSON descriptors for algebras, groups and actions.

Unknown keys are rejected, and every error carries a JSON-pointer path to
the offending location.  Weights may be numbers, decimal strings or exact
rationals like "2/3" (parsed exactly, then converted to float).
"""

import json
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .groups import FiniteGroup
from .multimatrix import DEFAULT_TOLERANCE, make_algebra
from .actions import make_classical_action, make_dual_action


def _require_keys(obj, pointer, required, optional=()):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", pointer)
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"unknown key {key!r}", f"{pointer}/{key}")
    for key in required:
        if key not in obj:
            raise ParseError(f"missing key {key!r}", pointer)


def parse_weight(value, pointer):
    if isinstance(value, bool):
        raise ParseError("weight must be a number or numeric string", pointer)
    if isinstance(value, (int, float)):
        w = float(value)
    elif isinstance(value, str):
        try:
            w = float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse weight {value!r}", pointer)
    else:
        raise ParseError("weight must be a number or numeric string", pointer)
    if w <= 0:
        raise ParseError(f"weight must be positive, got {w}", pointer)
    return w


def parse_complex(value, pointer):
    if isinstance(value, bool):
        raise ParseError("expected a number or [re, im] pair", pointer)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(value[0], value[1])
    raise ParseError("expected a number or [re, im] pair", pointer)


def parse_matrix(value, pointer):
    if not isinstance(value, list) or not value:
        raise ParseError("expected a nonempty matrix (list of rows)", pointer)
    rows = []
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise ParseError("expected a list of entries", f"{pointer}/{i}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError("ragged matrix rows", f"{pointer}/{i}")
        rows.append([parse_complex(x, f"{pointer}/{i}/{j}") for j, x in enumerate(row)])
    return np.array(rows, dtype=complex)


def parse_algebra(obj, pointer=""):
    _require_keys(obj, pointer, required=("blocks",), optional=("tolerance",))
    blocks_obj = obj["blocks"]
    if not isinstance(blocks_obj, list) or not blocks_obj:
        raise ParseError("expected a nonempty list of blocks", f"{pointer}/blocks")
    blocks = []
    for i, blk in enumerate(blocks_obj):
        bp = f"{pointer}/blocks/{i}"
        _require_keys(blk, bp, required=("size", "weights"))
        size = blk["size"]
        if not isinstance(size, int) or isinstance(size, bool) or size < 1:
            raise ParseError("size must be a positive integer", f"{bp}/size")
        weights_obj = blk["weights"]
        if not isinstance(weights_obj, list):
            raise ParseError("weights must be a list", f"{bp}/weights")
        weights = [
            parse_weight(w, f"{bp}/weights/{j}") for j, w in enumerate(weights_obj)
        ]
        if len(weights) != size:
            raise ParseError(
                f"block of size {size} needs {size} weights", f"{bp}/weights"
            )
        blocks.append((size, weights))
    tolerance = obj.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool) or tolerance <= 0:
        raise ParseError("tolerance must be a positive number", f"{pointer}/tolerance")
    from .errors import QwreathError

    try:
        return make_algebra(blocks, float(tolerance))
    except QwreathError as exc:
        raise ParseError(str(exc), f"{pointer}/blocks")


def parse_group(obj, pointer=""):
    _require_keys(obj, pointer, required=("table",), optional=("names",))
    table = obj["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ParseError("table must be a list of rows", f"{pointer}/table")
    from .errors import QwreathError

    try:
        return FiniteGroup(table, names=obj.get("names"))
    except QwreathError as exc:
        raise ParseError(str(exc), f"{pointer}/table")


def parse_action(obj, pointer=""):
    _require_keys(
        obj,
        pointer,
        required=("kind", "group", "algebra"),
        optional=("autos", "grading", "graded_basis"),
    )
    kind = obj["kind"]
    algebra = parse_algebra(obj["algebra"], f"{pointer}/algebra")
    group = parse_group(obj["group"], f"{pointer}/group")
    from .errors import QwreathError

    if kind == "classical":
        if "autos" not in obj:
            raise ParseError("classical actions need 'autos'", pointer)
        if "grading" in obj or "graded_basis" in obj:
            raise ParseError("classical actions take no grading", pointer)
        autos_obj = obj["autos"]
        if not isinstance(autos_obj, list):
            raise ParseError("autos must be a list of matrices", f"{pointer}/autos")
        autos = [
            parse_matrix(mat, f"{pointer}/autos/{g}") for g, mat in enumerate(autos_obj)
        ]
        try:
            return make_classical_action(algebra, group, autos)
        except QwreathError as exc:
            raise ParseError(str(exc), f"{pointer}/autos")
    if kind == "dual":
        if "grading" not in obj:
            raise ParseError("dual actions need 'grading'", pointer)
        if "autos" in obj:
            raise ParseError("dual actions take no autos", pointer)
        grading = obj["grading"]
        if not isinstance(grading, list) or not all(
            isinstance(g, int) and not isinstance(g, bool) for g in grading
        ):
            raise ParseError(
                "grading must be a list of group element indices", f"{pointer}/grading"
            )
        basis = None
        if "graded_basis" in obj:
            basis = parse_matrix(obj["graded_basis"], f"{pointer}/graded_basis")
        try:
            return make_dual_action(algebra, group, grading, basis)
        except QwreathError as exc:
            raise ParseError(str(exc), f"{pointer}/grading")
    raise ParseError(f"kind must be 'classical' or 'dual', got {kind!r}", f"{pointer}/kind")


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}")


def parse_descriptor(path):
    """Load a descriptor file and build the matching typed value: an
    action if a 'kind' key is present, otherwise an algebra."""
    obj = load_json(path)
    if isinstance(obj, dict) and "kind" in obj:
        return parse_action(obj)
    return parse_algebra(obj)
