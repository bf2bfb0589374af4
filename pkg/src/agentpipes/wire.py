"""Wire envelopes for every agent role.

Each role has a fixed request/response JSON shape; field names are part of
the contract and are matched exactly (unknown or missing fields reject the
payload). Note the historical spellings "collum_collection" (painter and
cover-seeker output) versus "collumn_collection" (normalizer input): both
are preserved on the wire, and the controller renames between them.

Encoding is canonical so payload equality is semantic equality: state lists
and pair collections are sorted, covers are sorted index lists.
"""

from __future__ import annotations

from typing import Callable

from . import agents
from .problems import LineCover, Matching, StateSet

KSP_ROLES = ("worker", "trimmer", "ksp_reporter")
TAP_ROLES = (
    "row_reducer",
    "col_reducer",
    "matcher",
    "painter",
    "normalizer",
    "tap_reporter",
    "cover_seeker",
)
ALL_ROLES = KSP_ROLES + TAP_ROLES


class PayloadError(ValueError):
    """Payload does not match the role's wire schema."""


def _is_int(x) -> bool:
    return type(x) is int


def _check_pairs(value, field: str) -> None:
    if not isinstance(value, (list, tuple)):
        raise PayloadError(f"{field} must be a list of pairs")
    for entry in value:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(_is_int(x) and x >= 0 for x in entry)
        ):
            raise PayloadError(f"{field} entries must be [int, int] with ints >= 0")


def _check_matrix(value, field: str) -> None:
    if not isinstance(value, (list, tuple)) or not value:
        raise PayloadError(f"{field} must be a non-empty list of rows")
    n = len(value)
    for row in value:
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise PayloadError(f"{field} must be square")
        if not all(_is_int(x) and x >= 0 for x in row):
            raise PayloadError(f"{field} entries must be ints >= 0")


def _check_index_list(value, field: str) -> None:
    if not isinstance(value, (list, tuple)):
        raise PayloadError(f"{field} must be a list of indices")
    if not all(_is_int(x) and x >= 0 for x in value):
        raise PayloadError(f"{field} indices must be ints >= 0")
    if len(set(value)) != len(value):
        raise PayloadError(f"{field} indices must be distinct")


def _check_scalar(value, field: str) -> None:
    if not _is_int(value) or value < 0:
        raise PayloadError(f"{field} must be an int >= 0")


_FIELD_CHECKS: dict[str, Callable] = {
    "c_list": _check_pairs,
    "n_list": _check_pairs,
    "t_list": _check_pairs,
    "s_item": lambda v, f: _check_pairs([v], f),
    "capacity": _check_scalar,
    "matrix": _check_matrix,
    "reduced_matrix": _check_matrix,
    "normalized_matrix": _check_matrix,
    "largest_collection": _check_pairs,
    "collection": _check_pairs,
    "collum_collection": _check_index_list,
    "collumn_collection": _check_index_list,
    "row_collection": _check_index_list,
    "max_value": _check_scalar,
    "total_value": _check_scalar,
}

REQUEST_FIELDS: dict[str, tuple[str, ...]] = {
    "worker": ("c_list", "s_item"),
    "trimmer": ("n_list", "capacity"),
    "ksp_reporter": ("c_list",),
    "row_reducer": ("matrix",),
    "col_reducer": ("matrix",),
    "matcher": ("matrix",),
    "painter": ("matrix", "collection"),
    "cover_seeker": ("matrix",),
    "normalizer": ("matrix", "collumn_collection", "row_collection"),
    "tap_reporter": ("matrix", "collection"),
}

RESPONSE_FIELDS: dict[str, tuple[str, ...]] = {
    "worker": ("n_list",),
    "trimmer": ("t_list",),
    "ksp_reporter": ("max_value",),
    "row_reducer": ("reduced_matrix",),
    "col_reducer": ("reduced_matrix",),
    "matcher": ("largest_collection",),
    "painter": ("collum_collection", "row_collection"),
    "cover_seeker": ("collum_collection", "row_collection"),
    "normalizer": ("normalized_matrix",),
    "tap_reporter": ("total_value",),
}


def _validate(payload: dict, fields: tuple[str, ...], what: str) -> None:
    if not isinstance(payload, dict):
        raise PayloadError(f"{what} must be a JSON object")
    unknown = set(payload) - set(fields)
    if unknown:
        raise PayloadError(f"{what} has unknown fields: {sorted(unknown)}")
    missing = set(fields) - set(payload)
    if missing:
        raise PayloadError(f"{what} is missing fields: {sorted(missing)}")
    for field in fields:
        _FIELD_CHECKS[field](payload[field], field)


def validate_request(role: str, payload: dict) -> None:
    if role not in REQUEST_FIELDS:
        raise PayloadError(f"unknown role {role!r}")
    _validate(payload, REQUEST_FIELDS[role], f"{role} request")


def validate_response(role: str, payload: dict, n: int | None = None) -> None:
    """Structural check, plus bound/disjointness checks when n is given."""
    if role not in RESPONSE_FIELDS:
        raise PayloadError(f"unknown role {role!r}")
    _validate(payload, RESPONSE_FIELDS[role], f"{role} response")
    if role == "matcher":
        pairs = [tuple(p) for p in payload["largest_collection"]]
        rows = [i for i, _ in pairs]
        cols = [j for _, j in pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise PayloadError("largest_collection pairs share a row or column")
        if n is not None and any(i >= n or j >= n for i, j in pairs):
            raise PayloadError("largest_collection index out of bounds")
    if n is not None:
        if role in ("painter", "cover_seeker"):
            if any(j >= n for j in payload["collum_collection"]) or any(
                i >= n for i in payload["row_collection"]
            ):
                raise PayloadError("cover index out of bounds")
        if role in ("row_reducer", "col_reducer", "normalizer"):
            (field,) = RESPONSE_FIELDS[role]
            if len(payload[field]) != n:
                raise PayloadError(f"{field} must stay {n}x{n}")


# --- canonical encoding -------------------------------------------------

def encode_states(states: StateSet) -> list[list[int]]:
    return [[w, v] for w, v in sorted(states)]


def decode_states(value) -> StateSet:
    return frozenset((int(w), int(v)) for w, v in value)


def encode_matching(matching: Matching) -> list[list[int]]:
    return [[i, j] for i, j in sorted(matching)]


def decode_matching(value) -> Matching:
    return frozenset((int(i), int(j)) for i, j in value)


def encode_matrix(matrix) -> list[list[int]]:
    return [list(row) for row in matrix]


def decode_matrix(value) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in value)


def encode_cover(cover: LineCover) -> dict:
    return {
        "collum_collection": sorted(cover.columns),
        "row_collection": sorted(cover.rows),
    }


def decode_cover(columns, rows) -> LineCover:
    return LineCover(rows=frozenset(int(i) for i in rows),
                     columns=frozenset(int(j) for j in columns))


# --- reference dispatch --------------------------------------------------

def reference_response(role: str, request: dict) -> dict:
    """Run the reference implementation of `role` on a wire request."""
    if role == "worker":
        states = agents.worker_expand(
            decode_states(request["c_list"]), tuple(request["s_item"])
        )
        return {"n_list": encode_states(states)}
    if role == "trimmer":
        states = agents.trimmer_filter(
            decode_states(request["n_list"]), request["capacity"]
        )
        return {"t_list": encode_states(states)}
    if role == "ksp_reporter":
        return {"max_value": agents.ksp_report(decode_states(request["c_list"]))}
    if role == "row_reducer":
        return {"reduced_matrix": encode_matrix(agents.row_reduce(decode_matrix(request["matrix"])))}
    if role == "col_reducer":
        return {"reduced_matrix": encode_matrix(agents.col_reduce(decode_matrix(request["matrix"])))}
    if role == "matcher":
        return {"largest_collection": encode_matching(agents.match_zeros(decode_matrix(request["matrix"])))}
    if role == "painter":
        cover = agents.paint_cover(
            decode_matrix(request["matrix"]), decode_matching(request["collection"])
        )
        return encode_cover(cover)
    if role == "cover_seeker":
        return encode_cover(agents.cover_seek(decode_matrix(request["matrix"])))
    if role == "normalizer":
        cover = decode_cover(request["collumn_collection"], request["row_collection"])
        out = agents.normalize(decode_matrix(request["matrix"]), cover)
        return {"normalized_matrix": encode_matrix(out)}
    if role == "tap_reporter":
        return {
            "total_value": agents.tap_report(
                decode_matrix(request["matrix"]), decode_matching(request["collection"])
            )
        }
    raise PayloadError(f"unknown role {role!r}")


def request_difficulty(role: str, request: dict) -> int:
    """Band measure: carried-state count for knapsack roles, matrix size otherwise."""
    if role in ("worker", "ksp_reporter"):
        return len(request["c_list"])
    if role == "trimmer":
        return len(request["n_list"])
    return len(request["matrix"])
