"""Deterministic reference implementations of every pipeline leaf task.

These are the contracts each agent role must satisfy: the knapsack trio
(expand, trim, report) and the assignment sextet (row/column reduce, match,
paint, normalize, report) plus the superseded single-step cover seeker. All
functions are pure; matrices go in and out as tuples of tuples.

Matching and cover construction are deterministic: rows are processed in
ascending index and augmenting paths explore columns in ascending index, so
golden tests can pin exact outputs.
"""

from __future__ import annotations

from .problems import LineCover, Matching, State, StateSet

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(matrix) -> Matrix:
    m = tuple(tuple(row) for row in matrix)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise ValueError("matrix must be square and non-empty")
    return m


def worker_expand(c_list: StateSet, s_item: State) -> StateSet:
    """Add the item to every carried state: {(w + wk, v + vk)}."""
    wk, vk = s_item
    if wk < 0 or vk < 0:
        raise ValueError("item weight and value must be non-negative")
    return frozenset((w + wk, v + vk) for w, v in c_list)


def trimmer_filter(n_list: StateSet | frozenset, capacity: int) -> StateSet:
    """Drop every state whose weight exceeds the capacity; duplicates collapse."""
    return frozenset((w, v) for w, v in n_list if w <= capacity)


def ksp_report(c_list: StateSet) -> int:
    """Maximum value across the states; 0 for an empty set."""
    return max((v for _, v in c_list), default=0)


def row_reduce(matrix) -> Matrix:
    """Subtract each row's minimum from the row."""
    m = _as_matrix(matrix)
    return tuple(tuple(x - min(row) for x in row) for row in m)


def col_reduce(matrix) -> Matrix:
    """Subtract each column's minimum from the column."""
    m = _as_matrix(matrix)
    mins = [min(col) for col in zip(*m)]
    return tuple(tuple(x - mins[j] for j, x in enumerate(row)) for row in m)


def match_zeros(matrix) -> Matching:
    """Maximum set of zero entries, no two sharing a row or column.

    Kuhn's augmenting-path matching on the bipartite zero graph.
    """
    m = _as_matrix(matrix)
    n = len(m)
    zero_cols = [[j for j in range(n) if m[i][j] == 0] for i in range(n)]
    col_owner: list[int | None] = [None] * n

    def try_assign(row: int, visited: set[int]) -> bool:
        for col in zero_cols[row]:
            if col in visited:
                continue
            visited.add(col)
            if col_owner[col] is None or try_assign(col_owner[col], visited):
                col_owner[col] = row
                return True
        return False

    for row in range(n):
        try_assign(row, set())
    return frozenset(
        (owner, col) for col, owner in enumerate(col_owner) if owner is not None
    )


def paint_cover(matrix, matching: Matching) -> LineCover:
    """Minimum set of lines covering every zero, |lines| = |matching|.

    Alternating reachability from unmatched rows (non-matching zero edges
    row->column, matching edges column->row); the cover is the unreached
    matched rows plus the reached columns. Raises if the matching was not
    maximum, which surfaces as an uncovered zero or an oversized cover.
    """
    m = _as_matrix(matrix)
    n = len(m)
    pairs = set(matching)
    matched_rows = {i for i, _ in pairs}
    row_of_col = {j: i for i, j in pairs}

    reached_rows = set(range(n)) - matched_rows
    reached_cols: set[int] = set()
    frontier = list(reached_rows)
    while frontier:
        row = frontier.pop()
        for col in range(n):
            if m[row][col] == 0 and col not in reached_cols and (row, col) not in pairs:
                reached_cols.add(col)
                owner = row_of_col.get(col)
                if owner is not None and owner not in reached_rows:
                    reached_rows.add(owner)
                    frontier.append(owner)

    cover = LineCover(
        rows=frozenset(matched_rows - reached_rows),
        columns=frozenset(reached_cols),
    )
    if cover.size > len(pairs):
        raise ValueError("matching is not maximum: cover exceeds matching size")
    uncovered_zero = any(
        m[i][j] == 0 and i not in cover.rows and j not in cover.columns
        for i in range(n)
        for j in range(n)
    )
    if uncovered_zero:
        raise ValueError("matching is not maximum: constructed cover misses a zero")
    return cover


def normalize(matrix, cover: LineCover) -> Matrix:
    """Shift mass off the uncovered region to create new zeros.

    Let m be the minimum uncovered entry: subtract m from every uncovered
    entry and add m to every doubly covered entry. Returns the matrix
    unchanged when nothing is uncovered or the minimum is already 0.
    """
    mat = _as_matrix(matrix)
    n = len(mat)
    uncovered = [
        mat[i][j]
        for i in range(n)
        for j in range(n)
        if i not in cover.rows and j not in cover.columns
    ]
    if not uncovered or min(uncovered) == 0:
        return mat
    shift = min(uncovered)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            covered_row = i in cover.rows
            covered_col = j in cover.columns
            if covered_row and covered_col:
                row.append(mat[i][j] + shift)
            elif covered_row or covered_col:
                row.append(mat[i][j])
            else:
                row.append(mat[i][j] - shift)
        out.append(tuple(row))
    return tuple(out)


def tap_report(original_matrix, collection: Matching) -> int:
    """Sum the original-matrix entries at the matched positions."""
    m = _as_matrix(original_matrix)
    n = len(m)
    pairs = list(collection)
    if len(pairs) != n:
        raise ValueError(f"expected {n} assignment pairs, got {len(pairs)}")
    if any(not (0 <= i < n and 0 <= j < n) for i, j in pairs):
        raise ValueError("assignment index out of bounds")
    return sum(m[i][j] for i, j in pairs)


def cover_seek(matrix) -> LineCover:
    """Minimum zero cover in one step (match then paint); superseded in the
    staged design but kept for the pre-decomposition pipeline."""
    return paint_cover(matrix, match_zeros(matrix))
