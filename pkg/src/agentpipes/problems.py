"""Problem instances, seeded generators, and exact ground-truth solvers.

Two problem families are covered: the 0/1 knapsack problem (maximize value
under a weight capacity) and the square task-assignment problem (minimize
total cost over permutations). Each family gets a deterministic seeded
generator, an exact solver, and an independent brute-force oracle used to
cross-check the exact solver on small instances.

All quantities are integers; state sets and matchings use frozensets so set
semantics (no duplicates) hold by construction.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

# A feasible state is a (weight, value) pair; a state set has set semantics.
State = tuple[int, int]
StateSet = frozenset[State]

# A matching is a set of (row, column) pairs, no two sharing a row or column.
Matching = frozenset[tuple[int, int]]

BRUTE_FORCE_KNAPSACK_LIMIT = 25
BRUTE_FORCE_ASSIGNMENT_LIMIT = 9

DEFAULT_WEIGHT_RANGE = (1, 30)
DEFAULT_VALUE_RANGE = (1, 30)
DEFAULT_COST_RANGE = (1, 30)
DEFAULT_CAPACITY_RATIO = 0.5


class LineCover(NamedTuple):
    """Rows and columns selected to cover every zero of a matrix."""

    rows: frozenset[int]
    columns: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.rows) + len(self.columns)


@dataclass(frozen=True)
class KnapsackInstance:
    id: str
    items: tuple[State, ...]
    capacity: int

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError("knapsack instance needs at least one item")
        if any(w < 0 or v < 0 for w, v in self.items):
            raise ValueError("weights and values must be non-negative")
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")

    @property
    def size(self) -> int:
        return len(self.items)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "items": [[w, v] for w, v in self.items],
            "capacity": self.capacity,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "KnapsackInstance":
        return cls(
            id=str(doc["id"]),
            items=tuple((int(w), int(v)) for w, v in doc["items"]),
            capacity=int(doc["capacity"]),
        )


@dataclass(frozen=True)
class AssignmentInstance:
    id: str
    cost_matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.cost_matrix)
        if n < 1:
            raise ValueError("cost matrix must be at least 1x1")
        if any(len(row) != n for row in self.cost_matrix):
            raise ValueError("cost matrix must be square")
        if any(entry < 0 for row in self.cost_matrix for entry in row):
            raise ValueError("costs must be non-negative")

    @property
    def size(self) -> int:
        return len(self.cost_matrix)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "cost_matrix": [list(row) for row in self.cost_matrix],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AssignmentInstance":
        return cls(
            id=str(doc["id"]),
            cost_matrix=tuple(tuple(int(x) for x in row) for row in doc["cost_matrix"]),
        )


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary parts; independent of hash randomization."""
    tag = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(tag, digest_size=8).digest(), "big") >> 1


def _check_range(rng_pair: tuple[int, int], name: str) -> None:
    lo, hi = rng_pair
    if lo > hi:
        raise ValueError(f"empty {name} range [{lo}, {hi}]")


def generate_knapsack(
    n: int,
    seed: int,
    weight_range: tuple[int, int] = DEFAULT_WEIGHT_RANGE,
    value_range: tuple[int, int] = DEFAULT_VALUE_RANGE,
    capacity_ratio: float = DEFAULT_CAPACITY_RATIO,
) -> KnapsackInstance:
    """Seeded random knapsack instance; capacity = round(ratio * total weight)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_range(weight_range, "weight")
    _check_range(value_range, "value")
    rng = random.Random(seed)
    items = tuple(
        (rng.randint(*weight_range), rng.randint(*value_range)) for _ in range(n)
    )
    capacity = round(capacity_ratio * sum(w for w, _ in items))
    return KnapsackInstance(id=f"ksp-n{n}-s{seed}", items=items, capacity=capacity)


def generate_assignment(
    n: int,
    seed: int,
    cost_range: tuple[int, int] = DEFAULT_COST_RANGE,
) -> AssignmentInstance:
    """Seeded random assignment instance with uniform integer costs."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_range(cost_range, "cost")
    rng = random.Random(seed)
    matrix = tuple(
        tuple(rng.randint(*cost_range) for _ in range(n)) for _ in range(n)
    )
    return AssignmentInstance(id=f"tap-n{n}-s{seed}", cost_matrix=matrix)


def solve_knapsack_exact(inst: KnapsackInstance) -> int:
    """Optimal knapsack value via the feasible-state recursion.

    Carries every capacity-feasible (weight, value) pair forward without
    dominance pruning, so intermediate state sets match what the staged
    pipeline produces.
    """
    states: StateSet = frozenset({(0, 0)})
    for wk, vk in inst.items:
        added = {(w + wk, v + vk) for w, v in states}
        trimmed = {(w, v) for w, v in added if w <= inst.capacity}
        states = states | trimmed
    return max(v for _, v in states)


def knapsack_state_sets(inst: KnapsackInstance) -> Iterator[tuple[StateSet, State]]:
    """Yield (states-before-item, item) for each step of the recursion."""
    states: StateSet = frozenset({(0, 0)})
    for wk, vk in inst.items:
        yield states, (wk, vk)
        added = {(w + wk, v + vk) for w, v in states}
        trimmed = {(w, v) for w, v in added if w <= inst.capacity}
        states = states | trimmed


def final_knapsack_states(inst: KnapsackInstance) -> StateSet:
    states: StateSet = frozenset({(0, 0)})
    for wk, vk in inst.items:
        added = {(w + wk, v + vk) for w, v in states}
        states = states | {(w, v) for w, v in added if w <= inst.capacity}
    return states


def brute_force_knapsack(inst: KnapsackInstance) -> int:
    """Independent oracle: exhaustive enumeration of all item subsets."""
    n = inst.size
    if n > BRUTE_FORCE_KNAPSACK_LIMIT:
        raise ValueError(f"instance too large for enumeration (n={n})")
    best = 0
    items = inst.items
    for mask in range(1 << n):
        weight = value = 0
        for i in range(n):
            if mask >> i & 1:
                weight += items[i][0]
                value += items[i][1]
        if weight <= inst.capacity and value > best:
            best = value
    return best


def brute_force_assignment(inst: AssignmentInstance) -> int:
    """Independent oracle: minimum cost over all N! permutations."""
    n = inst.size
    if n > BRUTE_FORCE_ASSIGNMENT_LIMIT:
        raise ValueError(f"instance too large for enumeration (n={n})")
    rows = inst.cost_matrix
    return min(
        sum(row[j] for row, j in zip(rows, perm))
        for perm in itertools.permutations(range(n))
    )


def solve_assignment_exact(inst: AssignmentInstance) -> tuple[int, Matching]:
    """Exact minimum-cost assignment via the O(n^3) potentials method.

    Independent of the staged reduce/match/cover/normalize loop, so pipeline
    results can be checked against it without sharing code paths.
    """
    n = inst.size
    cost = inst.cost_matrix
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match_col = [0] * (n + 1)  # match_col[j] = row (1-based) assigned to column j
    for i in range(1, n + 1):
        match_col[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        prev = [0] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_col[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    prev[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_col[j0] == 0:
                break
        while j0:
            j1 = prev[j0]
            match_col[j0] = match_col[j1]
            j0 = j1
    pairs = frozenset(
        (match_col[j] - 1, j - 1) for j in range(1, n + 1) if match_col[j] != 0
    )
    total = sum(cost[i][j] for i, j in pairs)
    return total, pairs


def matching_is_valid(pairs: Iterable[tuple[int, int]], n: int) -> bool:
    """Pairs lie in bounds and no two share a row or column."""
    pairs = list(pairs)
    rows = [i for i, _ in pairs]
    cols = [j for _, j in pairs]
    in_bounds = all(0 <= i < n and 0 <= j < n for i, j in pairs)
    return in_bounds and len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


def write_instances(path, instances: Iterable[KnapsackInstance | AssignmentInstance]) -> int:
    """Write instances as one JSON object per line; returns the line count."""
    count = 0
    with open(path, "w") as fh:
        for inst in instances:
            fh.write(json.dumps(inst.to_json()) + "\n")
            count += 1
    return count


def read_instances(path, problem: str):
    """Read a JSONL instance file; malformed lines raise with their line number."""
    cls = {"ksp": KnapsackInstance, "tap": AssignmentInstance}[problem]
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(cls.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
    return out


def iter_instance_lines(path, problem: str):
    """Yield (lineno, instance-or-None, error-or-None) per line, skipping blanks."""
    cls = {"ksp": KnapsackInstance, "tap": AssignmentInstance}[problem]
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, cls.from_json(json.loads(line)), None
            except (ValueError, KeyError, TypeError) as exc:
                yield lineno, None, str(exc)
