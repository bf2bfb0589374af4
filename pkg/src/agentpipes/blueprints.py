"""Typed task blueprints: task specs, orchestration protocols, decomposition.

A blueprint pairs a set of well-formulated tasks (input schema, output
schema, named correctness requirement) with a protocol graph of control and
data edges. Decomposition replaces one task with a sub-blueprint whose entry
and exit schemas match the replaced task exactly, so the splice is invisible
from outside.

Schemas are names resolved against a registry. A data edge is compatible
when the producer's output schema equals the consumer's input schema, or the
registry declares that the consumer's schema can be assembled from it (the
controller supplies the remaining fields from run context, e.g. the item or
the capacity taken from the instance).

Blueprints are immutable values; every operation returns a new one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable


class SchemaError(ValueError):
    """Schema reference is missing, empty, or unregistered."""


class BlueprintError(ValueError):
    """Structural blueprint operation failure (unknown task, bad splice)."""


@dataclass(frozen=True)
class Schema:
    name: str
    description: str = ""
    # Producers whose output the controller can adapt into this input.
    accepts_from: frozenset[str] = field(default_factory=frozenset)


_REGISTRY: dict[str, Schema] = {}


def register_schema(name: str, description: str = "", accepts_from: Iterable[str] = ()) -> Schema:
    schema = Schema(name, description, frozenset(accepts_from))
    _REGISTRY[name] = schema
    return schema


def schema_registered(name: str) -> bool:
    return name in _REGISTRY


def schemas_compatible(producer: str, consumer: str) -> bool:
    if producer == consumer:
        return True
    entry = _REGISTRY.get(consumer)
    return entry is not None and producer in entry.accepts_from


register_schema("knapsack_instance", "item list plus capacity")
register_schema("state_set", "feasible (weight, value) pairs")
register_schema(
    "expansion_request",
    "carried states plus the item to add",
    accepts_from=("knapsack_instance", "state_set"),
)
register_schema(
    "trim_request",
    "candidate states plus the capacity",
    accepts_from=("state_set", "knapsack_instance"),
)
register_schema("max_value", "best value found")
register_schema("cost_matrix", "square non-negative integer matrix")
register_schema("matching", "independent zero positions")
register_schema(
    "cover_request",
    "matrix plus an independent-zero collection",
    accepts_from=("matching", "cost_matrix"),
)
register_schema("line_cover", "row and column indices covering all zeros")
register_schema(
    "normalize_request",
    "matrix plus the covering lines",
    accepts_from=("line_cover", "cost_matrix"),
)
register_schema(
    "total_request",
    "original matrix plus the selected positions",
    accepts_from=("matching", "line_cover", "cost_matrix"),
)
register_schema("total_value", "summed assignment cost")


_KNOWN_BOUNDS = ("n", "n^2")


def resolve_bound(bound: int | str, n: int) -> int:
    """Turn a loop bound (literal or size-derived symbol) into an iteration cap."""
    if isinstance(bound, int):
        return bound
    if bound == "n":
        return n
    if bound == "n^2":
        return n * n
    raise BlueprintError(f"unknown iteration bound {bound!r}")


def _bound_is_finite(bound) -> bool:
    return (isinstance(bound, int) and bound >= 1) or bound in _KNOWN_BOUNDS


@dataclass(frozen=True)
class TaskSpec:
    id: str
    input_schema: str
    output_schema: str
    requirement: str


@dataclass(frozen=True)
class ProtocolNode:
    id: str
    kind: str  # entry | exit | task | loop
    task_id: str | None = None
    schema: str | None = None  # entry/exit boundary schema
    exit_predicate: str | None = None
    iteration_bound: int | str | None = None


@dataclass(frozen=True)
class ProtocolEdge:
    source: str
    target: str
    kind: str = "control"  # control | data


@dataclass(frozen=True)
class Blueprint:
    tasks: tuple[TaskSpec, ...]
    nodes: tuple[ProtocolNode, ...]
    edges: tuple[ProtocolEdge, ...]

    def task_map(self) -> dict[str, TaskSpec]:
        return {t.id: t for t in self.tasks}

    def node_map(self) -> dict[str, ProtocolNode]:
        return {n.id: n for n in self.nodes}

    def _single(self, kind: str) -> ProtocolNode:
        found = [n for n in self.nodes if n.kind == kind]
        if len(found) != 1:
            raise BlueprintError(f"blueprint needs exactly one {kind} node, has {len(found)}")
        return found[0]

    @property
    def entry(self) -> ProtocolNode:
        return self._single("entry")

    @property
    def exit(self) -> ProtocolNode:
        return self._single("exit")

    @property
    def input_schema(self) -> str:
        return self.entry.schema or ""

    @property
    def output_schema(self) -> str:
        return self.exit.schema or ""


@dataclass(frozen=True)
class DecompositionStep:
    replaced_task: str
    sub_blueprint: Blueprint
    rationale: str = ""  # why each sub-task is simpler; annotation only


@dataclass(frozen=True)
class TractabilityMark:
    task_id: str
    backend_id: str
    measured_accuracy: float
    sample_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.measured_accuracy <= 1.0:
            raise ValueError("measured_accuracy must be in [0, 1]")
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


@dataclass(frozen=True)
class TractabilityTable:
    task_ids: frozenset[str]
    entries: tuple[tuple[TractabilityMark, bool], ...] = ()

    def flags(self) -> dict[str, bool]:
        """Latest mark per task wins."""
        out: dict[str, bool] = {}
        for mark, tractable in self.entries:
            out[mark.task_id] = tractable
        return out

    @property
    def is_terminal(self) -> bool:
        flags = self.flags()
        return bool(self.task_ids) and all(flags.get(t, False) for t in self.task_ids)


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.findings


def _check_task_schemas(task: TaskSpec) -> None:
    for label, name in (("input_schema", task.input_schema), ("output_schema", task.output_schema)):
        if not name:
            raise SchemaError(f"task {task.id!r} has an empty {label}")
        if not schema_registered(name):
            raise SchemaError(f"task {task.id!r} references unregistered schema {name!r}")


def create_blueprint(task: TaskSpec) -> Blueprint:
    """Single-task blueprint with the trivial entry -> task -> exit protocol."""
    _check_task_schemas(task)
    nodes = (
        ProtocolNode("entry", "entry", schema=task.input_schema),
        ProtocolNode(task.id, "task", task_id=task.id),
        ProtocolNode("exit", "exit", schema=task.output_schema),
    )
    edges = (
        ProtocolEdge("entry", task.id, "control"),
        ProtocolEdge(task.id, "exit", "control"),
        ProtocolEdge("entry", task.id, "data"),
        ProtocolEdge(task.id, "exit", "data"),
    )
    return Blueprint(tasks=(task,), nodes=nodes, edges=edges)


def embed_sub_blueprint(parent: Blueprint, step: DecompositionStep) -> Blueprint:
    """Splice a sub-blueprint in place of one task, preserving its interface.

    Edges that pointed at the replaced task are rewired to the sub-protocol's
    entry successors / exit predecessors; the sub's internal non-task nodes
    are namespaced under the replaced task id to avoid collisions.
    """
    tasks = parent.task_map()
    if step.replaced_task not in tasks:
        raise BlueprintError(f"blueprint has no task {step.replaced_task!r}")
    replaced = tasks[step.replaced_task]
    sub = step.sub_blueprint

    if sub.input_schema != replaced.input_schema or sub.output_schema != replaced.output_schema:
        raise BlueprintError(
            "splice boundary mismatch: sub-blueprint is "
            f"{sub.input_schema!r} -> {sub.output_schema!r}, task is "
            f"{replaced.input_schema!r} -> {replaced.output_schema!r}"
        )

    overlap = (set(tasks) - {step.replaced_task}) & {t.id for t in sub.tasks}
    if overlap:
        raise BlueprintError(f"sub-blueprint reuses task ids {sorted(overlap)}")

    target_nodes = [n for n in parent.nodes if n.kind == "task" and n.task_id == step.replaced_task]
    if len(target_nodes) != 1:
        raise BlueprintError(
            f"task {step.replaced_task!r} must appear as exactly one protocol node"
        )
    removed = target_nodes[0]

    sub_entry, sub_exit = sub.entry, sub.exit

    def renamed(node_id: str) -> str:
        node = sub.node_map()[node_id]
        if node.kind == "task":
            return node_id
        return f"{step.replaced_task}.{node_id}"

    new_nodes = [n for n in parent.nodes if n.id != removed.id]
    for node in sub.nodes:
        if node.kind in ("entry", "exit"):
            continue
        new_nodes.append(replace(node, id=renamed(node.id)))
    if len({n.id for n in new_nodes}) != len(new_nodes):
        raise BlueprintError("node id collision while splicing")

    entry_successors = {
        kind: [renamed(e.target) for e in sub.edges if e.source == sub_entry.id and e.kind == kind]
        for kind in ("control", "data")
    }
    exit_predecessors = {
        kind: [renamed(e.source) for e in sub.edges if e.target == sub_exit.id and e.kind == kind]
        for kind in ("control", "data")
    }

    new_edges: list[ProtocolEdge] = []
    for edge in parent.edges:
        touches_source = edge.source == removed.id
        touches_target = edge.target == removed.id
        if not touches_source and not touches_target:
            new_edges.append(edge)
            continue
        if touches_target:
            for successor in entry_successors[edge.kind]:
                new_edges.append(ProtocolEdge(edge.source, successor, edge.kind))
        if touches_source:
            for predecessor in exit_predecessors[edge.kind]:
                new_edges.append(ProtocolEdge(predecessor, edge.target, edge.kind))
    for edge in sub.edges:
        if edge.source in (sub_entry.id, sub_exit.id) or edge.target in (sub_entry.id, sub_exit.id):
            continue
        new_edges.append(ProtocolEdge(renamed(edge.source), renamed(edge.target), edge.kind))

    new_tasks = tuple(t for t in parent.tasks if t.id != step.replaced_task) + sub.tasks
    seen: set[ProtocolEdge] = set()
    deduped = tuple(e for e in new_edges if not (e in seen or seen.add(e)))
    return Blueprint(tasks=new_tasks, nodes=tuple(new_nodes), edges=deduped)


def validate_blueprint(blueprint: Blueprint) -> ValidationReport:
    """Collect every violated structural invariant; empty report means valid."""
    findings: list[str] = []

    ids = [t.id for t in blueprint.tasks]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        findings.append(f"duplicate task id {dup!r}")

    for task in blueprint.tasks:
        try:
            _check_task_schemas(task)
        except SchemaError as exc:
            findings.append(str(exc))

    node_map = {n.id: n for n in blueprint.nodes}
    if len(node_map) != len(blueprint.nodes):
        findings.append("duplicate node ids")

    for kind in ("entry", "exit"):
        count = sum(1 for n in blueprint.nodes if n.kind == kind)
        if count != 1:
            findings.append(f"blueprint must have exactly one {kind} node, has {count}")

    for node in blueprint.nodes:
        if node.kind == "loop" and not _bound_is_finite(node.iteration_bound):
            findings.append(f"loop node {node.id!r} lacks a finite iteration bound")
        if node.kind in ("entry", "exit"):
            if not node.schema or not schema_registered(node.schema):
                findings.append(f"{node.kind} node {node.id!r} has no registered schema")
        if node.kind == "task" and node.task_id not in {t.id for t in blueprint.tasks}:
            findings.append(f"node {node.id!r} references unknown task {node.task_id!r}")

    for edge in blueprint.edges:
        for end in (edge.source, edge.target):
            if end not in node_map:
                findings.append(f"edge {edge.source}->{edge.target} references unknown node {end!r}")

    # Reachability over all edges from the entry node.
    entries = [n for n in blueprint.nodes if n.kind == "entry"]
    if len(entries) == 1:
        adjacency: dict[str, list[str]] = {}
        for edge in blueprint.edges:
            adjacency.setdefault(edge.source, []).append(edge.target)
        seen = {entries[0].id}
        stack = [entries[0].id]
        while stack:
            for nxt in adjacency.get(stack.pop(), []):
                if nxt in seen:
                    continue
                seen.add(nxt)
                stack.append(nxt)
        reached_tasks = {
            node_map[nid].task_id for nid in seen if nid in node_map and node_map[nid].kind == "task"
        }
        placed = {n.task_id for n in blueprint.nodes if n.kind == "task"}
        for task in blueprint.tasks:
            if task.id not in placed:
                findings.append(f"task {task.id!r} has no protocol node")
            elif task.id not in reached_tasks:
                findings.append(f"task {task.id!r} is unreachable from the entry node")

    task_map = blueprint.task_map()

    def out_schema(node: ProtocolNode) -> str | None:
        if node.kind == "entry":
            return node.schema
        if node.kind == "task" and node.task_id in task_map:
            return task_map[node.task_id].output_schema
        return None

    def in_schema(node: ProtocolNode) -> str | None:
        if node.kind == "exit":
            return node.schema
        if node.kind == "task" and node.task_id in task_map:
            return task_map[node.task_id].input_schema
        return None

    for edge in blueprint.edges:
        if edge.kind != "data":
            continue
        src, dst = node_map.get(edge.source), node_map.get(edge.target)
        if src is None or dst is None:
            continue
        produced, consumed = out_schema(src), in_schema(dst)
        if produced is None or consumed is None:
            continue  # loop-mediated flow; checked at the task edges
        if not schemas_compatible(produced, consumed):
            findings.append(
                f"data edge {edge.source}->{edge.target} connects {produced!r} "
                f"to incompatible {consumed!r}"
            )

    return ValidationReport(tuple(findings))


def mark_tractable(
    blueprint: Blueprint,
    mark: TractabilityMark,
    threshold: float,
    table: TractabilityTable | None = None,
) -> TractabilityTable:
    """Record a measured accuracy; the task counts as tractable at or above
    the threshold. The table is terminal once every task is flagged."""
    task_ids = frozenset(t.id for t in blueprint.tasks)
    if mark.task_id not in task_ids:
        raise BlueprintError(f"blueprint has no task {mark.task_id!r}")
    if table is None:
        table = TractabilityTable(task_ids=task_ids)
    elif table.task_ids != task_ids:
        raise BlueprintError("tractability table belongs to a different blueprint")
    tractable = mark.measured_accuracy >= threshold
    return TractabilityTable(task_ids=task_ids, entries=table.entries + ((mark, tractable),))


# --- serialization -------------------------------------------------------

def blueprint_to_json(blueprint: Blueprint) -> dict:
    return {
        "tasks": [
            {
                "id": t.id,
                "input_schema": t.input_schema,
                "output_schema": t.output_schema,
                "requirement": t.requirement,
            }
            for t in blueprint.tasks
        ],
        "protocol": {
            "nodes": [
                {
                    key: value
                    for key, value in (
                        ("id", n.id),
                        ("kind", n.kind),
                        ("task_id", n.task_id),
                        ("schema", n.schema),
                        ("exit_predicate", n.exit_predicate),
                        ("iteration_bound", n.iteration_bound),
                    )
                    if value is not None
                }
                for n in blueprint.nodes
            ],
            "edges": [
                {"source": e.source, "target": e.target, "kind": e.kind}
                for e in blueprint.edges
            ],
        },
    }


def blueprint_from_json(doc: dict) -> Blueprint:
    tasks = tuple(
        TaskSpec(t["id"], t["input_schema"], t["output_schema"], t["requirement"])
        for t in doc["tasks"]
    )
    nodes = tuple(
        ProtocolNode(
            id=n["id"],
            kind=n["kind"],
            task_id=n.get("task_id"),
            schema=n.get("schema"),
            exit_predicate=n.get("exit_predicate"),
            iteration_bound=n.get("iteration_bound"),
        )
        for n in doc["protocol"]["nodes"]
    )
    edges = tuple(
        ProtocolEdge(e["source"], e["target"], e.get("kind", "control"))
        for e in doc["protocol"]["edges"]
    )
    return Blueprint(tasks=tasks, nodes=nodes, edges=edges)


def dumps_blueprint(blueprint: Blueprint) -> str:
    return json.dumps(blueprint_to_json(blueprint), indent=2)


# --- canonical pipeline catalog -------------------------------------------

def knapsack_task() -> TaskSpec:
    return TaskSpec("ksp", "knapsack_instance", "max_value", "max-value-within-capacity")


def knapsack_blueprint() -> Blueprint:
    return create_blueprint(knapsack_task())


def knapsack_decomposition() -> DecompositionStep:
    """Split the monolithic knapsack task into expand / trim / report."""
    tasks = (
        TaskSpec("worker", "expansion_request", "state_set", "itemwise-state-expansion"),
        TaskSpec("trimmer", "trim_request", "state_set", "capacity-filter-with-dedup"),
        TaskSpec("reporter", "state_set", "max_value", "max-value-or-zero"),
    )
    nodes = (
        ProtocolNode("entry", "entry", schema="knapsack_instance"),
        ProtocolNode(
            "item_loop", "loop", exit_predicate="all_items_processed", iteration_bound="n"
        ),
        ProtocolNode("worker", "task", task_id="worker"),
        ProtocolNode("trimmer", "task", task_id="trimmer"),
        ProtocolNode("reporter", "task", task_id="reporter"),
        ProtocolNode("exit", "exit", schema="max_value"),
    )
    edges = (
        ProtocolEdge("entry", "item_loop", "control"),
        ProtocolEdge("item_loop", "worker", "control"),
        ProtocolEdge("worker", "trimmer", "control"),
        ProtocolEdge("trimmer", "item_loop", "control"),
        ProtocolEdge("item_loop", "reporter", "control"),
        ProtocolEdge("reporter", "exit", "control"),
        ProtocolEdge("entry", "worker", "data"),
        ProtocolEdge("entry", "trimmer", "data"),
        ProtocolEdge("worker", "trimmer", "data"),
        ProtocolEdge("trimmer", "worker", "data"),
        ProtocolEdge("trimmer", "reporter", "data"),
        ProtocolEdge("reporter", "exit", "data"),
    )
    sub = Blueprint(tasks=tasks, nodes=nodes, edges=edges)
    return DecompositionStep(
        replaced_task="ksp",
        sub_blueprint=sub,
        rationale="each sub-task is one arithmetic pass over a list",
    )


def knapsack_pipeline_blueprint() -> Blueprint:
    return embed_sub_blueprint(knapsack_blueprint(), knapsack_decomposition())


def assignment_task() -> TaskSpec:
    return TaskSpec("tap", "cost_matrix", "total_value", "min-cost-full-assignment")


def assignment_blueprint() -> Blueprint:
    return create_blueprint(assignment_task())


def hungarian_decomposition() -> DecompositionStep:
    """Stage the assignment task as reduce rows/columns, then loop
    cover-seek + normalize until the cover spans the matrix."""
    tasks = (
        TaskSpec("row_reducer", "cost_matrix", "cost_matrix", "row-minimum-subtracted"),
        TaskSpec("col_reducer", "cost_matrix", "cost_matrix", "column-minimum-subtracted"),
        TaskSpec("cover_seeker", "cost_matrix", "line_cover", "minimum-zero-cover"),
        TaskSpec("normalizer", "normalize_request", "cost_matrix", "uncovered-mass-shift"),
        TaskSpec("reporter", "total_request", "total_value", "sum-original-entries"),
    )
    nodes = (
        ProtocolNode("entry", "entry", schema="cost_matrix"),
        ProtocolNode("row_reducer", "task", task_id="row_reducer"),
        ProtocolNode("col_reducer", "task", task_id="col_reducer"),
        ProtocolNode(
            "improve_loop", "loop", exit_predicate="cover_size_equals_n", iteration_bound="n^2"
        ),
        ProtocolNode("cover_seeker", "task", task_id="cover_seeker"),
        ProtocolNode("normalizer", "task", task_id="normalizer"),
        ProtocolNode("reporter", "task", task_id="reporter"),
        ProtocolNode("exit", "exit", schema="total_value"),
    )
    edges = (
        ProtocolEdge("entry", "row_reducer", "control"),
        ProtocolEdge("row_reducer", "col_reducer", "control"),
        ProtocolEdge("col_reducer", "improve_loop", "control"),
        ProtocolEdge("improve_loop", "cover_seeker", "control"),
        ProtocolEdge("cover_seeker", "normalizer", "control"),
        ProtocolEdge("normalizer", "improve_loop", "control"),
        ProtocolEdge("improve_loop", "reporter", "control"),
        ProtocolEdge("reporter", "exit", "control"),
        ProtocolEdge("entry", "row_reducer", "data"),
        ProtocolEdge("row_reducer", "col_reducer", "data"),
        ProtocolEdge("col_reducer", "cover_seeker", "data"),
        ProtocolEdge("normalizer", "cover_seeker", "data"),
        ProtocolEdge("col_reducer", "normalizer", "data"),
        ProtocolEdge("cover_seeker", "normalizer", "data"),
        ProtocolEdge("cover_seeker", "reporter", "data"),
        ProtocolEdge("entry", "reporter", "data"),
        ProtocolEdge("reporter", "exit", "data"),
    )
    sub = Blueprint(tasks=tasks, nodes=nodes, edges=edges)
    return DecompositionStep(
        replaced_task="tap",
        sub_blueprint=sub,
        rationale="one matrix transformation or scan per sub-task",
    )


def cover_split_decomposition() -> DecompositionStep:
    """Replace the single-step cover seeker with match-then-paint."""
    tasks = (
        TaskSpec("matcher", "cost_matrix", "matching", "maximum-independent-zeros"),
        TaskSpec("painter", "cover_request", "line_cover", "cover-from-matching"),
    )
    nodes = (
        ProtocolNode("entry", "entry", schema="cost_matrix"),
        ProtocolNode("matcher", "task", task_id="matcher"),
        ProtocolNode("painter", "task", task_id="painter"),
        ProtocolNode("exit", "exit", schema="line_cover"),
    )
    edges = (
        ProtocolEdge("entry", "matcher", "control"),
        ProtocolEdge("matcher", "painter", "control"),
        ProtocolEdge("painter", "exit", "control"),
        ProtocolEdge("entry", "matcher", "data"),
        ProtocolEdge("entry", "painter", "data"),
        ProtocolEdge("matcher", "painter", "data"),
        ProtocolEdge("painter", "exit", "data"),
    )
    sub = Blueprint(tasks=tasks, nodes=nodes, edges=edges)
    return DecompositionStep(
        replaced_task="cover_seeker",
        sub_blueprint=sub,
        rationale="finding independent zeros and painting lines are each simpler than both at once",
    )


def assignment_legacy_pipeline_blueprint() -> Blueprint:
    return embed_sub_blueprint(assignment_blueprint(), hungarian_decomposition())


def assignment_pipeline_blueprint() -> Blueprint:
    return embed_sub_blueprint(assignment_legacy_pipeline_blueprint(), cover_split_decomposition())
