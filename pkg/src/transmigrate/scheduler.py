"""Bottom-up translation planning.

Items with fewer dependencies are better leaves and are emitted first, so
that later prompts can embed already-translated dependencies. Cycles are
handled by condensing strongly connected components: the condensation is
emitted dependencies-first, members of one component are emitted together
in lexicographic order, and among simultaneously-ready components the one
with the smallest (dependency degree, name) key goes first. The result is
a total, deterministic order on any input graph.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from transmigrate.errors import IntegrityError
from transmigrate.sourcemodel.graph import DependencyGraph


@dataclass
class ClassPlan:
    name: str
    methods: list[str] = field(default_factory=list)


@dataclass
class ComponentPlan:
    name: str
    classes: list[ClassPlan] = field(default_factory=list)


@dataclass
class TranslationPlan:
    components: list[ComponentPlan] = field(default_factory=list)

    def iter_classes(self) -> Iterable[tuple[str, ClassPlan]]:
        for comp in self.components:
            for cls in comp.classes:
                yield comp.name, cls

    def item_counts(self) -> tuple[int, int, int]:
        n_classes = sum(len(c.classes) for c in self.components)
        n_methods = sum(len(cls.methods) for _, cls in self.iter_classes())
        return len(self.components), n_classes, n_methods

    def to_jsonl(self) -> str:
        lines = []
        for comp in self.components:
            lines.append(json.dumps({"kind": "component", "name": comp.name}, sort_keys=True))
            for cls in comp.classes:
                lines.append(
                    json.dumps({"kind": "class", "name": cls.name, "component": comp.name}, sort_keys=True)
                )
                for m in cls.methods:
                    lines.append(
                        json.dumps({"kind": "method", "name": m, "class": cls.name}, sort_keys=True)
                    )
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str) -> "TranslationPlan":
        plan = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec["kind"] == "component":
                plan.components.append(ComponentPlan(rec["name"]))
            elif rec["kind"] == "class":
                plan.components[-1].classes.append(ClassPlan(rec["name"]))
            else:
                plan.components[-1].classes[-1].methods.append(rec["name"])
        return plan


def compute_degrees(graph: DependencyGraph) -> dict[str, int]:
    """Dependency degree per item: the number of distinct same-granularity
    targets it depends on. Duplicate edges of different kinds count their
    shared target once; self-references are not dependencies."""
    return {node: len(targets) for node, targets in graph.dependencies().items()}


def order_nodes(nodes: Iterable[str], deps: Mapping[str, set[str]]) -> list[str]:
    """Total deterministic order: SCC condensation, dependencies first.

    ``deps[x]`` is the set of items x depends on; edges to unknown items are
    ignored. Ready components are chosen by ascending (aggregate dependency
    degree, smallest member name); members inside a component come out in
    lexicographic order.
    """
    node_list = sorted(set(nodes))
    node_set = frozenset(node_list)
    adj: dict[str, list[str]] = {}
    for n in node_list:
        targets = deps.get(n)
        adj[n] = [t for t in targets if t in node_set and t != n] if targets else []

    # Traversal order does not affect the output: the SCC partition is
    # order-independent, members are sorted at emission, and the ready heap
    # orders components by (degree, smallest member).
    sccs = _tarjan(node_list, adj)
    scc_of = {}
    for idx, members in enumerate(sccs):
        for m in members:
            scc_of[m] = idx

    external_targets: list[set[int]] = [set() for _ in sccs]
    degrees: list[int] = []
    dependents: list[set[int]] = [set() for _ in sccs]
    for idx, members in enumerate(sccs):
        targets = set()
        for m in members:
            targets.update(adj[m])
        outside = {t for t in targets if scc_of[t] != idx}
        degrees.append(len(outside))
        for t in outside:
            external_targets[idx].add(scc_of[t])
    for idx, target_sccs in enumerate(external_targets):
        for t in target_sccs:
            dependents[t].add(idx)

    remaining = [len(external_targets[i]) for i in range(len(sccs))]
    ready = [(degrees[i], sccs[i][0], i) for i in range(len(sccs)) if remaining[i] == 0]
    heapq.heapify(ready)
    order: list[str] = []
    emitted = 0
    while ready:
        _, _, idx = heapq.heappop(ready)
        order.extend(sccs[idx])
        emitted += 1
        for dep in dependents[idx]:
            remaining[dep] -= 1
            if remaining[dep] == 0:
                heapq.heappush(ready, (degrees[dep], sccs[dep][0], dep))
    assert emitted == len(sccs), "condensation is acyclic; all components must be emitted"
    return order


def _tarjan(nodes: list[str], adj: Mapping[str, list[str]]) -> list[list[str]]:
    """Iterative Tarjan SCC; components returned with sorted members."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    result: list[list[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_i = work[-1]
            if child_i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            targets = adj[node]
            while child_i < len(targets):
                target = targets[child_i]
                child_i += 1
                if target not in index:
                    work[-1] = (node, child_i)
                    work.append((target, 0))
                    advanced = True
                    break
                if target in on_stack:
                    low[node] = min(low[node], index[target])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                members = []
                while True:
                    m = stack.pop()
                    on_stack.discard(m)
                    members.append(m)
                    if m == node:
                        break
                result.append(sorted(members))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return result


def build_plan(
    method_graph: DependencyGraph,
    class_graph: DependencyGraph,
    component_graph: DependencyGraph,
    *,
    method_owner: Mapping[str, str] | None = None,
    class_component: Mapping[str, str] | None = None,
) -> TranslationPlan:
    """Order components, classes within each component, and methods within
    each class. Class ordering uses intra-component edges only; method
    ordering uses intra-class edges only (the coarser level already
    sequences cross-boundary work).

    Roll-up maps are derived by longest-prefix matching when not supplied;
    an item that cannot be attributed to its parent raises IntegrityError.
    """
    if method_owner is None:
        method_owner = _derive_rollup(method_graph.nodes, class_graph.nodes, "method", "class")
    if class_component is None:
        class_component = _derive_rollup(class_graph.nodes, component_graph.nodes, "class", "component")
    for cls, comp in class_component.items():
        if comp not in component_graph.nodes:
            raise IntegrityError(f"class {cls!r} rolls up to unknown component {comp!r}")
    for m, cls in method_owner.items():
        if cls not in class_graph.nodes:
            raise IntegrityError(f"method {m!r} rolls up to unknown class {cls!r}")

    class_deps = class_graph.dependencies()
    method_deps = method_graph.dependencies()

    classes_by_component: dict[str, list[str]] = {c: [] for c in component_graph.nodes}
    for cls in class_graph.nodes:
        classes_by_component[class_component[cls]].append(cls)
    methods_by_class: dict[str, list[str]] = {c: [] for c in class_graph.nodes}
    for m in method_graph.nodes:
        methods_by_class[method_owner[m]].append(m)

    plan = TranslationPlan()
    for comp in order_nodes(component_graph.nodes, component_graph.dependencies()):
        comp_plan = ComponentPlan(comp)
        members = classes_by_component[comp]
        intra_class_deps = {
            c: {t for t in class_deps.get(c, set()) if class_component.get(t) == comp}
            for c in members
        }
        for cls in order_nodes(members, intra_class_deps):
            methods = methods_by_class[cls]
            intra_method_deps = {
                m: {t for t in method_deps.get(m, set()) if method_owner.get(t) == cls}
                for m in methods
            }
            comp_plan.classes.append(ClassPlan(cls, order_nodes(methods, intra_method_deps)))
        plan.components.append(comp_plan)

    n_comp, n_cls, n_meth = plan.item_counts()
    if (n_comp, n_cls, n_meth) != (
        len(component_graph.nodes),
        len(class_graph.nodes),
        len(method_graph.nodes),
    ):
        raise IntegrityError("plan does not cover every graph node exactly once")
    return plan


def _derive_rollup(
    fine_nodes: frozenset[str], coarse_nodes: frozenset[str], fine_name: str, coarse_name: str
) -> dict[str, str]:
    """Attribute each fine-grained id to the longest coarse id that prefixes
    it (dotted ids; nested classes make simple rsplit wrong)."""
    by_length = sorted(coarse_nodes, key=len, reverse=True)
    out: dict[str, str] = {}
    for node in fine_nodes:
        for candidate in by_length:
            if candidate == "" or node == candidate or node.startswith(candidate + "."):
                out[node] = candidate
                break
        else:
            raise IntegrityError(
                f"{fine_name} {node!r} does not roll up to any {coarse_name} node"
            )
    return out
