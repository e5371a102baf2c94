"""Prompt assembly: templates with named slots, provenance, size budgets.

Templates ship as editable text files next to this module. Slot fillers
are substituted in a single pass over the template, so braces inside slot
values (source code) are never re-interpreted. Every rendered envelope
tracks where each slot's content came from and an estimated size in
units of four characters.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from transmigrate.errors import AssemblyError, BudgetError
from transmigrate.knowledge.index import RetrievalResult
from transmigrate.sourcemodel.parser import AstNode

LEVELS = ("method", "class", "component", "project", "repair")

DEFAULT_BUDGET = 8000  # size units (chars / 4)

_SLOT_RE = re.compile(r"\{(\w+)\}")

NO_CONTEXT_SENTINEL = "none retrieved"
_DROPPED_SENTINEL = "[omitted: context budget]"

# Slot carrying retrieved documentation, by level.
SPEC_SLOT = {
    "method": "retrieved_specification",
    "class": "specification",
    "component": "specification",
    "project": "specification",
}

MANDATORY_SLOTS = {
    "method": ("method_name", "file_name", "method_code", "ast"),
    "class": ("class_name", "class_content", "translated_methods", "ast", "dependency"),
    "component": ("component_name", "translated_classes", "ast", "dependency"),
    "project": ("translated_components", "dependency", "resource", "configuration"),
    "repair": ("diagnostics", "prior_code", "output_requirements"),
}

# Source code and prior translations are never dropped by truncation.
_UNTRUNCATABLE = frozenset(
    {
        "method_code",
        "class_content",
        "translated_methods",
        "translated_classes",
        "translated_components",
        "prior_code",
        "diagnostics",
        "output_requirements",
    }
)

# Context is dropped in this priority order (first present wins).
_DROP_ORDER = ("__spec__", "ast", "dependency")

MANDATORY_HEADINGS = {
    "method": (
        "Input:",
        "Method Name:",
        "Method Code:",
        "Abstract Syntax Tree:",
        "Retrieved Specification:",
        "Output Requirement:",
    ),
    "class": (
        "Class Content:",
        "Translated Methods:",
        "Abstract Syntax Tree:",
        "Dependency:",
        "Specification:",
        "Output Requirement:",
    ),
    "component": (
        "Translated Classes:",
        "Abstract Syntax Tree:",
        "Dependency:",
        "Specification:",
        "Output Requirement:",
    ),
    "project": (
        "Translated Components:",
        "Dependency:",
        "Resource:",
        "Configuration:",
        "Specification:",
        "Output Requirement:",
    ),
    "repair": ("Reported Issues:", "Current Code:"),
}


@dataclass(frozen=True)
class PromptTemplate:
    level: str
    body: str

    @property
    def slots(self) -> list[str]:
        return _SLOT_RE.findall(self.body)


@dataclass
class PromptEnvelope:
    level: str
    rendered_text: str
    slot_provenance: dict[str, object]
    size_estimate: int
    slots: dict[str, str] = field(default_factory=dict)
    dropped: list[str] = field(default_factory=list)

    def headings_present(self) -> bool:
        return all(h in self.rendered_text for h in MANDATORY_HEADINGS[self.level])


def default_templates_dir() -> Path:
    return Path(__file__).parent / "templates"


def load_template(level: str, templates_dir: str | Path | None = None) -> PromptTemplate:
    """Load and validate one level's template: every slot must be known for
    the level and every mandatory heading must appear verbatim."""
    if level not in LEVELS:
        raise AssemblyError(f"unknown prompt level {level!r}")
    directory = Path(templates_dir) if templates_dir is not None else default_templates_dir()
    body = (directory / f"{level}.txt").read_text(encoding="utf-8")
    template = PromptTemplate(level=level, body=body)
    known = set(MANDATORY_SLOTS[level]) | {SPEC_SLOT.get(level, "")}
    for slot in template.slots:
        if slot not in known:
            raise AssemblyError(f"template {level!r} uses unregistered slot {slot!r}")
    for heading in MANDATORY_HEADINGS[level]:
        if heading not in body:
            raise AssemblyError(f"template {level!r} is missing heading {heading!r}")
    return template


def render_prompt(
    level: str,
    inputs: dict[str, str],
    retrieved: Sequence[RetrievalResult] = (),
    *,
    provenance: dict[str, object] | None = None,
    templates_dir: str | Path | None = None,
) -> PromptEnvelope:
    """Render one level's template.

    ``inputs`` maps slot names to their text. Retrieved chunks fill the
    level's specification slot in score order, separated by source lines;
    when none are supplied the slot reads "none retrieved". A missing
    mandatory slot raises AssemblyError naming the slot.
    """
    template = load_template(level, templates_dir)
    for slot in MANDATORY_SLOTS[level]:
        if slot not in inputs:
            raise AssemblyError(f"missing mandatory slot {slot!r} for {level} prompt")

    slots = dict(inputs)
    slot_provenance: dict[str, object] = dict(provenance or {})
    for slot in inputs:
        slot_provenance.setdefault(slot, f"input:{slot}")

    spec_slot = SPEC_SLOT.get(level)
    if spec_slot is not None and spec_slot not in slots:
        if retrieved:
            slots[spec_slot] = chunks_excerpt(retrieved)
            slot_provenance[spec_slot] = [r.chunk.chunk_id for r in retrieved]
        else:
            slots[spec_slot] = NO_CONTEXT_SENTINEL
            slot_provenance[spec_slot] = "none"

    return _render(template, slots, slot_provenance, dropped=[])


def _render(
    template: PromptTemplate,
    slots: dict[str, str],
    slot_provenance: dict[str, object],
    dropped: list[str],
) -> PromptEnvelope:
    def fill(match: re.Match[str]) -> str:
        name = match.group(1)
        if name not in slots:
            raise AssemblyError(f"missing mandatory slot {name!r} for {template.level} prompt")
        return slots[name]

    rendered = _SLOT_RE.sub(fill, template.body)
    return PromptEnvelope(
        level=template.level,
        rendered_text=rendered,
        slot_provenance=slot_provenance,
        size_estimate=size_units(rendered),
        slots=slots,
        dropped=list(dropped),
    )


def size_units(text: str) -> int:
    return math.ceil(len(text) / 4)


def truncate_context(
    envelope: PromptEnvelope,
    budget: int = DEFAULT_BUDGET,
    *,
    templates_dir: str | Path | None = None,
) -> PromptEnvelope:
    """Fit the envelope into ``budget`` size units by dropping context slots
    in priority order: retrieved specification, then the syntax-tree excerpt,
    then the dependency excerpt. Source code and prior translations are
    never dropped; if the remainder still exceeds the budget a BudgetError
    is raised. Dropped slots are recorded on the returned envelope."""
    if budget <= 0:
        raise BudgetError(f"budget must be positive, got {budget}")
    if envelope.size_estimate <= budget:
        return envelope

    template = load_template(envelope.level, templates_dir)
    slots = dict(envelope.slots)
    provenance = dict(envelope.slot_provenance)
    dropped = list(envelope.dropped)
    spec_slot = SPEC_SLOT.get(envelope.level)

    order = [spec_slot if name == "__spec__" else name for name in _DROP_ORDER]
    current = envelope
    for slot in order:
        if slot is None or slot not in slots or slot in _UNTRUNCATABLE or slot in dropped:
            continue
        if slots[slot] == _DROPPED_SENTINEL:
            continue
        slots[slot] = _DROPPED_SENTINEL
        provenance[slot] = "dropped"
        dropped.append(slot)
        current = _render(template, slots, provenance, dropped)
        if current.size_estimate <= budget:
            return current
    raise BudgetError(
        f"budget {budget} is smaller than untruncatable content "
        f"({current.size_estimate} units) for {envelope.level} prompt"
    )


def output_requirements_for(level: str, templates_dir: str | Path | None = None) -> str:
    """The literal requirements section of a level's template, reused by
    repair prompts so refinements follow the same output contract."""
    body = load_template(level, templates_dir).body
    marker = "Output Requirement:"
    at = body.find(marker)
    return body[at:].rstrip() if at >= 0 else ""


def chunks_excerpt(retrieved: Sequence[RetrievalResult]) -> str:
    """Retrieved chunks in score order, each under a source header line."""
    parts = []
    for r in retrieved:
        parts.append(f"Source: {r.chunk.source_uri}\n{r.chunk.text}")
    return "\n\n".join(parts)


def ast_excerpt(node: AstNode, data: bytes) -> str:
    """Readable s-expression of a declaration subtree; identifier leaves
    carry their source text."""
    def render(n: AstNode, depth: int) -> str:
        pad = "  " * depth
        if n.kind in ("identifier", "qualified_name", "type_reference"):
            text = data[n.start : n.end].decode("utf-8", "replace").strip()
            return f"{pad}({n.kind} {text})"
        if not n.children:
            return f"{pad}({n.kind})"
        inner = "\n".join(render(c, depth + 1) for c in n.children)
        return f"{pad}({n.kind}\n{inner})"

    return render(node, 0)


def dependency_excerpt(graph, item: str) -> str:
    """Outgoing dependencies of one item as sorted "from -> to (kind)" lines."""
    lines = [f"{f} -> {t} ({k})" for f, t, k in graph.out_edges(item)]
    return "\n".join(lines) if lines else "none"
