"""Internal validation checks over translated units.

Three corpus-level checks mirror the source-side analysis:

* reference scan: project-origin symbols referenced in translated code
  must be defined somewhere in the translated set (or be allowlisted
  platform symbols);
* graph comparison: every source class-dependency edge must survive, under
  a (default identity) name mapping: missing images are errors, edges
  with no source counterpart are warnings;
* platform residue scan: pattern rules over translated text flag source
  platform constructs that survived translation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from transmigrate.errors import ArgumentError, MappingError
from transmigrate.sourcemodel.extract import ClassDescriptor, extract_classes, identifier_occurrences
from transmigrate.sourcemodel.graph import DependencyGraph, build_dependency_graph
from transmigrate.sourcemodel.grammar import load_grammar
from transmigrate.sourcemodel.parser import SourceFile, parse_source
from transmigrate.validation.issues import IssueRecord


@dataclass(frozen=True)
class ResidueRule:
    rule_id: str
    pattern: str
    message: str
    severity: str = "error"

    @property
    def category(self) -> str:
        return self.rule_id.split(".", 1)[0]

    def compiled(self) -> re.Pattern[str]:
        return re.compile(self.pattern, flags=re.MULTILINE)


def default_residue_rules_path() -> Path:
    return Path(__file__).parent / "residue_rules.json"


def load_residue_rules(path: str | Path | None = None) -> list[ResidueRule]:
    raw = json.loads(Path(path or default_residue_rules_path()).read_text(encoding="utf-8"))
    return [
        ResidueRule(
            rule_id=e["id"],
            pattern=e["pattern"],
            message=e["message"],
            severity=e.get("severity", "error"),
        )
        for e in raw["rules"]
    ]


def load_platform_allowlist(path: str | Path | None = None) -> set[str]:
    p = Path(path) if path else Path(__file__).parent / "platform_allowlist.json"
    return set(json.loads(p.read_text(encoding="utf-8")))


def platform_scan(
    unit_name: str, code: str, rules: Sequence[ResidueRule] | None = None
) -> list[IssueRecord]:
    """One platform issue per rule match, carrying the matched pattern id."""
    if rules is None:
        rules = load_residue_rules()
    issues: list[IssueRecord] = []
    for rule in rules:
        for match in rule.compiled().finditer(code):
            line = code.count("\n", 0, match.start()) + 1
            col = match.start() - (code.rfind("\n", 0, match.start()) + 1) + 1
            snippet = match.group(0).strip()
            issues.append(
                IssueRecord(
                    file=unit_name,
                    line=line,
                    column=col,
                    severity=rule.severity,
                    rule=rule.rule_id,
                    message=f"{rule.message} [matched: {snippet}]",
                    source="platform",
                )
            )
    issues.sort(key=lambda i: (i.line or 0, i.column or 0, i.rule or ""))
    return issues


def translated_definitions(
    units: Mapping[str, str], grammar_dir: str | Path | None = None
) -> set[str]:
    """Names defined anywhere in the translated corpus: types, methods,
    initializers, and top-level functions."""
    defined: set[str] = set()
    for name in sorted(units):
        ast = parse_source(SourceFile(name, units[name], "swift"), grammar_dir)
        for cls in extract_classes(ast, grammar_dir):
            defined.add(cls.simple_name)
            for m in cls.all_methods():
                defined.add(m.name)
            for f in cls.fields:
                defined.add(f.name)
        for node in ast.root.children:
            if node.kind in ("method_declaration", "constructor_declaration"):
                ident = node.first("identifier")
                if ident is not None:
                    defined.add(ast.source.data[ident.start : ident.end].decode("utf-8"))
    return defined


def check_references(
    units: Mapping[str, str],
    source_classes: Sequence[ClassDescriptor],
    allowlist: set[str] | None = None,
    grammar_dir: str | Path | None = None,
) -> list[IssueRecord]:
    """Flag references to project-origin symbols (source classes, methods,
    constructors) that have no definition in the translated set and are not
    allowlisted platform names. One issue per (unit, symbol), anchored at
    the symbol's first occurrence."""
    profile = load_grammar("swift", grammar_dir)
    allow = load_platform_allowlist() if allowlist is None else set(allowlist)
    project_symbols: set[str] = set()
    for cls in source_classes:
        project_symbols.add(cls.simple_name)
        for m in cls.all_methods():
            project_symbols.add(m.name)
    defined = translated_definitions(units, grammar_dir)

    issues: list[IssueRecord] = []
    for name in sorted(units):
        first_occurrence: dict[str, tuple[int, int]] = {}
        for sym, _offset, line, col in identifier_occurrences(units[name], profile):
            first_occurrence.setdefault(sym, (line, col))
        for sym in sorted(first_occurrence):
            if sym in project_symbols and sym not in defined and sym not in allow:
                line, col = first_occurrence[sym]
                issues.append(
                    IssueRecord(
                        file=name,
                        line=line,
                        column=col,
                        severity="error",
                        rule="missing_definition",
                        message=f"reference to project symbol '{sym}' has no definition in the translated files",
                        source="internal_reference",
                    )
                )
    return issues


def build_translated_class_graph(
    units: Mapping[str, str], grammar_dir: str | Path | None = None
) -> DependencyGraph:
    """Class-granularity dependency graph of the translated corpus.

    Extensions of a type share its name; their members are merged into the
    primary declaration instead of colliding with it."""
    descriptors: list[ClassDescriptor] = []
    for name in sorted(units):
        ast = parse_source(SourceFile(name, units[name], "swift"), grammar_dir)
        descriptors.extend(extract_classes(ast, grammar_dir))
    merged: dict[str, ClassDescriptor] = {}
    for desc in descriptors:
        primary = merged.get(desc.qualified_name)
        if primary is None:
            merged[desc.qualified_name] = desc
            continue
        primary.methods.extend(desc.methods)
        primary.constructors.extend(desc.constructors)
        primary.fields.extend(desc.fields)
        primary.class_level_calls.extend(desc.class_level_calls)
        primary.interfaces.extend(i for i in desc.interfaces if i not in primary.interfaces)
        primary.imports.extend(i for i in desc.imports if i not in primary.imports)
        if primary.superclass is None:
            primary.superclass = desc.superclass
        primary.degraded = primary.degraded or desc.degraded
    return build_dependency_graph(list(merged.values()), "class")


def compare_graphs(
    source_graph: DependencyGraph,
    translated_graph: DependencyGraph,
    mapping: Mapping[str, str] | None = None,
    unit_of: Mapping[str, str] | None = None,
) -> list[IssueRecord]:
    """Compare dependency structure across the translation boundary.

    ``mapping`` takes source class names to translated ones (identity by
    default) and must be injective. A source edge whose endpoint pair has
    no edge at all in the translated graph is a missing-dependency error;
    a translated edge between mapped classes with no source counterpart is
    a warning. Edge kinds are reported but do not constrain matching,
    since the platforms express the same dependency through different
    constructs (imports do not exist per-class in the target language).
    """
    if source_graph.granularity != "class" or translated_graph.granularity != "class":
        raise ArgumentError("graph comparison requires class-granularity graphs")
    if mapping is None:
        mapping = {n: n for n in source_graph.nodes}
    values = list(mapping.values())
    if len(set(values)) != len(values):
        raise MappingError("class-name mapping is not injective")

    translated_pairs: dict[tuple[str, str], set[str]] = {}
    for f, t, k in translated_graph.edges:
        translated_pairs.setdefault((f, t), set()).add(k)
    source_pairs = {(mapping[f], mapping[t]) for f, t, _ in source_graph.edges if f in mapping and t in mapping}

    def unit_for(translated_class: str) -> str:
        if unit_of and translated_class in unit_of:
            return unit_of[translated_class]
        return translated_class

    issues: list[IssueRecord] = []
    for f, t, k in sorted(source_graph.edges):
        if f not in mapping or t not in mapping:
            continue
        tf, tt = mapping[f], mapping[t]
        if (tf, tt) not in translated_pairs:
            issues.append(
                IssueRecord(
                    file=unit_for(tf),
                    line=None,
                    column=None,
                    severity="error",
                    rule="missing_edge",
                    message=f"dependency {f} -> {t} ({k}) is not preserved in the translated code",
                    source="graph_diff",
                )
            )
    mapped_targets = set(mapping.values())
    for (tf, tt), kinds in sorted(translated_pairs.items()):
        if tf in mapped_targets and tt in mapped_targets and (tf, tt) not in source_pairs:
            issues.append(
                IssueRecord(
                    file=unit_for(tf),
                    line=None,
                    column=None,
                    severity="warning",
                    rule="extra_edge",
                    message=f"translated code adds dependency {tf} -> {tt} ({', '.join(sorted(kinds))})",
                    source="graph_diff",
                )
            )
    return issues
