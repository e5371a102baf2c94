"""Resumable pipeline tying the stages together.

Stage order: analyze -> index -> plan -> translate -> validate -> report.
Every stage persists its artifacts under the output root before the state
cursor advances, so an interrupted run resumes without repeating work
(completed translation units are never re-sent to the backend). The state
file hash-guards the source tree and configuration: resuming against
modified inputs is refused.

With the mock backend and crawling disabled the whole run is
bit-deterministic: no timestamps are written, every collection is sorted,
and all randomness flows from the configured seed.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from transmigrate.backends import LiveBackend, MockBackend, BackendConfig, extract_code
from transmigrate.config import RunConfig
from transmigrate.errors import ConfigurationError, IntegrityError, OrderingError
from transmigrate.knowledge.chunks import ingest_repository
from transmigrate.knowledge.crawl import crawl_site
from transmigrate.knowledge.embed import HashedTokenEmbedder, RemoteEmbedder
from transmigrate.knowledge.index import VectorIndex, build_index, query
from transmigrate.prompts import (
    ast_excerpt,
    dependency_excerpt,
    render_prompt,
    truncate_context,
)
from transmigrate.reporting import (
    classify_issue,
    compute_project_metrics,
    draw_sample,
    emit_report,
    sample_size,
)
from transmigrate.scheduler import TranslationPlan, build_plan
from transmigrate.sourcemodel.extract import ClassDescriptor, extract_classes, method_body
from transmigrate.sourcemodel.graph import DependencyGraph, build_dependency_graph
from transmigrate.sourcemodel.parser import Ast, SourceFile, parse_source
from transmigrate.validation.checks import (
    build_translated_class_graph,
    check_references,
    compare_graphs,
    load_residue_rules,
    platform_scan,
)
from transmigrate.validation.issues import IssueRecord, ValidationReport, parse_tool_output
from transmigrate.validation.refine import TranslationUnit, refine_loop
from transmigrate.validation.tools import run_external_check

logger = logging.getLogger(__name__)

STAGES = ("analyze", "index", "plan", "translate", "validate", "report")


@dataclass
class PipelineState:
    completed_stages: list[str] = field(default_factory=list)
    unit_status: dict[str, str] = field(default_factory=dict)  # class -> pending|translated|failed
    input_hash: str = ""
    config_hash: str = ""
    seed: int = 0

    def save(self, path: Path) -> None:
        path.write_text(
            json.dumps(
                {
                    "completed_stages": self.completed_stages,
                    "unit_status": dict(sorted(self.unit_status.items())),
                    "input_hash": self.input_hash,
                    "config_hash": self.config_hash,
                    "seed": self.seed,
                },
                indent=2,
                sort_keys=True,
            )
            + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: Path) -> "PipelineState":
        raw = json.loads(path.read_text(encoding="utf-8"))
        return cls(
            completed_stages=list(raw.get("completed_stages", [])),
            unit_status=dict(raw.get("unit_status", {})),
            input_hash=raw.get("input_hash", ""),
            config_hash=raw.get("config_hash", ""),
            seed=int(raw.get("seed", 0)),
        )


def hash_source_tree(root: str | Path) -> str:
    """Content hash over every file under ``root`` (sorted relative paths)."""
    digest = hashlib.sha256()
    root = Path(root)
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        digest.update(rel.encode("utf-8"))
        digest.update(b"\0")
        digest.update(hashlib.sha256(path.read_bytes()).digest())
    return digest.hexdigest()


def hash_config(config: RunConfig) -> str:
    payload = json.dumps(config.canonical_dict(), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


class Pipeline:
    def __init__(self, config: RunConfig) -> None:
        config.validate()
        self.config = config
        self.out = Path(config.output_root)
        self.state_path = self.out / "state.json"
        self._asts: dict[str, Ast] = {}
        self._prompt_ordinal = 0
        self.state = self._load_or_init_state()

    # ---- state -----------------------------------------------------------

    def _load_or_init_state(self) -> PipelineState:
        input_hash = hash_source_tree(self.config.source_root)
        config_hash = hash_config(self.config)
        if self.state_path.is_file():
            state = PipelineState.load(self.state_path)
            if state.input_hash != input_hash or state.config_hash != config_hash:
                raise IntegrityError(
                    "refusing to resume: source tree or configuration changed since the "
                    "saved state was written (delete the output root to start over)"
                )
            return state
        return PipelineState(input_hash=input_hash, config_hash=config_hash, seed=self.config.seed)

    def _save_state(self) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        self.state.save(self.state_path)

    def _mark_stage_done(self, stage: str) -> None:
        if stage not in self.state.completed_stages:
            self.state.completed_stages.append(stage)
        self._save_state()

    # ---- shared loading ---------------------------------------------------

    def _source_files(self) -> list[SourceFile]:
        root = Path(self.config.source_root)
        files = []
        for path in sorted(root.rglob("*.java")):
            rel = path.relative_to(root).as_posix()
            files.append(SourceFile.read(path, rel, "java"))
        return files

    def _parse_all(self) -> tuple[list[SourceFile], list[ClassDescriptor]]:
        files = self._source_files()
        descriptors: list[ClassDescriptor] = []
        for f in files:
            ast = parse_source(f, self.config.grammar_dir)
            self._asts[f.path] = ast
            descriptors.extend(extract_classes(ast, self.config.grammar_dir))
        return files, descriptors

    def _require(self, artifact: Path, producing_stage: str) -> Path:
        if not artifact.exists():
            raise OrderingError(
                f"missing artifact {artifact.name!r}: run the {producing_stage!r} stage first"
            )
        return artifact

    def _embedder(self):
        k = self.config.knowledge
        if k.provider == "remote":
            if not k.remote_endpoint:
                raise ConfigurationError("remote embedding provider requires an endpoint")
            return RemoteEmbedder(k.remote_endpoint, k.embedding_dimension)
        return HashedTokenEmbedder(k.embedding_dimension)

    def _backend(self):
        opts = self.config.backend_options
        if self.config.backend == "mock":
            if opts.rules_file:
                return MockBackend.from_rules_file(opts.rules_file, opts.max_fixes_per_call)
            return MockBackend(max_fixes_per_call=opts.max_fixes_per_call)
        backend_config = BackendConfig(
            endpoint=opts.endpoint,
            model=opts.model,
            temperature=opts.temperature,
            max_output_units=opts.max_output_units,
            retry_count=opts.retry_count,
            timeout_seconds=opts.timeout_seconds,
            api_key_env=opts.api_key_env,
        )
        return LiveBackend(backend_config)

    # ---- stages ------------------------------------------------------------

    def stage_analyze(self) -> None:
        files, descriptors = self._parse_all()
        graphs = {g: build_dependency_graph(descriptors, g) for g in ("method", "class", "component")}
        _write_json(self.out / "analyze" / "classes.json", [_descriptor_dict(d) for d in descriptors])
        for name, graph in graphs.items():
            path = self.out / "analyze" / f"graph_{name}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(graph.to_json() + "\n", encoding="utf-8")
        logger.info("analyzed %d files, %d classes", len(files), len(descriptors))
        self._mark_stage_done("analyze")

    def stage_index(self) -> None:
        meta_path = self.out / "index" / "meta.json"
        if meta_path.is_file():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            if (
                meta.get("input_hash") == self.state.input_hash
                and meta.get("dimension") == self.config.knowledge.embedding_dimension
            ):
                logger.info("index cache hit; skipping embedding")
                self._mark_stage_done("index")
                return
        chunks = ingest_repository(self.config.source_root)
        crawl = self.config.knowledge.crawl
        if crawl.enabled and crawl.start_url:
            chunks.extend(crawl_site(crawl.start_url, crawl.max_depth, crawl.max_pages))
        embedder = self._embedder()
        index = build_index(chunks, embedder)
        index.save(self.out / "index" / "index.jsonl", self.out / "index" / "chunks.jsonl")
        _write_json(
            meta_path,
            {
                "input_hash": self.state.input_hash,
                "dimension": index.dimension,
                "entries": len(index),
                "embed_calls": getattr(embedder, "call_count", None),
            },
        )
        logger.info("indexed %d chunks", len(index))
        self._mark_stage_done("index")

    def stage_plan(self) -> None:
        analyze_dir = self.out / "analyze"
        self._require(analyze_dir / "graph_method.json", "analyze")
        graphs = {
            g: DependencyGraph.from_json((analyze_dir / f"graph_{g}.json").read_text(encoding="utf-8"))
            for g in ("method", "class", "component")
        }
        classes = json.loads((analyze_dir / "classes.json").read_text(encoding="utf-8"))
        method_owner = {
            f"{c['qualified_name']}.{m['name']}": c["qualified_name"]
            for c in classes
            for m in c["constructors"] + c["methods"]
        }
        class_component = {c["qualified_name"]: c["component"] for c in classes}
        plan = build_plan(
            graphs["method"],
            graphs["class"],
            graphs["component"],
            method_owner=method_owner,
            class_component=class_component,
        )
        plan_path = self.out / "plan" / "plan.jsonl"
        plan_path.parent.mkdir(parents=True, exist_ok=True)
        plan_path.write_text(plan.to_jsonl(), encoding="utf-8")
        logger.info("plan covers %s components/classes/methods", plan.item_counts())
        self._mark_stage_done("plan")

    # -- translate helpers --

    def _unit_names(self, class_names: list[str]) -> dict[str, str]:
        """Source qualified name -> translated unit base name. Simple names
        are preferred; collisions fall back to the full dotted name with
        underscores."""
        taken: dict[str, str] = {}
        mapping: dict[str, str] = {}
        for qualified in sorted(class_names):
            simple = qualified.rsplit(".", 1)[-1]
            if simple not in taken:
                taken[simple] = qualified
                mapping[qualified] = simple
            else:
                mapping[qualified] = qualified.replace(".", "_")
        return mapping

    def _dump_prompt(self, label: str, envelope) -> None:
        if not self.config.dump_prompts:
            return
        dump_dir = self.out / "prompts"
        dump_dir.mkdir(parents=True, exist_ok=True)
        safe = label.replace("/", "_").replace(".", "_")
        path = dump_dir / f"{self._prompt_ordinal:04d}_{safe}.txt"
        path.write_text(envelope.rendered_text, encoding="utf-8")
        self._prompt_ordinal += 1

    def _unit_checks(self):
        """Per-unit checks used inside the refinement loop: external syntax
        and lint tools plus the platform residue scan."""
        tools = self.config.tools
        rules = load_residue_rules()
        work_dir = self.out / "translate" / "work"

        def tool_check(template: str, source: str):
            def run(unit: TranslationUnit) -> list[IssueRecord]:
                work_dir.mkdir(parents=True, exist_ok=True)
                work_file = work_dir / unit.name
                work_file.write_text(unit.code, encoding="utf-8")
                rel = work_file.relative_to(self.out).as_posix()
                _status, output = run_external_check(
                    rel, template, tools.timeout_seconds, cwd=self.out
                )
                issues, _skipped = parse_tool_output(output, source)
                for issue in issues:
                    issue.file = unit.name
                return issues

            return run

        return [
            tool_check(tools.syntax_check_cmd, "syntax"),
            tool_check(tools.lint_cmd, "lint"),
            lambda unit: platform_scan(unit.name, unit.code, rules),
        ]

    def stage_translate(self) -> None:
        plan_path = self._require(self.out / "plan" / "plan.jsonl", "plan")
        self._require(self.out / "index" / "meta.json", "index")
        plan = TranslationPlan.from_jsonl(plan_path.read_text(encoding="utf-8"))
        files, descriptors = self._parse_all()
        by_qualified = {d.qualified_name: d for d in descriptors}
        files_by_path = {f.path: f for f in files}
        class_graph = DependencyGraph.from_json(
            self._require(self.out / "analyze" / "graph_class.json", "analyze").read_text(encoding="utf-8")
        )
        component_graph = DependencyGraph.from_json(
            self._require(self.out / "analyze" / "graph_component.json", "analyze").read_text(encoding="utf-8")
        )
        index = VectorIndex.load(
            self.out / "index" / "index.jsonl", self.out / "index" / "chunks.jsonl"
        )
        embedder = self._embedder()
        backend = self._backend()
        checks = self._unit_checks()
        k = self.config.knowledge.retrieval_k
        unit_names = self._unit_names([d.qualified_name for d in descriptors])
        _write_json(self.out / "translate" / "unit_names.json", unit_names)

        if self.config.dry_run:
            pending = [c.name for _, c in plan.iter_classes() if self.state.unit_status.get(c.name) != "translated"]
            logger.info("dry run: %d unit(s) would be translated: %s", len(pending), ", ".join(pending))
            return

        units_dir = self.out / "translate" / "units"
        initial_dir = self.out / "translate" / "initial"
        refinement_dir = self.out / "translate" / "refinement"
        component_outputs: dict[str, str] = {}

        def retrieve(text: str):
            return query(index, text, k, embedder) if len(index) else []

        for comp in plan.components:
            for cls_plan in comp.classes:
                qualified = cls_plan.name
                unit_base = unit_names[qualified]
                unit_file = f"{unit_base}.swift"
                if self.state.unit_status.get(qualified) == "translated" and (units_dir / unit_file).is_file():
                    logger.info("skipping completed unit %s", qualified)
                    continue
                descriptor = by_qualified[qualified]
                source = files_by_path[descriptor.source_path]
                ast = self._asts[descriptor.source_path]

                translated_methods: list[str] = []
                for method_id in cls_plan.methods:
                    method_name = method_id[len(qualified) + 1 :]
                    descriptor_methods = [
                        m for m in descriptor.constructors + descriptor.methods if m.name == method_name
                    ]
                    if not descriptor_methods:
                        continue
                    m = descriptor_methods[0]
                    envelope = render_prompt(
                        "method",
                        {
                            "method_name": m.name,
                            "file_name": descriptor.source_path,
                            "method_code": method_body(source, m),
                            "ast": ast_excerpt(m.ast_slice, source.data),
                        },
                        retrieved=retrieve(f"{descriptor.simple_name} {m.name}"),
                        provenance={"method_code": f"method:{method_id}"},
                    )
                    envelope = truncate_context(envelope, self.config.prompt_budget)
                    self._dump_prompt(f"method_{method_id}", envelope)
                    translated_methods.append(
                        f"// method: {m.name}\n{extract_code(backend.translate(envelope)).code}"
                    )

                class_content = source.data[descriptor.span[0] : descriptor.span[1]].decode("utf-8")
                class_nodes = [
                    n
                    for n in ast.root.walk()
                    if n.span == descriptor.span and n.kind.endswith("_declaration")
                ]
                envelope = render_prompt(
                    "class",
                    {
                        "class_name": qualified,
                        "class_content": class_content,
                        "translated_methods": "\n\n".join(translated_methods) or "none",
                        "ast": ast_excerpt(class_nodes[0], source.data) if class_nodes else "unavailable",
                        "dependency": dependency_excerpt(class_graph, qualified),
                    },
                    retrieved=retrieve(f"{descriptor.simple_name} {descriptor.component}"),
                    provenance={"class_content": f"class:{qualified}"},
                )
                envelope = truncate_context(envelope, self.config.prompt_budget)
                self._dump_prompt(f"class_{qualified}", envelope)
                initial_code = extract_code(backend.translate(envelope)).code

                unit = TranslationUnit(name=unit_file, level="class", code=initial_code)
                final_unit, state = refine_loop(unit, backend, checks, self.config.max_rounds)

                initial_dir.mkdir(parents=True, exist_ok=True)
                units_dir.mkdir(parents=True, exist_ok=True)
                (initial_dir / unit_file).write_text(initial_code, encoding="utf-8")
                (units_dir / unit_file).write_text(final_unit.code, encoding="utf-8")
                _write_json(
                    refinement_dir / f"{unit_base}.json",
                    {
                        "unit": unit_file,
                        "class": qualified,
                        "rounds": state.round,
                        "degraded": state.degraded,
                        "history": [
                            {"code": code, "report": report.to_dict()}
                            for code, report in state.history
                        ],
                    },
                )
                self.state.unit_status[qualified] = "translated"
                self._save_state()

            member_units = [
                f"// class: {c.name}\n" + (units_dir / f"{unit_names[c.name]}.swift").read_text(encoding="utf-8")
                for c in comp.classes
            ]
            comp_envelope = render_prompt(
                "component",
                {
                    "component_name": comp.name or "(default)",
                    "translated_classes": "\n\n".join(member_units) or "none",
                    "ast": "\n".join(f"(class_declaration {c.name})" for c in comp.classes) or "none",
                    "dependency": dependency_excerpt(component_graph, comp.name),
                },
                retrieved=retrieve(comp.name or "project root"),
            )
            comp_envelope = truncate_context(comp_envelope, self.config.prompt_budget)
            self._dump_prompt(f"component_{comp.name or 'default'}", comp_envelope)
            comp_code = extract_code(backend.translate(comp_envelope)).code
            comp_file = (comp.name or "default").replace("/", "_") or "default"
            comp_dir = self.out / "translate" / "components"
            comp_dir.mkdir(parents=True, exist_ok=True)
            (comp_dir / f"{comp_file}.swift").write_text(comp_code, encoding="utf-8")
            component_outputs[comp.name] = comp_code

        project_envelope = render_prompt(
            "project",
            {
                "translated_components": "\n\n".join(
                    f"// component: {name or '(default)'}\n{code}"
                    for name, code in sorted(component_outputs.items())
                )
                or "none",
                "dependency": "\n".join(
                    f"{f} -> {t} ({kind})" for f, t, kind in sorted(component_graph.edges)
                )
                or "none",
                "resource": self._resource_listing(),
                "configuration": self._configuration_listing(),
            },
            retrieved=retrieve(self.config.project_name),
        )
        project_envelope = truncate_context(project_envelope, self.config.prompt_budget)
        self._dump_prompt("project", project_envelope)
        project_code = extract_code(backend.translate(project_envelope)).code
        (self.out / "translate" / "project.swift").write_text(project_code, encoding="utf-8")
        self._mark_stage_done("translate")

    def _resource_listing(self) -> str:
        root = Path(self.config.source_root)
        resources = sorted(
            p.relative_to(root).as_posix()
            for p in root.rglob("*")
            if p.is_file() and "res" in p.relative_to(root).parts
        )
        return "\n".join(resources) or "none"

    def _configuration_listing(self) -> str:
        root = Path(self.config.source_root)
        parts = []
        for name in ("AndroidManifest.xml", "build.gradle", "settings.gradle"):
            for p in sorted(root.rglob(name)):
                rel = p.relative_to(root).as_posix()
                parts.append(f"--- {rel}\n{p.read_text(encoding='utf-8', errors='replace')}")
        return "\n".join(parts) or "none"

    def stage_validate(self) -> None:
        units_dir = self._require(self.out / "translate" / "units", "translate")
        initial_dir = self.out / "translate" / "initial"
        refinement_dir = self.out / "translate" / "refinement"
        _files, descriptors = self._parse_all()
        source_class_graph = DependencyGraph.from_json(
            self._require(self.out / "analyze" / "graph_class.json", "analyze").read_text(encoding="utf-8")
        )
        unit_names = json.loads(
            self._require(self.out / "translate" / "unit_names.json", "translate").read_text(encoding="utf-8")
        )
        mapping = {qualified: base for qualified, base in unit_names.items()}
        unit_of = {base: f"{base}.swift" for base in unit_names.values()}

        def load_units(directory: Path) -> dict[str, str]:
            return {
                p.name: p.read_text(encoding="utf-8") for p in sorted(directory.glob("*.swift"))
            }

        final_units = load_units(units_dir)
        initial_units = load_units(initial_dir) if initial_dir.is_dir() else dict(final_units)

        def corpus_report(units: dict[str, str]) -> ValidationReport:
            report = ValidationReport()
            report.extend(check_references(units, descriptors, grammar_dir=self.config.grammar_dir))
            translated_graph = build_translated_class_graph(units, self.config.grammar_dir)
            report.extend(compare_graphs(source_class_graph, translated_graph, mapping, unit_of))
            return report

        def round_report(payload: dict, which: str) -> ValidationReport:
            history = payload["history"]
            entry = history[0] if which == "before" else history[-1]
            return ValidationReport.from_dict(entry["report"])

        before = corpus_report(initial_units)
        after = corpus_report(final_units)
        for payload_path in sorted(refinement_dir.glob("*.json")):
            payload = json.loads(payload_path.read_text(encoding="utf-8"))
            before = before.merged_with(round_report(payload, "before"))
            after = after.merged_with(round_report(payload, "after"))

        def validity(units: dict[str, str], report: ValidationReport) -> dict[str, bool]:
            flags = {}
            for name in sorted(units):
                issues = report.files.get(name, [])
                syntax_ok = not any(i.source == "syntax" and i.severity == "error" for i in issues)
                refs_ok = not any(
                    i.source == "internal_reference" and i.severity == "error" for i in issues
                )
                graph_ok = not any(i.source == "graph_diff" and i.severity == "error" for i in issues)
                flags[name] = syntax_ok and refs_ok and graph_ok
            return flags

        _write_json(self.out / "validate" / "before.json", before.to_dict())
        _write_json(self.out / "validate" / "after.json", after.to_dict())
        _write_json(
            self.out / "validate" / "validity.json",
            {
                "before": validity(initial_units, before),
                "after": validity(final_units, after),
            },
        )
        self._mark_stage_done("validate")

    def stage_report(self) -> None:
        validate_dir = self.out / "validate"
        self._require(validate_dir / "before.json", "validate")
        before = ValidationReport.from_dict(
            json.loads((validate_dir / "before.json").read_text(encoding="utf-8"))
        )
        after = ValidationReport.from_dict(
            json.loads((validate_dir / "after.json").read_text(encoding="utf-8"))
        )
        validity = json.loads((validate_dir / "validity.json").read_text(encoding="utf-8"))

        metrics = compute_project_metrics(
            self.config.project_name,
            before,
            after,
            validity["before"],
            validity["after"],
        )

        pool: list[IssueRecord] = []
        seen: set[str] = set()
        for issue in before.all_issues() + after.all_issues():
            if issue.issue_id not in seen:
                seen.add(issue.issue_id)
                pool.append(issue)
        extras: dict = {"seed": self.config.seed}
        if self.config.sample_issues and pool:
            n = sample_size(len(pool))
            sample = draw_sample(pool, min(n, len(pool)), self.config.seed)
            chosen = {int(sid.split(":", 1)[0]) for sid in sample.selected_ids}
            pool = [issue for idx, issue in enumerate(pool) if idx in chosen]
            extras["sample"] = {
                "population": sample.population_size,
                "size": sample.sample_size,
                "confidence": sample.confidence,
                "margin": sample.margin,
            }
        labels = [classify_issue(i) for i in pool]

        report_dir = self.out / "report"
        report_dir.mkdir(parents=True, exist_ok=True)
        (report_dir / "report.json").write_text(
            emit_report([metrics], labels, "json", extras), encoding="utf-8"
        )
        (report_dir / "report.md").write_text(
            emit_report([metrics], labels, "markdown", extras), encoding="utf-8"
        )
        self._mark_stage_done("report")

    # ---- drivers -----------------------------------------------------------

    def run_stage(self, name: str) -> None:
        runner = {
            "analyze": self.stage_analyze,
            "index": self.stage_index,
            "plan": self.stage_plan,
            "translate": self.stage_translate,
            "validate": self.stage_validate,
            "report": self.stage_report,
        }.get(name)
        if runner is None:
            raise ConfigurationError(f"unknown stage {name!r}")
        runner()

    def run(self) -> None:
        for stage in STAGES:
            if stage in self.state.completed_stages:
                logger.info("stage %s already complete; skipping", stage)
                continue
            logger.info("running stage %s", stage)
            self.run_stage(stage)
            if self.config.dry_run and stage == "plan":
                logger.info("dry run: stopping before translate")
                return


def _descriptor_dict(d: ClassDescriptor) -> dict:
    def method_dict(m) -> dict:
        return {"name": m.name, "span": list(m.span), "calls": m.calls}

    return {
        "qualified_name": d.qualified_name,
        "kind": d.kind,
        "span": list(d.span),
        "superclass": d.superclass,
        "interfaces": d.interfaces,
        "fields": [{"name": f.name, "declared_type": f.declared_type} for f in d.fields],
        "constructors": [method_dict(m) for m in d.constructors],
        "methods": [method_dict(m) for m in d.methods],
        "component": d.component,
        "source_path": d.source_path,
        "imports": d.imports,
        "degraded": d.degraded,
    }
