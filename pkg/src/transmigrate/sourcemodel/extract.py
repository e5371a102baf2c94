"""Descriptor extraction: classes, methods, fields, call sites.

Works purely on the parse tree plus the token stream, so extraction is a
pure per-file function. Call sites are syntactic: an identifier directly
followed by ``(`` that is not a control keyword. Receivers (the identifier
before a ``.``) and constructor invocations are recorded to support
name-based resolution during graph construction; no type inference is
attempted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from transmigrate.errors import IntegrityError
from transmigrate.sourcemodel import lexer
from transmigrate.sourcemodel.grammar import GrammarProfile, load_grammar
from transmigrate.sourcemodel.lexer import IDENT, PUNCT, Token
from transmigrate.sourcemodel.parser import (
    TYPE_DECLARATION_KINDS,
    Ast,
    AstNode,
    SourceFile,
    parse_source,
)

_BASE_TYPE_RE = re.compile(r"[A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)*")


@dataclass(frozen=True)
class CallSite:
    """One syntactic invocation inside a body span."""

    name: str
    receiver: str | None
    offset: int
    is_constructor: bool = False


@dataclass
class FieldInfo:
    name: str
    declared_type: str

    def base_type(self) -> str | None:
        m = _BASE_TYPE_RE.search(self.declared_type)
        return m.group(0) if m else None


@dataclass
class MethodDescriptor:
    name: str
    owner: str
    span: tuple[int, int]
    ast_slice: AstNode
    calls: list[str] = field(default_factory=list)
    call_sites: list[CallSite] = field(default_factory=list)
    is_constructor: bool = False

    @property
    def node_id(self) -> str:
        return f"{self.owner}.{self.name}"


@dataclass
class ClassDescriptor:
    qualified_name: str
    kind: str  # "class" | "interface" | "enum"
    span: tuple[int, int]
    superclass: str | None
    interfaces: list[str]
    fields: list[FieldInfo]
    constructors: list[MethodDescriptor]
    methods: list[MethodDescriptor]
    component: str
    source_path: str
    imports: list[str] = field(default_factory=list)
    degraded: bool = False
    # Call sites in field initializers / enum bodies: class-level dependencies
    # with no owning method.
    class_level_calls: list[CallSite] = field(default_factory=list)

    @property
    def simple_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]

    def all_methods(self) -> list[MethodDescriptor]:
        return self.constructors + self.methods


def extract_classes(ast: Ast, grammar_dir: str | Path | None = None) -> list[ClassDescriptor]:
    """One descriptor per type declaration, nested types included (dotted
    qualified names). Declarations containing parse errors are emitted with
    ``degraded=True``, never dropped."""
    profile = load_grammar(ast.source.language, grammar_dir)
    package = _package_of(ast)
    imports = [
        _node_text(ast, qn)
        for imp in ast.root.children
        if imp.kind == "import_declaration"
        for qn in imp.children
        if qn.kind == "qualified_name"
    ]
    component = package if profile.package_keyword else _posix_dirname(ast.source.path)

    descriptors: list[ClassDescriptor] = []

    def visit(node: AstNode, prefix: str) -> None:
        for child in node.children:
            if child.kind in TYPE_DECLARATION_KINDS:
                _extract_type(ast, profile, child, prefix, package, component, imports, descriptors, visit)
            elif child.kind == "type_body":
                visit(child, prefix)

    visit(ast.root, "")
    return descriptors


def _extract_type(
    ast: Ast,
    profile: GrammarProfile,
    node: AstNode,
    prefix: str,
    package: str,
    component: str,
    imports: list[str],
    out: list[ClassDescriptor],
    visit,
) -> None:
    name_node = node.first("identifier")
    simple = _node_text(ast, name_node) if name_node else "<anonymous>"
    dotted = f"{prefix}.{simple}" if prefix else simple
    qualified = f"{package}.{dotted}" if package else dotted

    kind = _descriptor_kind(profile, node.kind)
    superclass = None
    interfaces: list[str] = []
    for child in node.children:
        if child.kind == "superclass_reference":
            superclass = _node_text(ast, child)
        elif child.kind == "interface_reference":
            interfaces.append(_node_text(ast, child))

    body = node.first("type_body")
    methods: list[MethodDescriptor] = []
    constructors: list[MethodDescriptor] = []
    fields: list[FieldInfo] = []
    class_level_calls: list[CallSite] = []
    degraded = False

    if body is not None:
        nested_type_spans = [c.span for c in body.children if c.kind in TYPE_DECLARATION_KINDS]
        for member in body.children:
            if member.kind in ("method_declaration", "constructor_declaration"):
                desc = _extract_method(ast, profile, member, qualified)
                if member.kind == "constructor_declaration":
                    constructors.append(desc)
                else:
                    methods.append(desc)
            elif member.kind == "field_declaration":
                fields.extend(_extract_fields(ast, member))
                body_spans = [c.span for c in member.children if c.kind == "block"]
                init_sites = _call_sites_in(ast, profile, member.span, exclude=body_spans)
                class_level_calls.extend(init_sites)
            elif member.kind == "error":
                degraded = True
        if not degraded:
            degraded = any(
                n.kind == "error"
                for n in body.walk()
                if not any(s <= n.start and n.end <= e for s, e in nested_type_spans)
            )

    out.append(
        ClassDescriptor(
            qualified_name=qualified,
            kind=kind,
            span=node.span,
            superclass=superclass,
            interfaces=interfaces,
            fields=fields,
            constructors=constructors,
            methods=methods,
            component=component,
            source_path=ast.source.path,
            imports=list(imports),
            degraded=degraded,
            class_level_calls=class_level_calls,
        )
    )
    if body is not None:
        visit(body, dotted)


def _extract_method(ast: Ast, profile: GrammarProfile, node: AstNode, owner: str) -> MethodDescriptor:
    name_node = node.first("identifier")
    name = _node_text(ast, name_node) if name_node else "<anonymous>"
    block = node.first("block")
    sites: list[CallSite] = []
    if block is not None:
        sites = _call_sites_in(ast, profile, block.span, exclude=[])
    return MethodDescriptor(
        name=name,
        owner=owner,
        span=node.span,
        ast_slice=node,
        calls=[s.name for s in sites],
        call_sites=sites,
        is_constructor=node.kind == "constructor_declaration",
    )


def _extract_fields(ast: Ast, node: AstNode) -> list[FieldInfo]:
    type_node = node.first("type_reference")
    declared = _node_text(ast, type_node).strip() if type_node else ""
    return [
        FieldInfo(name=_node_text(ast, c), declared_type=declared)
        for c in node.children
        if c.kind == "identifier"
    ]


def _call_sites_in(
    ast: Ast,
    profile: GrammarProfile,
    span: tuple[int, int],
    exclude: list[tuple[int, int]],
) -> list[CallSite]:
    start, end = span
    toks = [t for t in ast.tokens if start <= t.start and t.end <= end]
    sites: list[CallSite] = []
    for i, tok in enumerate(toks):
        if tok.kind != IDENT or tok.text in profile.call_blocklist:
            continue
        if any(s <= tok.start and tok.end <= e for s, e in exclude):
            continue
        receiver = None
        is_ctor = False
        if i >= 1:
            prev = toks[i - 1]
            if prev.kind == PUNCT and prev.text == "." and i >= 2 and toks[i - 2].kind == IDENT:
                receiver = toks[i - 2].text
            elif (
                profile.constructor_keyword
                and prev.kind == IDENT
                and prev.text == profile.constructor_keyword
            ):
                is_ctor = True
        paren_at = i + 1
        if paren_at < len(toks) and toks[paren_at].kind == PUNCT and toks[paren_at].text == "<":
            # Generic constructor/type invocations: name<args>( . Only
            # type-like names take the lookahead, so comparison chains on
            # ordinary variables never masquerade as calls.
            if is_ctor or tok.text[:1].isupper():
                after = _generic_arguments_end(toks, paren_at)
                if after is None:
                    continue
                paren_at = after
            else:
                continue
        if paren_at >= len(toks) or toks[paren_at].kind != PUNCT or toks[paren_at].text != "(":
            continue
        sites.append(CallSite(name=tok.text, receiver=receiver, offset=tok.start, is_constructor=is_ctor))
    return sites


_GENERIC_PUNCT = frozenset({"<", ">", ",", ".", "?", "&", "[", "]", "@"})


def _generic_arguments_end(toks: list[Token], at: int) -> int | None:
    """Index one past the '>' matching the '<' at ``at``, or None when the
    run contains anything a generic argument list cannot."""
    depth = 0
    j = at
    while j < len(toks):
        t = toks[j]
        if t.kind == PUNCT:
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t.text not in _GENERIC_PUNCT:
                return None
        elif t.kind != IDENT:
            return None
        j += 1
    return None


def method_body(file: SourceFile, m: MethodDescriptor) -> str:
    """Exact source text of the method: the byte-span substring.

    Raises IntegrityError when the span falls outside the file, which
    indicates the snapshot changed after analysis.
    """
    start, end = m.span
    data = file.data
    if start < 0 or end > len(data) or start > end:
        raise IntegrityError(
            f"method span {m.span} outside {file.path} (0..{len(data)}): snapshot drift"
        )
    return data[start:end].decode("utf-8")


def reparse_matches(file: SourceFile, m: MethodDescriptor, grammar_dir: str | Path | None = None) -> bool:
    """Round-trip check: re-parsing the extracted body yields a declaration
    tree equivalent to ``m.ast_slice`` up to the span offset shift."""
    text = method_body(file, m)
    fragment = SourceFile(path=file.path + "#fragment", text=text, language=file.language)
    ast = parse_source(fragment, grammar_dir)
    wanted = "constructor_declaration" if m.is_constructor else "method_declaration"
    candidates = [n for n in ast.root.children if n.kind in (wanted, "method_declaration", "constructor_declaration")]
    if not candidates:
        return False
    return _equal_modulo_offset(candidates[0], m.ast_slice, m.span[0])


def _equal_modulo_offset(reparsed: AstNode, original: AstNode, base: int) -> bool:
    if reparsed.kind != original.kind:
        # A constructor re-parsed without its enclosing class is
        # indistinguishable from a method; accept that pair.
        pair = {reparsed.kind, original.kind}
        if pair != {"method_declaration", "constructor_declaration"}:
            return False
    if (reparsed.start, reparsed.end) != (original.start - base, original.end - base):
        return False
    if len(reparsed.children) != len(original.children):
        return False
    return all(
        _equal_modulo_offset(r, o, base) for r, o in zip(reparsed.children, original.children)
    )


def identifier_occurrences(text: str, profile: GrammarProfile) -> list[tuple[str, int, int, int]]:
    """All non-keyword identifiers in ``text`` as (name, byte offset, line, col)."""
    data = text.encode("utf-8")
    out = []
    for tok in lexer.tokenize(data, profile):
        if tok.kind == IDENT and tok.text not in profile.keywords:
            line, col = lexer.line_and_column(data, tok.start)
            out.append((tok.text, tok.start, line, col))
    return out


def _descriptor_kind(profile: GrammarProfile, node_kind: str) -> str:
    if node_kind == "annotation_declaration":
        return "interface"
    keyword = node_kind.removesuffix("_declaration")
    return profile.type_keywords.get(keyword, "class")


def _package_of(ast: Ast) -> str:
    for child in ast.root.children:
        if child.kind == "package_declaration":
            qn = child.first("qualified_name")
            if qn is not None:
                return _node_text(ast, qn)
    return ""


def _node_text(ast: Ast, node: AstNode | None) -> str:
    if node is None:
        return ""
    return ast.source.data[node.start : node.end].decode("utf-8")


def _posix_dirname(path: str) -> str:
    posix = path.replace("\\", "/")
    if "/" not in posix:
        return ""
    return posix.rsplit("/", 1)[0]
