"""Document graph over chunk nodes: hierarchy, sibling order, cross-refs."""

from __future__ import annotations

from dataclasses import dataclass, field

from groundline.corpus.model import Corpus

EDGE_KINDS = ("parent", "child", "next_sibling", "prev_sibling", "cross_ref")


class UnknownNodeError(KeyError):
    """Raised when an edge query names a node the graph does not contain."""


@dataclass
class DocumentGraph:
    """Forest of parent/child edges plus sibling chains and cross-refs.

    Parenthood follows hierarchical paths: a node's parent is the node in
    the same document whose path is the longest proper dotted prefix of its
    own. All neighbor lists are in document (byte) order.
    """

    node_ids: list[str]
    parent: dict[str, str] = field(default_factory=dict)
    children: dict[str, list[str]] = field(default_factory=dict)
    next_sibling: dict[str, str] = field(default_factory=dict)
    prev_sibling: dict[str, str] = field(default_factory=dict)
    cross_refs: dict[str, list[str]] = field(default_factory=dict)
    _known: set[str] = field(default_factory=set, repr=False)

    def __post_init__(self) -> None:
        self._known = set(self.node_ids)

    def neighbors(self, node_id: str, edge_kind: str) -> list[str]:
        if node_id not in self._known:
            raise UnknownNodeError(node_id)
        if edge_kind == "parent":
            parent = self.parent.get(node_id)
            return [parent] if parent is not None else []
        if edge_kind == "child":
            return list(self.children.get(node_id, ()))
        if edge_kind == "next_sibling":
            nxt = self.next_sibling.get(node_id)
            return [nxt] if nxt is not None else []
        if edge_kind == "prev_sibling":
            prev = self.prev_sibling.get(node_id)
            return [prev] if prev is not None else []
        if edge_kind == "cross_ref":
            return list(self.cross_refs.get(node_id, ()))
        raise ValueError(f"unknown edge kind {edge_kind!r}")

    def all_neighbors(self, node_id: str) -> list[str]:
        """Structural neighborhood: parent, children, siblings, cross-refs."""
        out: list[str] = []
        for kind in EDGE_KINDS:
            out.extend(self.neighbors(node_id, kind))
        return out

    def edge_count(self) -> int:
        n = sum(len(v) for v in self.children.values())
        n += len(self.next_sibling) + len(self.prev_sibling)
        n += sum(len(v) for v in self.cross_refs.values())
        n += len(self.parent)
        return n


def _path_prefixes(path: str) -> list[str]:
    """Proper dotted prefixes of ``path``, longest first."""
    segments = path.split(".")
    return [".".join(segments[:i]) for i in range(len(segments) - 1, 0, -1)]


def build_graph(corpus: Corpus, cross_ref_pairs: list[tuple[str, str]] | None = None) -> DocumentGraph:
    graph = DocumentGraph(node_ids=[n.node_id for n in corpus.nodes])
    for doc_id in corpus.documents:
        nodes = corpus.doc_nodes(doc_id)
        first_at_path: dict[str, str] = {}
        for node in nodes:
            first_at_path.setdefault(node.hier_path, node.node_id)
        for node in nodes:
            for prefix in _path_prefixes(node.hier_path):
                parent_id = first_at_path.get(prefix)
                if parent_id is not None:
                    graph.parent[node.node_id] = parent_id
                    graph.children.setdefault(parent_id, []).append(node.node_id)
                    break
        # Sibling chains group nodes under one parent (roots share None).
        by_parent: dict[str | None, list[str]] = {}
        for node in nodes:
            by_parent.setdefault(graph.parent.get(node.node_id), []).append(node.node_id)
        for siblings in by_parent.values():
            for left, right in zip(siblings, siblings[1:]):
                graph.next_sibling[left] = right
                graph.prev_sibling[right] = left

    for a, b in cross_ref_pairs or ():
        if a not in graph._known or b not in graph._known:
            raise UnknownNodeError(a if a not in graph._known else b)
        if b not in graph.cross_refs.setdefault(a, []):
            graph.cross_refs[a].append(b)
        if a not in graph.cross_refs.setdefault(b, []):
            graph.cross_refs[b].append(a)
    return graph
