"""Parser and printer for the indented threshold-condition tree format.

Accepted per line, in any mix:

    ucellsize < 2.5
    - bnuclei >= 4.5000 then classe = malignant (52.94 % of 17 examples)
    sepics < 2,5000 then class = benign (99.43 % of 349 examples)

Bullets and emphasis asterisks are noise, "class"/"classe" and
"examples"/"cases" are interchangeable, decimals may use "." or ",", and the
high-branch operator may be ">=" or "≥".  Structure is recovered from the
complementary sibling conditions (same attribute and threshold, opposite
operator), so mangled indentation does not matter.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .tree import DecisionTree, LeafNode, Node, SplitNode, TreeFormatError

_NUM = r"-?\d+(?:[.,]\d+)?(?:[eE][-+]?\d+)?"
_COND_RE = re.compile(
    rf"^(?P<attr>[^\s<>=]+)\s*(?P<op><|>=|≥)\s*(?P<t>{_NUM})\s*(?:then\b(?P<rest>.*))?$"
)
_LEAF_RE = re.compile(
    rf"^\s*classe?\s*=\s*(?P<cls>\S+)\s*"
    rf"\(\s*(?P<pct>{_NUM})\s*%\s*of\s*(?P<n>\d+)\s*(?:examples?|cases?)\s*\)\s*$"
)
_BARE_LEAF_RE = re.compile(r"^then\b(?P<rest>.*)$")


def _num(text: str) -> float:
    return float(text.replace(",", "."))


@dataclass(frozen=True)
class _Line:
    lineno: int
    attr: str | None
    op: str | None
    threshold: float | None
    leaf: tuple[str, float, int] | None  # (class, purity_pct, count)


def _strip_noise(raw: str) -> str:
    text = raw.strip()
    text = re.sub(r"^[-*•]+\s*", "", text)
    text = text.replace("*", "")
    return text.strip()


def _scan(text: str) -> list[_Line]:
    lines: list[_Line] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_noise(raw)
        if not body:
            continue
        m = _COND_RE.match(body)
        if m:
            leaf = None
            rest = m.group("rest")
            if rest is not None:
                lm = _LEAF_RE.match(rest.strip())
                if lm is None:
                    raise TreeFormatError(f"line {lineno}: cannot parse leaf part {rest.strip()!r}")
                leaf = (lm.group("cls"), _num(lm.group("pct")), int(lm.group("n")))
            op = ">=" if m.group("op") in (">=", "≥") else "<"
            lines.append(_Line(lineno, m.group("attr"), op, _num(m.group("t")), leaf))
            continue
        m = _BARE_LEAF_RE.match(body)
        if m:
            lm = _LEAF_RE.match(m.group("rest").strip())
            if lm is None:
                raise TreeFormatError(f"line {lineno}: cannot parse leaf {body!r}")
            lines.append(_Line(lineno, None, None, None,
                               (lm.group("cls"), _num(lm.group("pct")), int(lm.group("n")))))
            continue
        raise TreeFormatError(f"line {lineno}: cannot parse {body!r}")
    return lines


class _Parser:
    def __init__(self, lines: list[_Line]):
        self.lines = lines
        self.pos = 0
        self.nodes: list[Node] = []

    def _new_id(self) -> int:
        self.nodes.append(LeafNode(len(self.nodes), ""))  # placeholder
        return len(self.nodes) - 1

    def _peek(self) -> _Line | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def parse(self) -> DecisionTree:
        if not self.lines:
            raise TreeFormatError("empty tree text")
        first = self.lines[0]
        if first.attr is None:
            # a bare leaf line: the whole tree is one leaf
            if len(self.lines) > 1:
                raise TreeFormatError("leaf line followed by more input")
            cls, pct, n = first.leaf  # type: ignore[misc]
            return DecisionTree(0, (LeafNode(0, cls, pct, n),))
        root = self._parse_split()
        if self._peek() is not None:
            extra = self._peek()
            raise TreeFormatError(f"line {extra.lineno}: unexpected trailing input")
        return DecisionTree(root, tuple(self.nodes))

    def _parse_branch(self, line: _Line) -> int:
        """The subtree hanging off one condition line (inline leaf or nested)."""
        self.pos += 1
        if line.leaf is not None:
            cls, pct, n = line.leaf
            node_id = self._new_id()
            self.nodes[node_id] = LeafNode(node_id, cls, pct, n)
            return node_id
        return self._parse_split()

    def _parse_split(self) -> int:
        first = self._peek()
        if first is None or first.attr is None:
            where = "end of input" if first is None else f"line {first.lineno}"
            raise TreeFormatError(f"{where}: expected a condition line")
        node_id = self._new_id()
        first_child = self._parse_branch(first)
        second = self._peek()
        if (
            second is None
            or second.attr != first.attr
            or second.threshold != first.threshold
            or second.op == first.op
        ):
            where = "end of input" if second is None else f"line {second.lineno}"
            raise TreeFormatError(
                f"{where}: expected the complementary condition of "
                f"'{first.attr} {first.op} {first.threshold:g}' (line {first.lineno})"
            )
        second_child = self._parse_branch(second)
        low, high = (first_child, second_child) if first.op == "<" else (second_child, first_child)
        self.nodes[node_id] = SplitNode(node_id, first.attr, first.threshold, low, high)
        return node_id


def parse_tree_text(text: str) -> DecisionTree:
    """Parse the printed tree format into a DecisionTree."""
    tree = _Parser(_scan(text)).parse()
    tree.validate()
    return tree


def format_tree_text(tree: DecisionTree, indent: str = "  ") -> str:
    """Print a tree in the canonical variant of the text format.

    parse_tree_text(format_tree_text(t)) reproduces an equivalent tree.
    """
    out: list[str] = []

    def fmt_leaf(leaf: LeafNode) -> str:
        return f"then class = {leaf.class_name} ({leaf.purity_pct:.2f} % of {leaf.count} examples)"

    def emit(node_id: int, depth: int) -> None:
        node = tree.node(node_id)
        if isinstance(node, LeafNode):
            out.append(indent * depth + fmt_leaf(node))
            return
        for op, child_id in (("<", node.low), (">=", node.high)):
            child = tree.node(child_id)
            head = f"{indent * depth}{node.attribute} {op} {node.threshold:g}"
            if isinstance(child, LeafNode):
                out.append(f"{head} {fmt_leaf(child)}")
            else:
                out.append(head)
                emit(child_id, depth + 1)

    root = tree.node(tree.root)
    if isinstance(root, LeafNode):
        out.append(fmt_leaf(root))
    else:
        emit(tree.root, 0)
    return "\n".join(out) + "\n"
