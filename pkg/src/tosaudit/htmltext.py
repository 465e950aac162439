"""HTML to plain text conversion built on the stdlib parser.

Parses markup into a small node tree, drops script/style/navigation
boilerplate, turns block elements into paragraph breaks, and supports a
deliberately small selector subset (tag, .class, #id, tag.class, tag#id)
for per-platform include/exclude rules.
"""

import re
from html.parser import HTMLParser

VOID_TAGS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
    "meta", "param", "source", "track", "wbr",
})

BLOCK_TAGS = frozenset({
    "address", "article", "aside", "blockquote", "dd", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3",
    "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre",
    "section", "table", "td", "th", "tr", "ul",
})

# Subtrees that never contribute main text.
DROP_TAGS = frozenset({
    "script", "style", "noscript", "template", "head", "title", "nav",
    "header", "footer", "aside", "button", "select", "option", "iframe",
    "svg", "canvas", "object", "embed", "audio", "video",
})

_SELECTOR_RE = re.compile(
    r"([a-zA-Z][a-zA-Z0-9-]*)?(?:\.([\w-]+)|#([\w-]+))?"
)


class Node:
    """One element; children are Nodes or text strings."""

    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag, attrs=None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children = []

    def classes(self):
        return (self.attrs.get("class") or "").split()


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Node("#root")
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = Node(tag, dict(attrs))
        self._stack[-1].children.append(node)
        if tag not in VOID_TAGS:
            self._stack.append(node)

    def handle_startendtag(self, tag, attrs):
        self._stack[-1].children.append(Node(tag, dict(attrs)))

    def handle_endtag(self, tag):
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                return
        # stray close tag: ignore

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def parse_html(markup):
    """Parse an HTML string into a node tree rooted at '#root'."""
    builder = _TreeBuilder()
    builder.feed(markup)
    builder.close()
    return builder.root


def parse_selector(selector):
    """Parse one selector into (tag, class, id); unused parts are None."""
    m = _SELECTOR_RE.fullmatch(selector.strip())
    if not m or not m.group(0):
        raise ValueError(f"unsupported selector: {selector!r}")
    tag, cls, node_id = m.groups()
    if tag is None and cls is None and node_id is None:
        raise ValueError(f"unsupported selector: {selector!r}")
    return (tag.lower() if tag else None, cls, node_id)


def _node_matches(node, parsed):
    tag, cls, node_id = parsed
    if tag is not None and node.tag != tag:
        return False
    if cls is not None and cls not in node.classes():
        return False
    if node_id is not None and node.attrs.get("id") != node_id:
        return False
    return True


def select(root, selector):
    """All nodes under root matching the selector, in document order."""
    parsed = parse_selector(selector)
    found = []

    def walk(node):
        for child in node.children:
            if isinstance(child, Node):
                if _node_matches(child, parsed):
                    found.append(child)
                walk(child)

    walk(root)
    return found


def remove_matching(root, selectors):
    """Detach every subtree matching any selector."""
    parsed = [parse_selector(s) for s in selectors]

    def walk(node):
        kept = []
        for child in node.children:
            if isinstance(child, Node):
                if any(_node_matches(child, p) for p in parsed):
                    continue
                walk(child)
            kept.append(child)
        node.children = kept

    walk(root)


def render_text(node):
    """Raw text with '\n\n' around block elements and '\n' for <br>."""
    out = []

    def walk(n):
        if isinstance(n, str):
            out.append(n)
            return
        if n.tag in DROP_TAGS:
            return
        if n.tag == "br":
            out.append("\n")
            return
        block = n.tag in BLOCK_TAGS
        if block:
            out.append("\n\n")
        for child in n.children:
            walk(child)
        if block:
            out.append("\n\n")

    walk(node)
    return "".join(out)


def html_to_text(markup, include=None, exclude=None):
    """Extract main text from HTML markup.

    include: optional selectors; when given, only matching subtrees
    contribute text (subtrees nested in an already included one are
    skipped so text is never duplicated).
    exclude: optional selectors removed before extraction.
    """
    root = parse_html(markup)
    if exclude:
        remove_matching(root, exclude)
    if include:
        targets = []
        for sel in include:
            targets.extend(select(root, sel))
        seen = []
        parts = []
        for node in _document_order(root, set(map(id, targets))):
            if any(_contains(prev, node) for prev in seen):
                continue
            seen.append(node)
            parts.append(render_text(node))
        return "\n\n".join(parts)
    return render_text(root)


def _document_order(root, wanted_ids):
    ordered = []

    def walk(node):
        for child in node.children:
            if isinstance(child, Node):
                if id(child) in wanted_ids:
                    ordered.append(child)
                walk(child)

    walk(root)
    return ordered


def _contains(ancestor, node):
    for child in ancestor.children:
        if isinstance(child, Node):
            if child is node or _contains(child, node):
                return True
    return False
