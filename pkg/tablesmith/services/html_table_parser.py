"""
Strict HTML table scanner.

Reads the first <table> of a document with the standard library tokenizer,
which reports tags exactly as written. Nothing is repaired: unbalanced tags,
tags outside the whitelist and span conflicts all become defects.
"""
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Dict, List, Optional, Tuple

from tablesmith.schemas.checker import Defect, DefectKind


ALLOWED_TAGS = {"table", "thead", "tbody", "tr", "th", "td"}
CELL_TAGS = {"td", "th"}
WRAPPER_TAGS = {"thead", "tbody"}
VOID_TAGS = {"br", "hr", "img", "input", "meta", "wbr", "col", "area", "base", "link", "source"}

# Only the five XML-predefined entities are decoded
XML_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}

SPAN_VALUE = re.compile(r"^[1-9][0-9]*$")
ROW_COLOR = re.compile(r"background(?:-color)?\s*:\s*(#[0-9a-fA-F]{6})")


@dataclass
class RawCell:
    tag: str
    rowspan: int = 1
    colspan: int = 1
    parts: List[str] = field(default_factory=list)
    position: Tuple[int, int] = (0, 0)

    @property
    def text(self) -> str:
        return normalize_text("".join(self.parts))


@dataclass
class RawRow:
    cells: List[RawCell] = field(default_factory=list)
    color: Optional[str] = None


@dataclass
class TableScan:
    """Rows and defects of the first table in a document."""
    found: bool
    rows: List[RawRow]
    defects: List[Defect]


def normalize_text(text: str) -> str:
    """Collapse internal whitespace runs and trim both ends."""
    return " ".join(text.split())


class _TableScanner(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=False)
        self.found = False
        self.inside = False
        self.done = False
        self.nested_depth = 0
        self.stack: List[str] = []
        self.rows: List[RawRow] = []
        self.defects: List[Defect] = []
        self.row: Optional[RawRow] = None
        self.cell: Optional[RawCell] = None

    # ---- helpers -------------------------------------------------------

    def _defect(self, kind: DefectKind, detail: str, **location):
        line, offset = self.getpos()
        location.setdefault("line", line)
        location.setdefault("offset", offset)
        self.defects.append(Defect(kind=kind, location=location, detail=detail))

    def _finish(self, tag: str):
        if tag in CELL_TAGS and self.cell is not None:
            self.row.cells.append(self.cell)
            self.cell = None
        elif tag == "tr" and self.row is not None:
            if self.cell is not None:
                self._finish(self.cell.tag)
            self.rows.append(self.row)
            self.row = None

    def _close_until(self, tag: str):
        """Pop the stack down to ``tag``; everything popped on the way was left unclosed."""
        while self.stack:
            top = self.stack.pop()
            if top == tag:
                self._finish(top)
                return
            self._defect(DefectKind.MalformedMarkup, f"unclosed <{top}> before </{tag}>")
            self._finish(top)

    def _span(self, attrs: Dict[str, Optional[str]], name: str) -> int:
        value = attrs.get(name)
        if value is None:
            return 1
        value = value.strip()
        if not SPAN_VALUE.match(value):
            self._defect(DefectKind.DisallowedTag, f'{name}="{value}" is not a positive integer')
            return 1
        return int(value)

    # ---- tokenizer callbacks ----------------------------------------------

    def handle_starttag(self, tag, attrs):
        if self.done:
            return
        if not self.inside:
            if tag == "table":
                self.found = True
                self.inside = True
                self.stack = ["table"]
            return
        if self.nested_depth:
            if tag == "table":
                self.nested_depth += 1
            return
        if tag == "table":
            self._defect(DefectKind.DisallowedTag, "nested <table>")
            self.nested_depth = 1
            return
        if tag not in ALLOWED_TAGS:
            self._defect(DefectKind.DisallowedTag, f"<{tag}> is not allowed inside a table")
            if tag not in VOID_TAGS:
                self.stack.append(tag)
            return

        attr_map = dict(attrs)
        if tag in WRAPPER_TAGS:
            if self.row is not None:
                self._defect(DefectKind.MalformedMarkup, f"unclosed <tr> before <{tag}>")
                self._close_until("tr")
            self.stack.append(tag)
        elif tag == "tr":
            if self.row is not None:
                self._defect(DefectKind.MalformedMarkup, "unclosed <tr> before <tr>")
                self._close_until("tr")
            self.row = RawRow()
            match = ROW_COLOR.search(attr_map.get("style") or "")
            if match:
                self.row.color = match.group(1).lower()
            self.stack.append("tr")
        else:
            if self.row is None:
                self._defect(DefectKind.MalformedMarkup, f"<{tag}> outside of <tr>")
                self.row = RawRow()
                self.stack.append("tr")
            elif self.cell is not None:
                self._defect(DefectKind.MalformedMarkup, f"unclosed <{self.cell.tag}> before <{tag}>")
                self._close_until(self.cell.tag)
            self.cell = RawCell(
                tag=tag,
                rowspan=self._span(attr_map, "rowspan"),
                colspan=self._span(attr_map, "colspan"),
                position=self.getpos(),
            )
            self.stack.append(tag)

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if self.inside and not self.nested_depth and tag not in VOID_TAGS:
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        if not self.inside or self.done:
            return
        if self.nested_depth:
            if tag == "table":
                self.nested_depth -= 1
            return
        if tag == "table":
            self._close_until("table")
            self.inside = False
            self.done = True
            return
        if tag not in self.stack:
            if tag not in VOID_TAGS:
                self._defect(DefectKind.MalformedMarkup, f"stray </{tag}>")
            return
        self._close_until(tag)

    def handle_data(self, data):
        if self.cell is not None and not self.nested_depth:
            self.cell.parts.append(data)

    def handle_entityref(self, name):
        if self.cell is not None and not self.nested_depth:
            self.cell.parts.append(XML_ENTITIES.get(name, f"&{name};"))

    def handle_charref(self, name):
        if self.cell is not None and not self.nested_depth:
            self.cell.parts.append(f"&#{name};")

    def close(self):
        super().close()
        if self.inside and not self.done:
            self._defect(DefectKind.MalformedMarkup, "missing </table>")
            while len(self.stack) > 1:
                self._finish(self.stack.pop())
            self.inside = False
            self.done = True


def scan_table(html: str) -> TableScan:
    """Tokenize ``html`` and collect the rows of its first table."""
    scanner = _TableScanner()
    scanner.feed(html or "")
    scanner.close()
    if not scanner.found:
        return TableScan(
            found=False,
            rows=[],
            defects=[Defect(kind=DefectKind.MissingTable, detail="document contains no <table>")],
        )
    return TableScan(found=True, rows=scanner.rows, defects=scanner.defects)
