"""Line-oriented structure files.

    dim = 6
    d e1 = e26              # Salamon digits when dim <= 9
    d e(10) = e(2,11)       # parenthesized indices otherwise
    J(e1) = -e2
    Omega = e12 + e34 + e56 + e16
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .algebra import Form, format_indices, zeros
from .lie import LieAlgebra, StructurePackage

DEFAULT_NAMES = {"J": "endomorphism", "Omega": "form"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")


class _Cursor:
    def __init__(self, text: str, line: int, offset: int = 0):
        self.text = text
        self.pos = offset
        self.line = line

    def error(self, message: str, pos: int | None = None):
        return ParseError(message, self.line, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str):
        self.skip()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of line"
            raise self.error(f"expected '{token}', found '{found}'")
        self.pos += len(token)

    def match(self, pattern: re.Pattern) -> str | None:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def integer(self) -> int:
        tok = self.match(_INT)
        if tok is None:
            raise self.error("expected an integer")
        return int(tok)

    def at_end(self) -> bool:
        return self.peek() == ""


def _rational(cur: _Cursor) -> Fraction:
    num = cur.integer()
    if cur.peek() == "/":
        cur.pos += 1
        start = cur.pos
        den = cur.integer()
        if den == 0:
            raise cur.error("zero denominator", start)
        return Fraction(num, den)
    return Fraction(num)


def _indices(cur: _Cursor, dim: int, single: bool) -> tuple[tuple[int, ...], int]:
    cur.skip()
    start = cur.pos
    if cur.peek() == "(":
        cur.pos += 1
        idx = [cur.integer()]
        while cur.peek() == ",":
            cur.pos += 1
            idx.append(cur.integer())
        cur.expect(")")
    else:
        tok = cur.match(_INT)
        if tok is None:
            raise cur.error("expected basis indices")
        if single:
            idx = [int(tok)]
        else:
            if dim > 9:
                raise cur.error("use parenthesized indices when dim > 9", start)
            idx = [int(ch) for ch in tok]
    for i in idx:
        if not 1 <= i <= dim:
            raise cur.error(f"index {i} out of range 1..{dim}", start)
    if single and len(idx) != 1:
        raise cur.error("expected a single basis index", start)
    if len(set(idx)) != len(idx):
        raise cur.error("repeated index", start)
    return tuple(idx), start


def _terms(cur: _Cursor, dim: int, single: bool):
    """Parse '0' or a signed sum of [rational '*'] e<indices> terms."""
    cur.skip()
    if cur.text.startswith("0", cur.pos) and not _INT.match(cur.text, cur.pos + 1) \
            and cur.text[cur.pos + 1:].strip() == "":
        cur.pos += 1
        return []
    out = []
    first = True
    while True:
        sign = 1
        ch = cur.peek()
        if ch in "+-":
            sign = -1 if ch == "-" else 1
            cur.pos += 1
        elif not first:
            raise cur.error("expected '+' or '-'")
        coeff = Fraction(1)
        if cur.peek().isdigit():
            coeff = _rational(cur)
            if cur.peek() == "*":
                cur.pos += 1
        cur.expect("e")
        idx, start = _indices(cur, dim, single)
        out.append((idx, sign * coeff, start))
        first = False
        if cur.at_end():
            return out


def _form(cur: _Cursor, dim: int) -> Form:
    """A sum of terms of one grade; a bare '0' is the zero 2-form."""
    terms = _terms(cur, dim, single=False)
    if not terms:
        return Form(dim, min(2, dim))
    grade = len(terms[0][0])
    for idx, _, start in terms:
        if len(idx) != grade:
            raise cur.error("terms of different grades", start)
    acc: dict = {}
    for idx, c, _ in terms:
        acc[idx] = acc.get(idx, 0) + c
    return Form(dim, grade, acc)


def parse_structure_file(text: str, names: dict[str, str] | None = DEFAULT_NAMES) -> StructurePackage:
    """Parse a structure file.

    ``names`` maps each allowed declaration name to "endomorphism" or "form";
    pass ``None`` to accept any name.
    """
    dim = None
    diffs: dict[int, Form] = {}
    images: dict[str, dict[int, np.ndarray]] = {}
    forms: dict[str, Form] = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        cur.skip()
        head = cur.pos
        if re.match(r"dim\b", line[head:]):
            cur.pos += 3
            cur.expect("=")
            if dim is not None:
                raise cur.error("duplicate dim declaration", head)
            dim = cur.integer()
            if dim < 1:
                raise cur.error("dimension must be positive", head)
            if not cur.at_end():
                raise cur.error("unexpected text after dimension")
            continue
        if dim is None:
            raise cur.error("missing dim declaration before first use", head)
        m = re.match(r"d\s*e", line[head:])
        if m:
            cur.pos = head + m.end()
            (k,), start = _indices(cur, dim, single=True)
            cur.expect("=")
            form = _form(cur, dim)
            if form.grade != 2:
                raise cur.error("a differential must be a 2-form", start)
            if k in diffs:
                raise cur.error(f"duplicate declaration of d e{k}", head)
            diffs[k] = form
            continue
        name = cur.match(_NAME)
        if name is None:
            raise cur.error("expected a declaration")
        if cur.peek() == "(":
            kind = "endomorphism"
        else:
            kind = "form"
        if names is not None:
            if name not in names:
                raise cur.error(f"unknown name '{name}'", head)
            if names[name] != kind:
                raise cur.error(f"'{name}' must be declared as {names[name]}", head)
        if kind == "endomorphism":
            cur.expect("(")
            cur.expect("e")
            (j,), start = _indices(cur, dim, single=True)
            cur.expect(")")
            cur.expect("=")
            if name in forms:
                raise cur.error(f"'{name}' already declared as a form", head)
            table = images.setdefault(name, {})
            if j in table:
                raise cur.error(f"duplicate declaration of {name}(e{j})", head)
            vec = zeros(dim)
            for (i,), c, _ in _terms(cur, dim, single=True):
                vec[i - 1] += c
            table[j] = vec
        else:
            cur.expect("=")
            if name in forms or name in images:
                raise cur.error(f"duplicate declaration of '{name}'", head)
            forms[name] = _form(cur, dim)
    if dim is None:
        raise ParseError("missing dim declaration", max(last_line, 1), 1)
    endos = {}
    for name, table in images.items():
        mat = zeros(dim, dim)
        for j, vec in table.items():
            mat[:, j - 1] = vec
        endos[name] = mat
    return StructurePackage(LieAlgebra(dim, diffs), endos, forms)


def _vector_text(vec, dim: int) -> str:
    parts = []
    for i, c in enumerate(vec, start=1):
        if c == 0:
            continue
        mag = abs(c)
        body = f"e{i}" if mag == 1 else f"{mag}*e{i}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def serialize_structure(pkg: StructurePackage) -> str:
    n = pkg.algebra.dim
    lines = [f"dim = {n}"]
    for k in range(1, n + 1):
        form = pkg.algebra.differentials.get(k)
        if form is not None:
            lines.append(f"d e{format_indices((k,), n)} = {form}")
    for name in sorted(pkg.endomorphisms):
        mat = pkg.endomorphisms[name]
        for j in range(n):
            if any(c != 0 for c in mat[:, j]):
                lines.append(f"{name}(e{j + 1}) = {_vector_text(mat[:, j], n)}")
    for name in sorted(pkg.forms):
        lines.append(f"{name} = {pkg.forms[name]}")
    return "\n".join(lines) + "\n"
