"""Words in free groups, group presentations, and a small text format for them.

A word is stored as a tuple of ``(generator_index, exponent)`` syllables with
adjacent syllables on distinct generators and nonzero exponents.

Text format::

    # comment
    generators: w s z
    relators: w^4, s^6, (w*s)^2, z^w = z^3*z^(s^4),
              [z, z^(s^2)]
    subgroup: s

Expressions use ``*`` for products, ``^n`` for integer powers, ``u^v`` for the
conjugate ``v^-1*u*v``, ``[u,v]`` (or ``(u,v)``) for the commutator
``u^-1*v^-1*u*v`` and ``1`` for the identity.  A relation ``lhs = rhs`` is
stored as the relator ``lhs*rhs^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Syllable = tuple[int, int]


class ParseError(ValueError):
    """Raised for malformed presentation text; carries the offending position."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


@dataclass(frozen=True)
class Word:
    letters: tuple[Syllable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> Word:
        return cls(((index, exponent),))

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> Word:
        """Build from signed letters: ``g+1`` for generator ``g``, ``-(g+1)`` for its inverse."""
        return cls(tuple((abs(x) - 1, 1 if x > 0 else -1) for x in letters))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: Word) -> Word:
        return word_concat(self, other)

    def __pow__(self, n: int) -> Word:
        return word_power(self, n)

    def inverse(self) -> Word:
        return word_invert(self)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def signed_letters(self) -> list[int]:
        out: list[int] = []
        for g, e in self.letters:
            out.extend([g + 1 if e > 0 else -(g + 1)] * abs(e))
        return out

    def render(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return "*".join(parts)


def _reduce(letters: Iterable[Syllable]) -> tuple[Syllable, ...]:
    stack: list[Syllable] = []
    for g, e in letters:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            e += stack.pop()[1]
            if e == 0:
                continue
        stack.append((g, e))
    return tuple(stack)


def word_invert(u: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(u.letters)))


def word_concat(*words: Word) -> Word:
    return Word(tuple(s for w in words for s in w.letters))


def word_power(u: Word, n: int) -> Word:
    if n < 0:
        u, n = word_invert(u), -n
    return Word(u.letters * n)


def word_conjugate(u: Word, v: Word) -> Word:
    """``u^v = v^-1 * u * v``."""
    return word_concat(word_invert(v), u, v)


def word_commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u^-1 * v^-1 * u * v``."""
    return word_concat(word_invert(u), word_invert(v), u, v)


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    subgroup_generators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        names = tuple(self.generator_names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "subgroup_generators", tuple(self.subgroup_generators))
        n = len(names)
        for w in self.relators + self.subgroup_generators:
            if any(g < 0 or g >= n for g in w.generators()):
                raise ValueError(f"word {w.letters} uses a generator index >= {n}")

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    def gen(self, name: str) -> Word:
        return Word.gen(self.generator_names.index(name))

    def with_subgroup(self, words: Sequence[Word]) -> Presentation:
        return Presentation(self.generator_names, self.relators, tuple(words))

    def render(self) -> str:
        names = self.generator_names
        lines = ["generators: " + " ".join(names)]
        lines.append("relators: " + ",\n    ".join(w.render(names) for w in self.relators))
        if self.subgroup_generators:
            lines.append("subgroup: " + ", ".join(w.render(names) for w in self.subgroup_generators))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-*^()\[\],=]))")
_HEADER = re.compile(r"^\s*(generators|relators|subgroup)\s*:", re.MULTILINE)


class _Parser:
    def __init__(self, text: str, start: int, end: int, names: Sequence[str], full: str):
        self.full = full
        self.names = {n: i for i, n in enumerate(names)}
        self.tokens: list[tuple[str, str, int]] = []
        pos = start
        while pos < end:
            if full[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(full, pos, end)
            if m is None or m.end() == pos:
                raise ParseError(f"unexpected character {full[pos]!r}", pos, full)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0
        self.end = end

    def peek(self, value: str | None = None) -> bool:
        if self.i >= len(self.tokens):
            return False
        return value is None or self.tokens[self.i][1] == value

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else self.end

    def expect(self, value: str) -> None:
        if not self.peek(value):
            raise ParseError(f"expected {value!r}", self.pos(), self.full)
        self.i += 1

    def relation_list(self) -> list[tuple[Word, int]]:
        out = []
        if not self.tokens:
            return out
        while True:
            start = self.pos()
            if self.peek(",") or self.i >= len(self.tokens):
                raise ParseError("empty relator", start, self.full)
            w = self.expr()
            if self.peek("="):
                self.i += 1
                w = word_concat(w, word_invert(self.expr()))
            out.append((w, start))
            if self.i >= len(self.tokens):
                return out
            self.expect(",")

    def expr(self) -> Word:
        w = self.factor()
        while self.peek("*"):
            self.i += 1
            w = word_concat(w, self.factor())
        return w

    def factor(self) -> Word:
        w = self.atom()
        while self.peek("^"):
            self.i += 1
            if self.peek("-") or (self.i < len(self.tokens) and self.tokens[self.i][0] == "int"):
                sign = 1
                if self.peek("-"):
                    self.i += 1
                    sign = -1
                if self.i >= len(self.tokens) or self.tokens[self.i][0] != "int":
                    raise ParseError("malformed exponent", self.pos(), self.full)
                w = word_power(w, sign * int(self.tokens[self.i][1]))
                self.i += 1
            else:
                w = word_conjugate(w, self.atom())
        return w

    def atom(self) -> Word:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of expression", self.pos(), self.full)
        kind, value, pos = self.tokens[self.i]
        if kind == "name":
            if value not in self.names:
                raise ParseError(f"unknown generator {value!r}", pos, self.full)
            self.i += 1
            return Word.gen(self.names[value])
        if kind == "int":
            if value != "1":
                raise ParseError(f"integer {value} is not a word (only 1 denotes the identity)", pos, self.full)
            self.i += 1
            return Word()
        if value in "([":
            close = ")" if value == "(" else "]"
            self.i += 1
            u = self.expr()
            if self.peek(","):
                self.i += 1
                v = self.expr()
                self.expect(close)
                return word_commutator(u, v)
            if value == "[":
                raise ParseError("commutator needs two arguments", self.pos(), self.full)
            self.expect(close)
            return u
        raise ParseError(f"unexpected {value!r}", pos, self.full)


def _strip_comments(text: str) -> str:
    # blank out comments but keep offsets so positions stay meaningful
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation format into a :class:`Presentation`."""
    clean = _strip_comments(text)
    headers = list(_HEADER.finditer(clean))
    if not headers:
        stray = len(clean) - len(clean.lstrip())
        raise ParseError("expected a 'generators:' section", stray if clean.strip() else None, text)
    first = headers[0].start() + (len(headers[0].group()) - len(headers[0].group().lstrip()))
    if clean[:first].strip():
        pos = len(clean[:first]) - len(clean[:first].lstrip())
        raise ParseError("text before first section", pos, text)
    sections: dict[str, tuple[int, int]] = {}
    for k, m in enumerate(headers):
        end = headers[k + 1].start() if k + 1 < len(headers) else len(clean)
        key = m.group(1)
        if key in sections:
            raise ParseError(f"duplicate section {key!r}", m.start(1), text)
        sections[key] = (m.end(), end)
    if "generators" not in sections:
        raise ParseError("missing 'generators:' section", 0, text)
    gs, ge = sections["generators"]
    names = clean[gs:ge].split()
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n):
            raise ParseError(f"invalid generator name {n!r}", gs + clean[gs:ge].find(n), text)
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator name", gs, text)

    def words(key: str, allow_trivial: bool) -> list[Word]:
        if key not in sections:
            return []
        s, e = sections[key]
        out = []
        for w, pos in _Parser(clean, s, e, names, clean).relation_list():
            if not w and not allow_trivial:
                raise ParseError("empty relator (reduces to the identity)", pos, text)
            out.append(w)
        return out

    return Presentation(tuple(names), tuple(words("relators", False)), tuple(words("subgroup", True)))


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse a single expression over ``names``."""
    p = _Parser(text, 0, len(text), names, text)
    w = p.expr()
    if p.i != len(p.tokens):
        raise ParseError("trailing input", p.pos(), text)
    return w
