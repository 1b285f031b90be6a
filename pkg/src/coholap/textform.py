"""Parsing and printing of words and group-ring elements.

The textual form is a sum of terms like ``3/2*a*b^-1 + 1 - 2*a^3``:

* terms are separated by ``+`` / ``-``;
* a term is a ``*``-separated product of an optional rational coefficient
  (``p/q`` or an integer) and letters ``name`` or ``name^k`` with integer
  ``k`` (so ``a^-2`` abbreviates ``a^-1*a^-1``);
* the empty word is written ``1``; the zero element is ``0``.

Printing is canonical: terms appear in length-then-lexicographic word
order, letters are printed one at a time (``a*a`` rather than ``a^2``),
and ``parse(print(x)) == x`` holds exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence, Union

from .errors import MalformedInputError, UnknownGeneratorError
from .groupring import GroupRingElement, Presentation, Word

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[\^*+-]))"
)

NamesLike = Union[Presentation, Sequence[str], None]


def _generator_names(source: NamesLike, needed: int = 0) -> list[str]:
    if source is None:
        return [f"g{i}" for i in range(1, needed + 1)]
    if isinstance(source, Presentation):
        return list(source.generator_names)
    return list(source)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise MalformedInputError(
                f"unexpected character {rest[0]!r} at position {pos} in {text!r}")
        if match.group("number") is not None:
            tokens.append(("number", match.group("number")))
        elif match.group("name") is not None:
            tokens.append(("name", match.group("name")))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, names: list[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = {name: i + 1 for i, name in enumerate(names)}
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise MalformedInputError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return token

    def parse_exponent(self) -> int:
        sign = 1
        token = self.take()
        if token == ("op", "-"):
            sign = -1
            token = self.take()
        if token[0] != "number" or "/" in token[1]:
            raise MalformedInputError(
                f"exponent must be an integer in {self.text!r}")
        return sign * int(token[1])

    def parse_term(self) -> tuple[Fraction, Word]:
        """One product of rational factors and powered letters."""
        coeff = Fraction(1)
        letters: list[int] = []
        saw_factor = False
        while True:
            token = self.take()
            if token[0] == "number":
                try:
                    coeff *= Fraction(token[1])
                except ZeroDivisionError:
                    raise MalformedInputError(
                        f"zero denominator in {self.text!r}")
            elif token[0] == "name":
                name = token[1]
                if name not in self.index:
                    raise UnknownGeneratorError(
                        f"unknown generator {name!r} in {self.text!r}")
                gen = self.index[name]
                exponent = 1
                if self.peek() == ("op", "^"):
                    self.take()
                    exponent = self.parse_exponent()
                letter = gen if exponent >= 0 else -gen
                letters.extend([letter] * abs(exponent))
            else:
                raise MalformedInputError(
                    f"expected a factor, got {token[1]!r} in {self.text!r}")
            saw_factor = True
            if self.peek() == ("op", "*"):
                self.take()
                continue
            break
        if not saw_factor:
            raise MalformedInputError(f"empty term in {self.text!r}")
        return coeff, Word(letters)

    def parse_element(self) -> GroupRingElement:
        terms: dict[Word, Fraction] = {}
        sign = Fraction(1)
        token = self.peek()
        if token == ("op", "-"):
            self.take()
            sign = Fraction(-1)
        elif token == ("op", "+"):
            self.take()
        while True:
            coeff, word = self.parse_term()
            coeff *= sign
            terms[word] = terms.get(word, Fraction(0)) + coeff
            token = self.peek()
            if token is None:
                break
            if token == ("op", "+"):
                sign = Fraction(1)
            elif token == ("op", "-"):
                sign = Fraction(-1)
            else:
                raise MalformedInputError(
                    f"expected '+' or '-', got {token[1]!r} in {self.text!r}")
            self.take()
        return GroupRingElement(terms)


def _default_names_needed(text: str) -> int:
    """Highest default-name index (g1, g2, ...) mentioned in the text."""
    needed = 0
    for match in re.finditer(r"\bg(\d+)\b", text):
        needed = max(needed, int(match.group(1)))
    return needed


def parse_element(text: str, names: NamesLike) -> GroupRingElement:
    """Parse the textual form of a group-ring element."""
    if not text.strip():
        raise MalformedInputError("empty element string")
    needed = _default_names_needed(text) if names is None else 0
    parser = _Parser(text, _generator_names(names, needed))
    element = parser.parse_element()
    if isinstance(names, Presentation):
        if element.max_generator() > names.generator_count:
            raise UnknownGeneratorError(
                f"element {text!r} uses a generator outside the presentation")
    return element


def parse_word(text: str, names: NamesLike) -> Word:
    """Parse a single word such as ``a*b^-1*a``; ``1`` is the identity."""
    element = parse_element(text, names)
    terms = list(element.terms())
    if len(terms) != 1 or terms[0][1] != 1:
        raise MalformedInputError(f"{text!r} is not a plain word")
    return terms[0][0]


def format_word(word: Word, names: NamesLike) -> str:
    resolved = _generator_names(names, word.max_generator())
    if len(word) == 0:
        return "1"
    parts = []
    for letter in word:
        gen = abs(letter)
        if gen > len(resolved):
            raise UnknownGeneratorError(
                f"word uses generator {gen} but only {len(resolved)} names given")
        name = resolved[gen - 1]
        parts.append(name if letter > 0 else f"{name}^-1")
    return "*".join(parts)


def format_element(element: GroupRingElement, names: NamesLike) -> str:
    """Canonical textual form; inverse of :func:`parse_element`."""
    terms = list(element.terms())
    if not terms:
        return "0"
    resolved = _generator_names(names, element.max_generator())
    pieces: list[str] = []
    for position, (word, coeff) in enumerate(terms):
        magnitude = abs(coeff)
        if len(word) == 0:
            body = str(magnitude)
        elif magnitude == 1:
            body = format_word(word, resolved)
        else:
            body = f"{magnitude}*{format_word(word, resolved)}"
        if position == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
