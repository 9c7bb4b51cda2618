"""The group algebra Q(i)[G]: finitely supported coefficient maps with convolution."""

from __future__ import annotations

import re
from typing import Iterable

from .coefficients import ONE, ZERO, GaussianRational
from .groups import Group, GroupElement, Window, format_word, parse_word
from .reports import GroupMismatch, ParseError, PreconditionError, Report


class AlgebraElement:
    """Sum of ``coeff * g``; zero coefficients are never stored."""

    __slots__ = ("group", "terms", "_hash")

    def __init__(self, group: Group, terms: dict | Iterable = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for g, c in items:
            if g.group != group:
                raise GroupMismatch(f"{g!r} is not an element of {group}")
            c = GaussianRational.coerce(c)
            total = acc.get(g, ZERO) + c
            if total:
                acc[g] = total
            else:
                acc.pop(g, None)
        self.group = group
        self.terms = acc
        self._hash = None

    @classmethod
    def zero(cls, group: Group) -> "AlgebraElement":
        return cls(group)

    @classmethod
    def basis(cls, g: GroupElement, coeff=ONE) -> "AlgebraElement":
        return cls(g.group, [(g, coeff)])

    @classmethod
    def parse(cls, text: str, group: Group) -> "AlgebraElement":
        return parse_algebra_element(text, group)

    def coefficient(self, g: GroupElement) -> GaussianRational:
        return self.terms.get(g, ZERO)

    def support(self) -> list:
        return sorted(self.terms, key=GroupElement.sort_key)

    def items(self):
        return [(g, self.terms[g]) for g in self.support()]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.group == other.group and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.group != self.group:
            raise GroupMismatch("algebra elements over different groups")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.group, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return AlgebraElement(self.group, [(g, -c) for g, c in self.terms.items()])

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = GaussianRational.coerce(c)
        if not c:
            return AlgebraElement(self.group)
        return AlgebraElement(self.group, [(g, c * v) for g, v in self.terms.items()])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(
                self.group,
                [(x * y, a * b) for x, a in self.terms.items() for y, b in other.terms.items()],
            )
        if isinstance(other, GroupElement):
            return self * AlgebraElement.basis(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, GroupElement):
            return AlgebraElement.basis(other) * self
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __str__(self):
        return format_algebra_element(self)

    def __repr__(self):
        return f"AlgebraElement({self})"


def alg_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def alg_scale(a: AlgebraElement, c) -> AlgebraElement:
    return a.scale(c)


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


# -- literal syntax ------------------------------------------------------

def _format_coeff(c: GaussianRational) -> str:
    return f"({c})" if c.im != 0 else str(c)


def format_algebra_element(a: AlgebraElement) -> str:
    if not a.terms:
        return "0"
    parts = []
    for i, (g, c) in enumerate(a.items()):
        word = format_word(g.word())
        negative = c.im == 0 and c.re < 0
        mag = -c if negative else c
        if word == "e":
            body = _format_coeff(mag)
        elif mag == ONE:
            body = word
        else:
            body = f"{_format_coeff(mag)}*{word}"
        if i == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)


_COEFF = re.compile(r"\d+(?:/\d+)?i?(?![A-Za-z0-9_])|\d+(?:/\d+)?")
_WORD = re.compile(
    r"[A-Za-z_][A-Za-z0-9_]*(?:\^[+-]?\d+)?(?:\s*\*\s*[A-Za-z_][A-Za-z0-9_]*(?:\^[+-]?\d+)?)*"
)


def parse_algebra_element(text: str, group: Group) -> AlgebraElement:
    """Parse a signed sum of ``coeff*word`` terms, e.g. ``2*x^2 - 1/2*y*x + (1+1/3i)*e``."""
    s = text
    n = len(s)
    pos = 0
    terms = []

    def skip(p):
        while p < n and s[p].isspace():
            p += 1
        return p

    pos = skip(pos)
    if pos == n:
        raise ParseError("empty algebra element", text, column=1)
    if s[pos:].strip() == "0":
        return AlgebraElement(group)
    sign = 1
    if s[pos] in "+-":
        sign = -1 if s[pos] == "-" else 1
        pos = skip(pos + 1)
    while True:
        coeff = ONE
        start = pos
        if pos < n and s[pos] == "(":
            close = s.find(")", pos)
            if close < 0:
                raise ParseError("unclosed '('", text, column=pos + 1)
            try:
                coeff = GaussianRational.parse(s[pos + 1:close])
            except ValueError:
                raise ParseError("malformed coefficient", text, column=pos + 2) from None
            pos = close + 1
        elif pos < n and s[pos].isdigit():
            m = _COEFF.match(s, pos)
            if not m:
                raise ParseError("malformed coefficient", text, column=pos + 1)
            coeff = GaussianRational.parse(m.group(0))
            pos = m.end()
        word = ()
        p2 = skip(pos)
        if pos != start:
            if p2 < n and s[p2] == "*":
                pos = skip(p2 + 1)
                word, pos = _take_word(s, pos, group, text)
        else:
            word, pos = _take_word(s, pos, group, text)
        terms.append((group.evaluate(word), coeff * sign))
        pos = skip(pos)
        if pos >= n:
            break
        if s[pos] not in "+-":
            raise ParseError("expected '+' or '-'", text, column=pos + 1)
        sign = -1 if s[pos] == "-" else 1
        pos = skip(pos + 1)
        if pos >= n:
            raise ParseError("dangling operator", text, column=pos)
    return AlgebraElement(group, terms)


def _take_word(s, pos, group, text):
    m = _WORD.match(s, pos)
    if not m:
        raise ParseError("expected group word", text, column=pos + 1)
    try:
        word = parse_word(m.group(0), group.generator_names)
    except ParseError as exc:
        col = None if exc.column is None else pos + exc.column
        raise ParseError(str(exc).split(" (")[0], text, column=col) from None
    if m.end() < len(s) and s[m.end()] == "^":
        raise ParseError("expected integer exponent after '^'", text, column=m.end() + 2)
    return word, m.end()


# -- gradings ------------------------------------------------------------

class Grading:
    """Integer degrees on generators, extended along normal-form words.

    With ``strict=True`` (the default) every defining relator must have degree
    zero, which is exactly the condition for the degree map to be a
    homomorphism G -> Z. ``strict=False`` admits invalid gradings so that they
    can be audited with :func:`validate_grading`.
    """

    def __init__(self, group: Group, degrees: dict | None = None, strict: bool = True):
        degrees = dict(degrees or {})
        unknown = set(degrees) - set(group.generator_names)
        if unknown:
            raise ValueError(f"degrees given for unknown generators {sorted(unknown)}")
        self.group = group
        self.degrees = {n: int(degrees.get(n, 0)) for n in group.generator_names}
        self.strict = strict
        self._cache: dict = {}
        if strict:
            defects = self.relator_defects()
            if defects:
                rel, deg = defects[0]
                raise PreconditionError(
                    f"grading is not a homomorphism: relator {format_word(rel)} has degree {deg}"
                )

    @classmethod
    def trivial(cls, group: Group) -> "Grading":
        return cls(group, {})

    def word_degree(self, word) -> int:
        return sum(self.degrees[n] * e for n, e in word)

    def relator_defects(self) -> list:
        out = []
        for rel in self.group.relators():
            d = self.word_degree(rel)
            if d:
                out.append((rel, d))
        return out

    def degree(self, g: GroupElement) -> int:
        d = self._cache.get(g)
        if d is None:
            d = self.word_degree(g.word())
            self._cache[g] = d
        return d

    def parity(self, g: GroupElement) -> int:
        return self.degree(g) % 2

    def sign(self, g: GroupElement) -> int:
        """(-1)^|g|."""
        return -1 if self.degree(g) % 2 else 1

    def is_trivial(self) -> bool:
        return not any(self.degrees.values())

    def to_dict(self):
        return dict(self.degrees)

    def __eq__(self, other):
        return isinstance(other, Grading) and self.group == other.group and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.group, tuple(sorted(self.degrees.items()))))

    def __repr__(self):
        return f"Grading({self.degrees})"


def degree(g: GroupElement, gr: Grading) -> int:
    return gr.degree(g)


def parity(g: GroupElement, gr: Grading) -> int:
    return gr.parity(g)


def validate_grading(gr: Grading, w: Window, max_counterexamples: int = 10) -> Report:
    """Relators of degree 0 and deg(gh) = deg(g) + deg(h) on all window pairs.

    Generator pairs are examined before the rest of the window so that the
    first counterexample reported is the simplest one.
    """
    violated = [
        {"relator": format_word(rel), "degree": d} for rel, d in gr.relator_defects()
    ]
    gens = gr.group.generators()
    ordered = gens + [g for g in w if g not in set(gens)]
    bad = []
    n_bad = 0
    checked = 0
    for g in ordered:
        for h in ordered:
            checked += 1
            lhs = gr.degree(g * h)
            rhs = gr.degree(g) + gr.degree(h)
            if lhs != rhs:
                n_bad += 1
                if len(bad) < max_counterexamples:
                    bad.append({"pair": (g, h), "product": g * h, "deg_product": lhs, "deg_sum": rhs})
    details = {
        "degrees": dict(gr.degrees),
        "violated_relators": violated,
        "pairs_checked": checked,
        "failing_pairs": n_bad,
    }
    return Report("grading", not violated and not n_bad, bad, details)


def homogeneous_components(a: AlgebraElement, gr: Grading) -> dict:
    parts: dict = {}
    for g, c in a.terms.items():
        parts.setdefault(gr.degree(g), []).append((g, c))
    return {k: AlgebraElement(a.group, parts[k]) for k in sorted(parts)}


def is_homogeneous(a: AlgebraElement, gr: Grading) -> bool:
    return len({gr.degree(g) for g in a.terms}) <= 1
