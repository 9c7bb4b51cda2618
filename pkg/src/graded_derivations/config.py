"""Run configuration: JSON schema, derivation grammar and object construction."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .algebra import AlgebraElement, Grading
from .coefficients import GaussianRational
from .derivations import (
    AdditiveTau,
    CentralDerivation,
    Derivation,
    InnerDerivation,
    LinearCombination,
    ParityTau,
    TableDerivation,
    TableTau,
    right_multiplication,
)
from .dg import DiagonalScaling, GroupTransport, WindowMatrix
from .groupoid import parse_signed
from .groups import GroupMap, Window, WindowSpec, enumerate_window, group_from_dict, parse_word
from .reports import DEFAULT_SAMPLE_CAP, ParseError, PreconditionError

CONFIG_KEYS = {"group", "grading", "derivations", "automorphisms", "window", "mode", "output", "seed", "sample_cap"}
WINDOW_KEYS = {"length", "exponent_bounds", "cap"}


@dataclass
class RunConfig:
    group: dict
    grading: dict = field(default_factory=dict)
    derivations: dict = field(default_factory=dict)
    automorphisms: dict = field(default_factory=dict)
    window: dict = field(default_factory=lambda: {"length": 2})
    mode: str = "cochain"
    output: str = "text"
    seed: int = 0
    sample_cap: int = DEFAULT_SAMPLE_CAP
    source: str | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_dict(cls, data: dict, source: str | None = None) -> "RunConfig":
        if not isinstance(data, dict):
            raise ParseError("config must be a JSON object", line=1, column=1)
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ParseError(f"unknown config keys {sorted(unknown)}", line=_line_of(source, sorted(unknown)[0]))
        if "group" not in data:
            raise ParseError("config needs a 'group' entry")
        window = data.get("window", {"length": 2})
        if isinstance(window, int):
            window = {"length": window}
        bad = set(window) - WINDOW_KEYS
        if bad:
            raise ParseError(f"unknown window keys {sorted(bad)}", line=_line_of(source, sorted(bad)[0]))
        mode = data.get("mode", "cochain")
        if mode not in ("cochain", "chain"):
            raise ParseError(f"mode must be 'cochain' or 'chain', got {mode!r}", line=_line_of(source, "mode"))
        output = data.get("output", "text")
        if output not in ("text", "json"):
            raise ParseError(f"output must be 'text' or 'json', got {output!r}", line=_line_of(source, "output"))
        return cls(
            group=data["group"],
            grading=dict(data.get("grading", {})),
            derivations=dict(data.get("derivations", {})),
            automorphisms=dict(data.get("automorphisms", {})),
            window=dict(window),
            mode=mode,
            output=output,
            seed=int(data.get("seed", 0)),
            sample_cap=int(data.get("sample_cap", DEFAULT_SAMPLE_CAP)),
            source=source,
        )

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        return cls.from_dict(data, text)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "grading": dict(self.grading),
            "derivations": dict(self.derivations),
            "automorphisms": dict(self.automorphisms),
            "window": dict(self.window),
            "mode": self.mode,
            "output": self.output,
            "seed": self.seed,
            "sample_cap": self.sample_cap,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _line_of(source: str | None, needle: str) -> int | None:
    if not source:
        return None
    for i, line in enumerate(source.splitlines(), 1):
        if needle in line:
            return i
    return None


class Context:
    """Objects built from a :class:`RunConfig`."""

    def __init__(self, config: RunConfig):
        self.config = config
        try:
            self.group = group_from_dict(config.group)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PreconditionError):
                raise
            raise ParseError(f"bad group descriptor: {exc}", line=_line_of(config.source, '"group"')) from None
        self.grading = Grading(self.group, config.grading)
        w = config.window
        spec = WindowSpec(int(w.get("length", 2)), dict(w.get("exponent_bounds", {})),
                          int(w.get("cap", WindowSpec(0).cap)))
        self.window: Window = enumerate_window(self.group, spec)
        self._derivations: dict = {}
        self._building: set = set()

    def _located(self, exc: ParseError, key: str, text: str) -> ParseError:
        return ParseError(str(exc).split(" (")[0].split(": '")[0], text, column=exc.column,
                          line=_line_of(self.config.source, text) or exc.line)

    def derivation(self, name: str) -> Derivation:
        if name in self._derivations:
            return self._derivations[name]
        if name not in self.config.derivations:
            raise PreconditionError(f"no derivation named {name!r}")
        if name in self._building:
            raise PreconditionError(f"derivation {name!r} refers to itself")
        self._building.add(name)
        text = self.config.derivations[name]
        try:
            d = parse_derivation(text, self.grading, self.window, self.derivation)
        except ParseError as exc:
            raise self._located(exc, name, text) from None
        finally:
            self._building.discard(name)
        self._derivations[name] = d
        return d

    def derivation_names(self) -> list:
        return sorted(self.config.derivations)

    def automorphism(self, name: str):
        if name not in self.config.automorphisms:
            raise PreconditionError(f"no automorphism named {name!r}")
        return build_automorphism(self.config.automorphisms[name], self.grading, self.window)

    def automorphism_names(self) -> list:
        return sorted(self.config.automorphisms)


# -- derivation grammar ---------------------------------------------------

_CENTRAL = re.compile(r"central\s+z=(?P<z>\S+)\s+tau=(?P<tau>.+)$")


def _split_top(body: str):
    """Split on commas outside parentheses; yields ``(offset, piece)``."""
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            yield start, body[start:i]
            start = i + 1
    if body[start:].strip():
        yield start, body[start:]


def _braced(text: str, start: int, open_ch: str, close_ch: str):
    """Return (offset, inner) for ``open_ch ... close_ch`` starting at ``start``."""
    if start >= len(text) or text[start] != open_ch:
        raise ParseError(f"expected '{open_ch}'", text, column=start + 1)
    if not text.rstrip().endswith(close_ch):
        raise ParseError(f"expected closing '{close_ch}'", text, column=len(text.rstrip()) + 1)
    return start + 1, text[start + 1:len(text.rstrip()) - 1]


def _entries(text: str, offset: int, body: str):
    """``key: value`` pairs with 1-based columns of each value."""
    out = []
    for off, piece in _split_top(body):
        if ":" not in piece:
            raise ParseError("expected 'key: value'", text, column=offset + off + 1)
        k, v = piece.split(":", 1)
        vcol = offset + off + len(k) + 2 + (len(v) - len(v.lstrip()))
        out.append((k.strip(), v.strip(), offset + off + (len(k) - len(k.lstrip())) + 1, vcol))
    return out


def _relocate(exc: ParseError, text: str, base: int) -> ParseError:
    col = None if exc.column is None else base + exc.column - 1
    return ParseError(str(exc).split(" (")[0].split(": '")[0], text, column=col)


def _element(text: str, piece: str, col: int, group):
    try:
        return group.evaluate(parse_word(piece, group.generator_names))
    except ParseError as exc:
        raise _relocate(exc, text, col) from None


def _coeff(text: str, piece: str, col: int) -> GaussianRational:
    try:
        return GaussianRational.parse(piece)
    except (ValueError, ZeroDivisionError):
        raise ParseError("malformed coefficient", text, column=col) from None


def parse_tau(text: str, grading: Grading, base: int = 0, whole: str | None = None):
    whole = text if whole is None else whole
    group = grading.group
    s = text.strip()
    if s.startswith("parity(") and s.endswith(")"):
        return ParityTau(grading, _coeff(whole, s[7:-1], base + 8))
    if s.startswith("additive"):
        off, body = _braced(s, 8, "{", "}")
        values = {}
        for k, v, kcol, vcol in _entries(whole, base + off, body):
            if k not in group.generator_names:
                raise ParseError(f"unknown generator {k!r}", whole, column=kcol)
            values[k] = _coeff(whole, v, vcol)
        return AdditiveTau(grading, values)
    if s.startswith("table"):
        off, body = _braced(s, 5, "{", "}")
        values = {}
        for k, v, kcol, vcol in _entries(whole, base + off, body):
            values[_element(whole, k, kcol, group)] = _coeff(whole, v, vcol)
        return TableTau(grading, values)
    raise ParseError("expected parity(c), additive{...} or table{...}", whole, column=base + 1)


def parse_derivation(text: str, grading: Grading, window: Window | None = None, resolve=None) -> Derivation:
    """Build a derivation from its config string.

    ``resolve`` maps names to derivations for ``lincomb``.
    """
    group = grading.group
    s = text.rstrip()
    lead = len(s) - len(s.lstrip())
    body = s.lstrip()
    head = body.split(None, 1)[0] if body else ""
    head = re.match(r"[a-z]*", head).group(0)
    rest_col = lead + len(head)
    rest = body[len(head):]
    if head == "inner":
        arg = rest.strip()
        col = rest_col + len(rest) - len(rest.lstrip()) + 1
        try:
            a = parse_signed(arg, group)
        except ParseError as exc:
            raise _relocate(exc, text, col + (1 if arg.startswith(("-", "+")) else 0)) from None
        return InnerDerivation(grading, a)
    if head == "multiply":
        arg = rest.strip()
        col = rest_col + len(rest) - len(rest.lstrip()) + 1
        return right_multiplication(grading, _element(text, arg, col, group))
    if head == "central":
        m = _CENTRAL.match(body)
        if not m:
            raise ParseError("expected 'central z=<element> tau=<form>'", text, column=lead + 1)
        z = _element(text, m.group("z"), lead + m.start("z") + 1, group)
        tau = parse_tau(m.group("tau"), grading, lead + m.start("tau"), text)
        return CentralDerivation(grading, z, tau, window)
    if head == "table":
        off, inner = _braced(body, 5, "{", "}")
        table = {}
        for k, v, kcol, vcol in _entries(text, lead + off, inner):
            if k not in group.generator_names:
                raise ParseError(f"unknown generator {k!r}", text, column=kcol)
            try:
                table[k] = AlgebraElement.parse(v, group)
            except ParseError as exc:
                raise _relocate(exc, text, vcol) from None
        return TableDerivation(grading, table)
    if head == "lincomb":
        stripped = rest.lstrip()
        off0 = rest_col + len(rest) - len(stripped)
        off, inner = _braced(stripped, 0, "[", "]")
        if resolve is None:
            raise PreconditionError("lincomb needs named derivations to refer to")
        terms = []
        for o, piece in _split_top(inner):
            p = piece.strip()
            col = off0 + off + o + (len(piece) - len(piece.lstrip())) + 1
            m = re.fullmatch(r"(?:(?P<c>-?\(.*\)|-?[0-9/]+i?|-)\s*\*?\s*)?(?P<n>[A-Za-z_][A-Za-z0-9_-]*)", p)
            if not m:
                raise ParseError("expected 'coeff*name'", text, column=col)
            c = m.group("c")
            if c is None:
                coeff = GaussianRational(1)
            elif c == "-":
                coeff = GaussianRational(-1)
            else:
                neg = c.startswith("-")
                coeff = _coeff(text, c.lstrip("-").strip("()"), col)
                coeff = -coeff if neg else coeff
            terms.append((coeff, resolve(m.group("n"))))
        return LinearCombination(grading, terms)
    raise ParseError("expected inner, central, table, lincomb or multiply", text, column=lead + 1)


def build_automorphism(spec: dict, grading: Grading, window: Window):
    """``{"form": "scaling", "lambda": "2"}``, ``{"form": "transport", "images": {...}}``
    or ``{"form": "matrix", "columns": {"<element>": "<algebra element>"}}``."""
    group = grading.group
    allowed = {"scaling": {"form", "lambda"}, "transport": {"form", "images"}, "matrix": {"form", "columns"}}
    form = spec.get("form")
    if form not in allowed:
        raise ParseError(f"unknown automorphism form {form!r}")
    unknown = set(spec) - allowed[form]
    if unknown:
        raise ParseError(f"unknown automorphism keys {sorted(unknown)}")
    if form == "scaling":
        return DiagonalScaling(grading, _coeff(str(spec["lambda"]), str(spec["lambda"]), 1))
    if form == "transport":
        images = {n: group.parse(v) for n, v in spec["images"].items()}
        return GroupTransport(grading, GroupMap(group, group, images, "automorphism"))
    columns = {group.parse(k): AlgebraElement.parse(v, group) for k, v in spec["columns"].items()}
    return WindowMatrix(grading, columns)
