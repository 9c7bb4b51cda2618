"""Concrete finitely generated groups with canonical normal forms.

Supported families: integers, free abelian Z^n, cyclic C_n, symmetric S_n
(Coxeter generators s1..s_{n-1}), the integer Heisenberg group H3 and finite
direct products of these. Every element is stored in normal form, so equality
is structural equality of the normal form.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .reports import GroupMismatch, ParseError, PreconditionError, Report

Word = tuple  # tuple of (generator name, exponent) pairs

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = {"e"}


def format_word(word: Word) -> str:
    if not word:
        return "e"
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in word)


def invert_word(word: Word) -> Word:
    return tuple((name, -exp) for name, exp in reversed(word))


def commutator_word(a: str, b: str) -> Word:
    return ((a, 1), (b, 1), (a, -1), (b, -1))


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``gen^exp*gen^exp...`` (``e`` or ``1`` for the identity)."""
    s = text.strip()
    if s in ("e", "1"):
        return ()
    if not s:
        raise ParseError("empty word", text, column=1)
    word = []
    n = len(text)
    pos = len(text) - len(text.lstrip())
    while True:
        m = _IDENT.match(text, pos)
        if not m:
            raise ParseError("expected generator name", text, column=pos + 1)
        name = m.group(0)
        if name not in names and name != "e":
            raise ParseError(f"unknown generator {name!r}", text, column=pos + 1)
        exp, pos = _parse_exp(text, m.end())
        if exp and name != "e":
            word.append((name, exp))
        while pos < n and text[pos] == " ":
            pos += 1
        if pos >= n:
            break
        if text[pos] != "*":
            raise ParseError("expected '*'", text, column=pos + 1)
        pos += 1
        while pos < n and text[pos] == " ":
            pos += 1
    return tuple(word)


def _parse_exp(text: str, pos: int):
    if pos < len(text) and text[pos] == "^":
        m = re.compile(r"[+-]?\d+").match(text, pos + 1)
        if not m:
            raise ParseError("expected integer exponent after '^'", text, column=pos + 2)
        return int(m.group(0)), m.end()
    return 1, pos


class GroupElement:
    """An element of a concrete group, held in normal form."""

    __slots__ = ("group", "nf", "_hash")

    def __init__(self, group: "Group", nf):
        self.group = group
        self.nf = nf
        self._hash = hash(nf)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.nf == other.nf and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.group.sort_key(self.nf) < other.group.sort_key(other.nf)

    def sort_key(self):
        return self.group.sort_key(self.nf)

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return mul(self, other)

    def __pow__(self, n: int):
        return self.group.power(self, n)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group._inv(self.nf))

    def is_identity(self) -> bool:
        return self.nf == self.group._identity_nf()

    def word(self) -> Word:
        return self.group._word(self.nf)

    def __str__(self):
        return format_word(self.word())

    def __repr__(self):
        return f"<{self.group.kind} {self}>"


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.group is not h.group and g.group != h.group:
        raise GroupMismatch(f"cannot multiply elements of {g.group} and {h.group}")
    return GroupElement(g.group, g.group._mul(g.nf, h.nf))


def inv(g: GroupElement) -> GroupElement:
    return g.inverse()


class Group:
    """Base class. Subclasses implement the normal-form arithmetic."""

    kind = "abstract"

    def __init__(self, generator_names: Sequence[str]):
        names = tuple(generator_names)
        for name in names:
            if not isinstance(name, str) or not _IDENT.fullmatch(name):
                raise ValueError(f"invalid generator name {name!r}")
            if name in _RESERVED:
                raise ValueError(f"generator name {name!r} is reserved for the identity")
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")
        self.generator_names = names

    # -- descriptor ----------------------------------------------------
    def key(self):
        return (self.kind, self.generator_names)

    def __eq__(self, other):
        return isinstance(other, Group) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"{type(self).__name__}{self.generator_names}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "generators": list(self.generator_names)}

    # -- elements ------------------------------------------------------
    def identity(self) -> GroupElement:
        return GroupElement(self, self._identity_nf())

    def gen(self, name: str) -> GroupElement:
        if name not in self.generator_names:
            raise KeyError(f"{name!r} is not a generator of {self}")
        return GroupElement(self, self._gen_nf(name))

    def generators(self) -> list:
        return [self.gen(n) for n in self.generator_names]

    def element(self, nf) -> GroupElement:
        return GroupElement(self, self._normalize(nf))

    def power(self, g: GroupElement, n: int) -> GroupElement:
        if n < 0:
            g, n = g.inverse(), -n
        result = self.identity()
        base = g
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, word: Iterable, images: dict | None = None, codomain: "Group | None" = None) -> GroupElement:
        """Product of the word's letters; ``images`` optionally substitutes generators."""
        target = codomain if codomain is not None else self
        result = target.identity()
        for name, exp in word:
            base = images[name] if images is not None else self.gen(name)
            result = result * target.power(base, exp)
        return result

    def parse(self, text: str) -> GroupElement:
        return self.evaluate(parse_word(text, self.generator_names))

    def relators(self) -> list:
        raise NotImplementedError

    def is_central_exact(self, g: GroupElement):
        """True/False from a closed-form centre description, or None if unknown."""
        return None

    def is_finite(self) -> bool:
        return False

    def _normalize(self, nf):
        return nf

    def sort_key(self, nf):
        return nf


class FreeAbelian(Group):
    kind = "free-abelian"

    def __init__(self, n: int, generator_names: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("free-abelian rank must be >= 1")
        if generator_names is None:
            generator_names = [f"x{i + 1}" for i in range(n)]
        if len(generator_names) != n:
            raise ValueError("need exactly n generator names")
        super().__init__(generator_names)
        self.n = n

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "generators": list(self.generator_names)}

    def _identity_nf(self):
        return (0,) * self.n

    def _gen_nf(self, name):
        i = self.generator_names.index(name)
        return tuple(1 if j == i else 0 for j in range(self.n))

    def _mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _inv(self, a):
        return tuple(-x for x in a)

    def _word(self, nf):
        return tuple((name, e) for name, e in zip(self.generator_names, nf) if e)

    def sort_key(self, nf):
        return (sum(abs(e) for e in nf), nf)

    def relators(self):
        return [commutator_word(a, b) for a, b in itertools.combinations(self.generator_names, 2)]

    def is_central_exact(self, g):
        return True


class Integers(FreeAbelian):
    kind = "integers"

    def __init__(self, generator_names: Sequence[str] = ("x",)):
        super().__init__(1, generator_names)

    def to_dict(self):
        return {"kind": self.kind, "generators": list(self.generator_names)}


class Cyclic(Group):
    kind = "cyclic"

    def __init__(self, n: int, generator_names: Sequence[str] = ("x",)):
        if n < 1:
            raise ValueError("cyclic order must be >= 1")
        super().__init__(generator_names)
        if len(self.generator_names) != 1:
            raise ValueError("cyclic group takes one generator")
        self.n = n

    def key(self):
        return (self.kind, self.n, self.generator_names)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "generators": list(self.generator_names)}

    def is_finite(self):
        return True

    def _identity_nf(self):
        return 0

    def _gen_nf(self, name):
        return 1 % self.n

    def _mul(self, a, b):
        return (a + b) % self.n

    def _inv(self, a):
        return (-a) % self.n

    def _normalize(self, nf):
        return nf % self.n

    def _word(self, nf):
        return ((self.generator_names[0], nf),) if nf else ()

    def relators(self):
        return [((self.generator_names[0], self.n),)]

    def is_central_exact(self, g):
        return True


class Symmetric(Group):
    """S_n on {0..n-1}; generator s_i swaps i-1 and i. Product ``g*h`` applies h first."""

    kind = "symmetric"

    def __init__(self, n: int, generator_names: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("symmetric degree must be >= 1")
        if generator_names is None:
            generator_names = [f"s{i}" for i in range(1, n)]
        if len(generator_names) != n - 1:
            raise ValueError("S_n takes n-1 Coxeter generators")
        super().__init__(generator_names)
        self.n = n

    def key(self):
        return (self.kind, self.n, self.generator_names)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "generators": list(self.generator_names)}

    def is_finite(self):
        return True

    def _identity_nf(self):
        return tuple(range(self.n))

    def _gen_nf(self, name):
        i = self.generator_names.index(name)
        p = list(range(self.n))
        p[i], p[i + 1] = p[i + 1], p[i]
        return tuple(p)

    def _mul(self, a, b):
        return tuple(a[k] for k in b)

    def _inv(self, a):
        out = [0] * self.n
        for k, ak in enumerate(a):
            out[ak] = k
        return tuple(out)

    def _normalize(self, nf):
        nf = tuple(nf)
        if sorted(nf) != list(range(self.n)):
            raise ValueError(f"{nf} is not a permutation of 0..{self.n - 1}")
        return nf

    def _word(self, nf):
        # reduced word: peel right descents p = (p s_i) s_i
        p = list(nf)
        letters = []
        while True:
            for i in range(self.n - 1):
                if p[i] > p[i + 1]:
                    p[i], p[i + 1] = p[i + 1], p[i]
                    letters.append(self.generator_names[i])
                    break
            else:
                break
        letters.reverse()
        return tuple((name, 1) for name in letters)

    def sort_key(self, nf):
        inversions = sum(1 for i, j in itertools.combinations(range(self.n), 2) if nf[i] > nf[j])
        return (inversions, nf)

    def transposition(self, i: int, j: int) -> GroupElement:
        """The transposition swapping points ``i`` and ``j`` (1-based, as in cycle notation)."""
        p = list(range(self.n))
        p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
        return self.element(p)

    def relators(self):
        s = self.generator_names
        rels = [((a, 2),) for a in s]
        for i in range(len(s) - 1):
            rels.append(((s[i], 1), (s[i + 1], 1)) * 3)
        for i, j in itertools.combinations(range(len(s)), 2):
            if j - i >= 2:
                rels.append(((s[i], 1), (s[j], 1)) * 2)
        return rels

    def is_central_exact(self, g):
        return True if self.n <= 2 else g.is_identity()


class Heisenberg(Group):
    """Integer Heisenberg group with z = x y x^-1 y^-1 central.

    Normal form ``(b, c, a)`` stands for y^b z^c x^a; x^a y^b = y^b z^(ab) x^a.
    """

    kind = "heisenberg"

    def __init__(self, generator_names: Sequence[str] = ("x", "y", "z")):
        super().__init__(generator_names)
        if len(self.generator_names) != 3:
            raise ValueError("heisenberg takes generators (x, y, z)")

    def _identity_nf(self):
        return (0, 0, 0)

    def _gen_nf(self, name):
        x, y, z = self.generator_names
        return {x: (0, 0, 1), y: (1, 0, 0), z: (0, 1, 0)}[name]

    def _mul(self, p, q):
        b1, c1, a1 = p
        b2, c2, a2 = q
        return (b1 + b2, c1 + c2 + a1 * b2, a1 + a2)

    def _inv(self, p):
        b, c, a = p
        return (-b, a * b - c, -a)

    def _word(self, nf):
        x, y, z = self.generator_names
        b, c, a = nf
        return tuple((n, e) for n, e in ((y, b), (z, c), (x, a)) if e)

    def sort_key(self, nf):
        return (sum(abs(e) for e in nf), nf)

    def relators(self):
        x, y, z = self.generator_names
        return [
            ((z, -1),) + commutator_word(x, y),
            commutator_word(x, z),
            commutator_word(y, z),
        ]

    def is_central_exact(self, g):
        b, _, a = g.nf
        return a == 0 and b == 0


class DirectProduct(Group):
    kind = "direct-product"

    def __init__(self, factors: Sequence[Group]):
        factors = tuple(factors)
        if not factors:
            raise ValueError("direct product needs at least one factor")
        names = [n for f in factors for n in f.generator_names]
        super().__init__(names)
        self.factors = factors
        self._owner = {}
        for i, f in enumerate(factors):
            for n in f.generator_names:
                self._owner[n] = i

    def key(self):
        return (self.kind, tuple(f.key() for f in self.factors))

    def to_dict(self):
        return {"kind": self.kind, "factors": [f.to_dict() for f in self.factors]}

    def __repr__(self):
        return " x ".join(repr(f) for f in self.factors)

    def is_finite(self):
        return all(f.is_finite() for f in self.factors)

    def _identity_nf(self):
        return tuple(f._identity_nf() for f in self.factors)

    def _gen_nf(self, name):
        i = self._owner[name]
        return tuple(f._gen_nf(name) if j == i else f._identity_nf() for j, f in enumerate(self.factors))

    def _mul(self, a, b):
        return tuple(f._mul(x, y) for f, x, y in zip(self.factors, a, b))

    def _inv(self, a):
        return tuple(f._inv(x) for f, x in zip(self.factors, a))

    def _normalize(self, nf):
        return tuple(f._normalize(x) for f, x in zip(self.factors, nf))

    def _word(self, nf):
        return tuple(itertools.chain.from_iterable(f._word(x) for f, x in zip(self.factors, nf)))

    def sort_key(self, nf):
        keys = [f.sort_key(x) for f, x in zip(self.factors, nf)]
        return (sum(k[0] if isinstance(k, tuple) else 0 for k in keys), tuple(keys))

    def component(self, g: GroupElement, i: int) -> GroupElement:
        return GroupElement(self.factors[i], g.nf[i])

    def embed(self, i: int, g: GroupElement) -> GroupElement:
        nf = list(self._identity_nf())
        nf[i] = g.nf
        return GroupElement(self, tuple(nf))

    def pair(self, *components: GroupElement) -> GroupElement:
        return GroupElement(self, tuple(c.nf for c in components))

    def relators(self):
        rels = [r for f in self.factors for r in f.relators()]
        for (i, f), (j, h) in itertools.combinations(enumerate(self.factors), 2):
            for a in f.generator_names:
                for b in h.generator_names:
                    rels.append(commutator_word(a, b))
        return rels

    def is_central_exact(self, g):
        verdicts = [f.is_central_exact(GroupElement(f, x)) for f, x in zip(self.factors, g.nf)]
        if any(v is False for v in verdicts):
            return False
        if any(v is None for v in verdicts):
            return None
        return True


def group_from_dict(spec: dict) -> Group:
    """Build a group from its descriptor mapping (the config-file form)."""
    allowed = {"kind", "n", "generators", "factors"}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown group keys: {sorted(unknown)}")
    kind = spec.get("kind")
    gens = spec.get("generators")
    if kind == "integers":
        return Integers(gens or ("x",))
    if kind == "free-abelian":
        return FreeAbelian(int(spec["n"]), gens)
    if kind == "cyclic":
        return Cyclic(int(spec["n"]), gens or ("x",))
    if kind == "symmetric":
        return Symmetric(int(spec["n"]), gens)
    if kind == "heisenberg":
        return Heisenberg(gens or ("x", "y", "z"))
    if kind == "direct-product":
        return DirectProduct([group_from_dict(f) for f in spec["factors"]])
    raise ValueError(f"unknown group kind {kind!r}")


# -- windows -------------------------------------------------------------

DEFAULT_WINDOW_CAP = 100_000


class WindowTooLarge(PreconditionError):
    pass


@dataclass(frozen=True)
class WindowSpec:
    length: int
    exponent_bounds: dict = field(default_factory=dict)
    cap: int = DEFAULT_WINDOW_CAP

    def to_dict(self):
        return {"length": self.length, "exponent_bounds": dict(self.exponent_bounds), "cap": self.cap}


class Window:
    """A finite, inverse-closed, sorted subset of a group containing the identity."""

    def __init__(self, group: Group, elements: Iterable[GroupElement], spec: WindowSpec | None = None):
        found = set(elements)
        found.add(group.identity())
        found |= {g.inverse() for g in found}
        self.group = group
        self.elements = tuple(sorted(found, key=GroupElement.sort_key))
        self.spec = spec
        self._members = frozenset(self.elements)

    @classmethod
    def from_elements(cls, group: Group, elements: Iterable[GroupElement]) -> "Window":
        return cls(group, elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._members

    def is_complete(self) -> bool:
        """True when the window is the whole (finite) group."""
        if not self.group.is_finite():
            return False
        closed = all((g * s) in self for g in self.elements for s in self.group.generators())
        return closed

    def summary(self) -> dict:
        out = {"size": len(self.elements), "group": self.group.to_dict()}
        if self.spec is not None:
            out["spec"] = self.spec.to_dict()
        return out

    def __repr__(self):
        return f"Window({self.group!r}, {len(self)} elements)"


def enumerate_window(group: Group, spec: WindowSpec | int) -> Window:
    """Ball of the given word length over generators and their inverses (BFS)."""
    if isinstance(spec, int):
        spec = WindowSpec(spec)
    if spec.length < 0:
        raise PreconditionError("window length must be non-negative")
    steps = [g for s in group.generators() for g in (s, s.inverse())]
    seen = {group.identity()}
    frontier = [group.identity()]
    for _ in range(spec.length):
        nxt = []
        for g in frontier:
            for s in steps:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > spec.cap:
                        raise WindowTooLarge(f"window exceeds cap of {spec.cap} elements")
        if not nxt:
            break
        frontier = nxt
    if spec.exponent_bounds:
        bounds = spec.exponent_bounds
        seen = {g for g in seen if all(abs(e) <= bounds.get(n, abs(e)) for n, e in g.word())}
    return Window(group, seen, spec)


def centralizer_in_window(g: GroupElement, w: Window) -> list:
    if g.group != w.group:
        raise GroupMismatch("element and window belong to different groups")
    return [t for t in w if t * g == g * t]


@dataclass(frozen=True)
class Centrality:
    central: bool
    exact: bool

    def __bool__(self):
        return self.central

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "window-bounded"


def is_central(g: GroupElement, w: Window | None = None) -> Centrality:
    verdict = g.group.is_central_exact(g)
    if verdict is not None:
        return Centrality(bool(verdict), True)
    if w is None:
        raise PreconditionError("no closed-form centre for this group; a window is required")
    return Centrality(all(t * g == g * t for t in w), False)


# -- homomorphisms ------------------------------------------------------

class GroupMap:
    """A homomorphism given by generator images."""

    def __init__(self, domain: Group, codomain: Group, images: dict, kind: str = "endomorphism"):
        if kind not in ("endomorphism", "automorphism"):
            raise ValueError(f"unknown map kind {kind!r}")
        missing = set(domain.generator_names) - set(images)
        if missing:
            raise ValueError(f"missing generator images: {sorted(missing)}")
        imgs = {}
        for name in domain.generator_names:
            img = images[name]
            if isinstance(img, str):
                img = codomain.parse(img)
            if not isinstance(img, GroupElement) or img.group != codomain:
                raise ValueError(f"image of {name!r} is not an element of the codomain")
            imgs[name] = img
        self.domain = domain
        self.codomain = codomain
        self.images = imgs
        self.kind = kind

    def __call__(self, g: GroupElement) -> GroupElement:
        if g.group != self.domain:
            raise GroupMismatch("element is not in the map's domain")
        return self.domain.evaluate(g.word(), self.images, self.codomain)

    def compose(self, other: "GroupMap") -> "GroupMap":
        """``self`` after ``other``."""
        return GroupMap(other.domain, self.codomain,
                        {n: self(img) for n, img in other.images.items()}, self.kind)

    def inverse(self, search: Window) -> "GroupMap":
        """Inverse automorphism, locating generator preimages inside ``search``."""
        table = {}
        for g in search:
            table.setdefault(self(g), g)
        images = {}
        for s in self.codomain.generators():
            if s not in table:
                raise PreconditionError(f"generator {s} has no preimage in the search window")
            images[str(s)] = table[s]
        return GroupMap(self.codomain, self.domain, images, self.kind)

    def to_dict(self):
        return {"kind": self.kind, "images": {n: str(g) for n, g in self.images.items()}}

    def __repr__(self):
        imgs = ", ".join(f"{n}->{g}" for n, g in self.images.items())
        return f"GroupMap({imgs})"


def identity_map(group: Group) -> GroupMap:
    return GroupMap(group, group, {n: group.gen(n) for n in group.generator_names}, "automorphism")


def inner_automorphism(c: GroupElement) -> GroupMap:
    """g -> c g c^-1."""
    group = c.group
    ci = c.inverse()
    return GroupMap(group, group, {n: c * group.gen(n) * ci for n in group.generator_names}, "automorphism")


def validate_group_map(f: GroupMap, w: Window, search_length: int = 3) -> Report:
    """Relators must map to e; automorphisms must also be injective on ``w`` and hit every generator."""
    problems = []
    for rel in f.domain.relators():
        img = f.domain.evaluate(rel, f.images, f.codomain)
        if not img.is_identity():
            problems.append({"violated_relator": format_word(rel), "image": img})
    details = {"kind": f.kind, "relators_checked": len(f.domain.relators())}
    is_hom = not problems
    details["homomorphism"] = is_hom
    if f.kind == "automorphism":
        seen = {}
        for g in w:
            img = f(g)
            if img in seen:
                problems.append({"non_injective": (seen[img], g), "image": img})
                break
            seen[img] = g
        ball = enumerate_window(f.domain, search_length)
        hit = {f(g) for g in ball}
        missed = [s for s in f.codomain.generators() if s not in hit]
        for s in missed:
            problems.append({"generator_not_hit": s, "search_length": search_length})
        details["search_length"] = search_length
    return Report("group-map", not problems, problems, details)
