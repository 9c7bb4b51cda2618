"""The signed conjugacy-action groupoid of a graded group.

Objects are signed elements ``±g``. A morphism is a pair ``(u, v)`` with
source ``(-1)^|v| v^-1 u`` and target ``u v^-1``; composition is
``(u2, v2) o (u1, v1) = ((-1)^|v2| v2 u1, v2 v1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import Grading
from .groups import GroupElement, Window, parse_word
from .reports import ParseError, Report, limit


class SignedElement:
    """``sign * element`` with sign in {+1, -1}. All sign bookkeeping lives here."""

    __slots__ = ("element", "sign", "_hash")

    def __init__(self, element: GroupElement, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.element = element
        self.sign = sign
        self._hash = hash((element, sign))

    @classmethod
    def coerce(cls, value) -> "SignedElement":
        if isinstance(value, SignedElement):
            return value
        if isinstance(value, GroupElement):
            return cls(value, 1)
        raise TypeError(f"cannot treat {value!r} as a signed element")

    @property
    def group(self):
        return self.element.group

    def __mul__(self, other):
        if isinstance(other, GroupElement):
            other = SignedElement(other)
        if not isinstance(other, SignedElement):
            return NotImplemented
        return SignedElement(self.element * other.element, self.sign * other.sign)

    def __rmul__(self, other):
        if isinstance(other, GroupElement):
            return SignedElement(other) * self
        return NotImplemented

    def __neg__(self):
        return SignedElement(self.element, -self.sign)

    def times_sign(self, s: int) -> "SignedElement":
        return self if s == 1 else -self

    def inverse(self) -> "SignedElement":
        # (-g)(-g^-1) = e, so the sign is kept
        return SignedElement(self.element.inverse(), self.sign)

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            other = SignedElement(other)
        if not isinstance(other, SignedElement):
            return NotImplemented
        return self.sign == other.sign and self.element == other.element

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.element.sort_key(), -self.sign)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"-{self.element}" if self.sign < 0 else str(self.element)

    def __repr__(self):
        return f"SignedElement({self})"


def signed(g, sign: int = 1) -> SignedElement:
    return SignedElement.coerce(g).times_sign(sign)


@dataclass(frozen=True)
class Morphism:
    u: SignedElement
    v: SignedElement

    @property
    def canonical(self) -> bool:
        """Canonical morphisms carry a positive ``v``."""
        return self.v.sign == 1

    def sort_key(self):
        return (self.v.sort_key(), self.u.sort_key())

    def __str__(self):
        return f"({self.u} ; {self.v})"


def morphism(u, v) -> Morphism:
    return Morphism(SignedElement.coerce(u), SignedElement.coerce(v))


_MORPHISM_RE = re.compile(r"^\s*\(\s*(?P<u>[^;]+?)\s*;\s*(?P<v>[^)]+?)\s*\)\s*$")


def parse_signed(text: str, group) -> SignedElement:
    s = text.strip()
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:].strip()
    elif s.startswith("+"):
        s = s[1:].strip()
    return SignedElement(group.evaluate(parse_word(s, group.generator_names)), sign)


def parse_morphism(text: str, group) -> Morphism:
    """Parse the literal ``(u ; v)`` with signed words."""
    m = _MORPHISM_RE.match(text)
    if not m:
        raise ParseError("expected morphism literal '(u ; v)'", text, column=1)
    return Morphism(parse_signed(m.group("u"), group), parse_signed(m.group("v"), group))


class NotComposable(ValueError):
    pass


class ActionGroupoid:
    """Groupoid operations relative to a fixed grading (which supplies the parities)."""

    def __init__(self, grading: Grading):
        self.grading = grading
        self.group = grading.group

    def _sgn(self, a: SignedElement) -> int:
        return self.grading.sign(a.element)

    def parity(self, a) -> int:
        return self.grading.parity(SignedElement.coerce(a).element)

    def source(self, m: Morphism) -> SignedElement:
        return (m.v.inverse() * m.u).times_sign(self._sgn(m.v))

    def target(self, m: Morphism) -> SignedElement:
        return m.u * m.v.inverse()

    def is_loop(self, m: Morphism) -> bool:
        return self.source(m) == self.target(m)

    def composable(self, m2: Morphism, m1: Morphism) -> bool:
        return self.target(m1) == self.source(m2)

    def compose(self, m2: Morphism, m1: Morphism) -> Morphism:
        """``m2 o m1`` (apply ``m1`` first)."""
        if not self.composable(m2, m1):
            raise NotComposable(f"t{m1} = {self.target(m1)} differs from s{m2} = {self.source(m2)}")
        return self._compose(m2, m1)

    def _compose(self, m2: Morphism, m1: Morphism) -> Morphism:
        return Morphism((m2.v * m1.u).times_sign(self._sgn(m2.v)), m2.v * m1.v)

    def identity(self, a) -> Morphism:
        a = SignedElement.coerce(a)
        return Morphism(a, SignedElement(self.group.identity()))

    def inverse(self, m: Morphism) -> Morphism:
        vi = m.v.inverse()
        return Morphism((vi * m.u * vi).times_sign(self._sgn(m.v)), vi)

    def twisted_conjugate(self, a, t: GroupElement) -> SignedElement:
        """``(-1)^|t| t^-1 a t``."""
        a = SignedElement.coerce(a)
        return (SignedElement(t.inverse()) * a * t).times_sign(self.grading.sign(t))

    def objects(self, w: Window) -> list:
        return [SignedElement(g, s) for g in w for s in (1, -1)]

    def morphisms(self, w: Window) -> list:
        """All canonical morphisms whose ``u`` and ``v`` components lie in the window."""
        return [Morphism(u, SignedElement(v)) for v in w for u in self.objects(w)]

    def hom_set(self, a, b, w: Window) -> list:
        """Canonical morphisms a -> b with ``v`` in the window.

        For fixed ``v`` the source condition forces ``u = (-1)^|v| v a``.
        """
        a = SignedElement.coerce(a)
        b = SignedElement.coerce(b)
        out = []
        for v in w:
            sv = SignedElement(v)
            m = Morphism((sv * a).times_sign(self.grading.sign(v)), sv)
            if self.target(m) == b:
                out.append(m)
        return out

    def loops_at(self, a, w: Window) -> list:
        return self.hom_set(a, a, w)

    def component_of(self, a, w: Window) -> list:
        a = SignedElement.coerce(a)
        return sorted({self.twisted_conjugate(a, t) for t in w}, key=SignedElement.sort_key)


def check_groupoid_axioms(gd: ActionGroupoid, w: Window, cap: int | None = None, seed: int = 0) -> Report:
    """Associativity, identity and inverse laws and endpoint coherence on a window."""
    mors = gd.morphisms(w)
    by_source: dict = {}
    for m in mors:
        by_source.setdefault(gd.source(m), []).append(m)
    failures = []

    def fail(law, **kw):
        if len(failures) < 20:
            failures.append({"law": law, **kw})

    n_fail = 0
    for m in mors:
        s, t = gd.source(m), gd.target(m)
        if gd.compose(m, gd.identity(s)) != m or gd.compose(gd.identity(t), m) != m:
            n_fail += 1
            fail("identity", morphism=m)
        mi = gd.inverse(m)
        if gd.compose(mi, m) != gd.identity(s) or gd.compose(m, mi) != gd.identity(t):
            n_fail += 1
            fail("inverse", morphism=m)

    pairs = [(m1, m2) for m1 in mors for m2 in by_source.get(gd.target(m1), ())]
    pairs, pair_fraction = limit(pairs, cap, seed)
    for m1, m2 in pairs:
        c = gd.compose(m2, m1)
        if gd.source(c) != gd.source(m1) or gd.target(c) != gd.target(m2):
            n_fail += 1
            fail("endpoint-coherence", pair=(m2, m1))

    triples = [
        (m1, m2, m3)
        for m1, m2 in pairs
        for m3 in by_source.get(gd.target(m2), ())
    ]
    triples, triple_fraction = limit(triples, cap, seed + 1)
    for m1, m2, m3 in triples:
        # composability of every triple is guaranteed by construction
        left = gd._compose(m3, gd._compose(m2, m1))
        right = gd._compose(gd._compose(m3, m2), m1)
        if left != right:
            n_fail += 1
            fail("associativity", triple=(m3, m2, m1))

    details = {
        "morphisms": len(mors),
        "composable_pairs": len(pairs),
        "composable_triples": len(triples),
        "pair_sampling_fraction": pair_fraction,
        "triple_sampling_fraction": triple_fraction,
        "violations": n_fail,
    }
    return Report("groupoid-axioms", n_fail == 0, failures, details)


def check_free_transitive(gd: ActionGroupoid, a, b, w: Window) -> Report:
    """The loop action Hom(a,a) x Hom(a,b) -> Hom(a,b), (phi, psi) -> psi o phi.

    Checks injectivity in ``phi`` for each ``psi`` and that any two elements of
    Hom(a,b) differ by a loop at ``a``. Whether that loop lies in the window's
    own enumeration is only asserted when the window is the whole group.
    """
    loops = gd.loops_at(a, w)
    homs = gd.hom_set(a, b, w)
    problems = []
    loop_set = set(loops)
    complete = w.is_complete()
    for psi in homs:
        images = {gd.compose(psi, phi) for phi in loops}
        if len(images) != len(loops):
            problems.append({"not_free": psi})
        for psi2 in homs:
            diff = gd.compose(gd.inverse(psi2), psi)
            if not gd.is_loop(diff) or gd.source(diff) != SignedElement.coerce(a):
                problems.append({"not_a_loop": (psi, psi2)})
            elif complete and diff not in loop_set:
                problems.append({"loop_missing_from_window": diff})
            elif gd.compose(psi2, diff) != psi:
                problems.append({"not_transitive": (psi, psi2)})
    details = {"loops": len(loops), "homs": len(homs), "window_complete": complete}
    return Report("free-transitive", not problems, problems, details)


def check_loop_identity(gd: ActionGroupoid, w: Window, cap: int | None = None, seed: int = 0) -> Report:
    """(bz, za) o (a^-1 b z, z) = (b z a^-1, z) o (bz, az) for even ``a``, ``b`` in the window
    and every loop ``(bz, z)`` at ``b`` (``z`` even and commuting with ``b``).

    Composition is read right to left, ``m2 o m1`` applying ``m1`` first. For
    odd ``a`` the two sides are not composable; such triples are counted
    separately rather than treated as failures.
    """
    par = gd.grading.parity
    loops = [(b, z) for b in w for z in w if par(z) == 0 and b * z == z * b]
    triples = [(a, b, z) for a in w if par(a) == 0 for b, z in loops]
    triples, fraction = limit(triples, cap, seed)
    bad = []
    n_bad = 0
    odd = sum(1 for a in w if par(a)) * len(loops)
    for a, b, z in triples:
        ai = a.inverse()
        lhs2, lhs1 = morphism(b * z, z * a), morphism(ai * b * z, z)
        rhs2, rhs1 = morphism(b * z * ai, z), morphism(b * z, a * z)
        if not (gd.composable(lhs2, lhs1) and gd.composable(rhs2, rhs1)):
            n_bad += 1
            if len(bad) < 10:
                bad.append({"a": a, "b": b, "z": z, "reason": "not composable"})
            continue
        left, right = gd._compose(lhs2, lhs1), gd._compose(rhs2, rhs1)
        if left != right:
            n_bad += 1
            if len(bad) < 10:
                bad.append({"a": a, "b": b, "z": z, "left": left, "right": right})
    details = {"instances": len(triples), "sampling_fraction": fraction, "odd_a_skipped": odd,
               "failing_instances": n_bad}
    return Report("loop-identity", n_bad == 0, bad, details)
