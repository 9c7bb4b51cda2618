"""Graded derivations of Q(i)[G] and graded group characters.

A derivation is stored by its action on basis elements ``g``; ``apply``
extends it linearly. Values on basis elements are cached per instance; the
cache is filled idempotently so concurrent readers always observe the same
values.
"""

from __future__ import annotations

from typing import Callable

from .algebra import AlgebraElement, Grading
from .coefficients import ONE, ZERO, GaussianRational
from .groups import GroupElement, Window, format_word, is_central
from .reports import PreconditionError, Report, limit


# -- graded group characters ------------------------------------------------

class GradedGroupCharacter:
    """tau: G -> Q(i) with tau(ab) = tau(a) + (-1)^|a| tau(b)."""

    form = "abstract"

    def __init__(self, grading: Grading):
        self.grading = grading

    def __call__(self, g: GroupElement) -> GaussianRational:
        raise NotImplementedError

    def proof(self):
        """``(True, reason)`` when validity follows algebraically, ``(False, reason)`` when
        it is refuted, ``None`` when only an extensional check is possible."""
        return None


class ParityTau(GradedGroupCharacter):
    """tau(g) = c * (deg g mod 2). Valid for every grading."""

    form = "parity"

    def __init__(self, grading: Grading, c=1):
        super().__init__(grading)
        self.c = GaussianRational.coerce(c)

    def __call__(self, g):
        return self.c if self.grading.parity(g) else ZERO

    def proof(self):
        return True, "parity form: |ab| = |b| for even a and 1 - |b| for odd a"

    def __str__(self):
        return f"parity({self.c})"


class AdditiveTau(GradedGroupCharacter):
    """Additive on generator exponents; a graded character only when every generator is even."""

    form = "additive"

    def __init__(self, grading: Grading, values: dict):
        super().__init__(grading)
        unknown = set(values) - set(grading.group.generator_names)
        if unknown:
            raise ValueError(f"tau values for unknown generators {sorted(unknown)}")
        self.values = {n: GaussianRational.coerce(values.get(n, 0)) for n in grading.group.generator_names}

    def word_value(self, word) -> GaussianRational:
        total = ZERO
        for name, exp in word:
            total = total + self.values[name] * exp
        return total

    def __call__(self, g):
        return self.word_value(g.word())

    def proof(self):
        odd = [n for n, d in self.grading.degrees.items() if d % 2 and self.values[n]]
        if odd:
            return False, f"nonzero additive values on odd generators {odd}"
        for rel in self.grading.group.relators():
            if self.word_value(rel):
                return False, f"relator {format_word(rel)} has nonzero tau"
        if any(d % 2 for d in self.grading.degrees.values()) and any(self.values.values()):
            return None
        return True, "all signs are +1 and every relator has tau 0"

    def __str__(self):
        inner = ", ".join(f"{n}: {c}" for n, c in self.values.items())
        return f"additive{{{inner}}}"


class TableTau(GradedGroupCharacter):
    """Explicit finite table; elements outside the table evaluate to 0."""

    form = "table"

    def __init__(self, grading: Grading, values: dict):
        super().__init__(grading)
        self.values = {g: GaussianRational.coerce(c) for g, c in values.items()}
        self.domain = frozenset(self.values)

    def __call__(self, g):
        return self.values.get(g, ZERO)

    def __str__(self):
        items = sorted(self.values.items(), key=lambda kv: kv[0].sort_key())
        return "table{" + ", ".join(f"{g}: {c}" for g, c in items) + "}"


def validate_tau(tau: GradedGroupCharacter, gr: Grading, w: Window, max_counterexamples: int = 10) -> Report:
    """Pairwise check of the graded character law on the window.

    Table forms are only checked on pairs whose factors and product all lie in
    the table (window-bounded mode); closed forms report their algebraic proof.
    """
    if tau.grading != gr:
        raise PreconditionError("tau was built for a different grading")
    proof = tau.proof()
    bad = []
    n_bad = checked = skipped = 0
    domain = getattr(tau, "domain", None)
    for a in w:
        for b in w:
            ab = a * b
            if domain is not None and not (a in domain and b in domain and ab in domain):
                skipped += 1
                continue
            checked += 1
            lhs = tau(ab)
            rhs = tau(a) + gr.sign(a) * tau(b)
            if lhs != rhs:
                n_bad += 1
                if len(bad) < max_counterexamples:
                    bad.append({"pair": (a, b), "tau_product": lhs, "expected": rhs})
    passed = n_bad == 0
    details = {"form": tau.form, "pairs_checked": checked, "pairs_skipped": skipped, "failing_pairs": n_bad}
    if proof is not None:
        details["proof"] = proof[1]
        details["mode"] = "exact" if proof[0] else "refuted"
        passed = passed and proof[0]
    else:
        details["mode"] = "window-bounded"
    return Report("tau", passed, bad, details)


# -- derivations -------------------------------------------------------------

class Derivation:
    """Linear operator on Q(i)[G] given on basis elements."""

    kind = "abstract"

    def __init__(self, grading: Grading):
        self.grading = grading
        self.group = grading.group
        self._cache: dict = {}

    def _basis(self, g: GroupElement) -> AlgebraElement:
        raise NotImplementedError

    def column(self, g: GroupElement) -> AlgebraElement:
        """d(g) for a basis element ``g``."""
        val = self._cache.get(g)
        if val is None:
            val = self._basis(g)
            self._cache[g] = val
        return val

    def apply(self, a) -> AlgebraElement:
        if isinstance(a, GroupElement):
            return self.column(a)
        out = AlgebraElement(self.group)
        terms = []
        for g, c in a.terms.items():
            terms.extend((h, c * v) for h, v in self.column(g).terms.items())
        return AlgebraElement(self.group, terms) if terms else out

    __call__ = apply

    def __add__(self, other):
        return LinearCombination(self.grading, [(ONE, self), (ONE, other)])

    def __sub__(self, other):
        return LinearCombination(self.grading, [(ONE, self), (-ONE, other)])

    def __neg__(self):
        return LinearCombination(self.grading, [(-ONE, self)])

    def __rmul__(self, c):
        return LinearCombination(self.grading, [(GaussianRational.coerce(c), self)])

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class ZeroDerivation(Derivation):
    kind = "zero"

    def _basis(self, g):
        return AlgebraElement(self.group)

    def __str__(self):
        return "0"


class InnerDerivation(Derivation):
    """d_a(x) = a x - (-1)^|x| x a. ``a`` may carry a sign."""

    kind = "inner"

    def __init__(self, grading: Grading, a):
        super().__init__(grading)
        sign = 1
        if hasattr(a, "sign") and hasattr(a, "element"):
            a, sign = a.element, a.sign
        self.a = a
        self.sign = sign

    def _basis(self, g):
        terms = [(self.a * g, self.sign), (g * self.a, -self.sign * self.grading.sign(g))]
        return AlgebraElement(self.group, terms)

    def __str__(self):
        return f"inner {'-' if self.sign < 0 else ''}{self.a}"


class CentralDerivation(Derivation):
    """d(g) = tau(g) g z for central ``z``; centrality and tau are validated on construction."""

    kind = "central"

    def __init__(self, grading: Grading, z: GroupElement, tau: GradedGroupCharacter, window: Window | None = None):
        super().__init__(grading)
        centrality = is_central(z, window)
        if not centrality.central:
            raise PreconditionError(f"{z} is not central ({centrality.mode})")
        proof = tau.proof()
        if proof is not None and not proof[0]:
            raise PreconditionError(f"tau is not a graded group character: {proof[1]}")
        if proof is None:
            if window is None:
                raise PreconditionError("tau can only be validated on a window; pass one")
            report = validate_tau(tau, grading, window)
            if not report.passed:
                raise PreconditionError(f"tau fails the graded character law: {report.counterexamples[0]}")
        self.z = z
        self.tau = tau
        self.centrality = centrality

    def _basis(self, g):
        return AlgebraElement(self.group, [(g * self.z, self.tau(g))])

    def __str__(self):
        return f"central z={self.z} tau={self.tau}"


class CentralMap(Derivation):
    """g -> tau(g) g z with no validation, for auditing invalid data."""

    kind = "central-unchecked"

    def __init__(self, grading: Grading, z: GroupElement, tau: GradedGroupCharacter):
        super().__init__(grading)
        self.z = z
        self.tau = tau

    def _basis(self, g):
        return AlgebraElement(self.group, [(g * self.z, self.tau(g))])

    def __str__(self):
        return f"central-unchecked z={self.z} tau={self.tau}"


class TableDerivation(Derivation):
    """Generator table extended by the graded Leibniz rule along normal-form words."""

    kind = "table"

    def __init__(self, grading: Grading, table: dict):
        super().__init__(grading)
        unknown = set(table) - set(self.group.generator_names)
        if unknown:
            raise ValueError(f"table entries for unknown generators {sorted(unknown)}")
        self.table = {}
        for name in self.group.generator_names:
            val = table.get(name, AlgebraElement(self.group))
            if isinstance(val, str):
                val = AlgebraElement.parse(val, self.group)
            self.table[name] = val
        self._inverse_table = {}
        for name, val in self.table.items():
            s = self.group.gen(name)
            si = s.inverse()
            # 0 = d(s s^-1) = d(s) s^-1 + (-1)^|s| s d(s^-1)
            self._inverse_table[name] = (si * val * si).scale(-grading.sign(s))

    def word_value(self, word) -> AlgebraElement:
        """d of the product of ``word``, folding the Leibniz rule letter by letter."""
        acc = self.group.identity()
        value = AlgebraElement(self.group)
        for name, exp in word:
            letter = self.group.gen(name) if exp > 0 else self.group.gen(name).inverse()
            d_letter = self.table[name] if exp > 0 else self._inverse_table[name]
            for _ in range(abs(exp)):
                value = value * letter + (acc * d_letter).scale(self.grading.sign(acc))
                acc = acc * letter
        return value

    def _basis(self, g):
        return self.word_value(g.word())

    def __str__(self):
        return "table{" + ", ".join(f"{n}: {v}" for n, v in self.table.items()) + "}"


class BasisMap(Derivation):
    """An arbitrary linear operator given by a Python function on basis elements.

    Nothing about it is assumed; it exists so that non-derivations (for example
    g -> g x) can be fed to the same checks.
    """

    kind = "basis-map"

    def __init__(self, grading: Grading, fn: Callable, label: str = "basis-map"):
        super().__init__(grading)
        self.fn = fn
        self.label = label

    def _basis(self, g):
        val = self.fn(g)
        if isinstance(val, GroupElement):
            val = AlgebraElement.basis(val)
        return val

    def __str__(self):
        return self.label


def right_multiplication(grading: Grading, s: GroupElement) -> BasisMap:
    """g -> g s (not a derivation unless trivial)."""
    return BasisMap(grading, lambda g: g * s, f"multiply {s}")


class LinearCombination(Derivation):
    kind = "lincomb"

    def __init__(self, grading: Grading, terms):
        super().__init__(grading)
        self.terms = [(GaussianRational.coerce(c), d) for c, d in terms]

    def _basis(self, g):
        parts = []
        for c, d in self.terms:
            parts.extend((h, c * v) for h, v in d.column(g).terms.items())
        return AlgebraElement(self.group, parts)

    def __str__(self):
        return "lincomb [" + ", ".join(f"{c}*({d})" for c, d in self.terms) + "]"


class Commutator(Derivation):
    """[d1, d2] = d1 d2 - d2 d1 (plain composition difference)."""

    kind = "commutator"

    def __init__(self, d1: Derivation, d2: Derivation):
        super().__init__(d1.grading)
        self.d1 = d1
        self.d2 = d2

    def _basis(self, g):
        return self.d1.apply(self.d2.column(g)) - self.d2.apply(self.d1.column(g))

    def __str__(self):
        return f"[{self.d1}, {self.d2}]"


class CharacterDerivation(Derivation):
    """d(g) = (-1)^|g| g * sum_t chi((-1)^|g| g t, g) t, reading chi's column support."""

    kind = "character"

    def __init__(self, character):
        super().__init__(character.grading)
        self.character = character

    def _basis(self, g):
        from .groupoid import Morphism, SignedElement

        sg = self.grading.sign(g)
        gi = g.inverse()
        terms = []
        for h in self.character.column(g).terms:
            t = gi * h
            u = SignedElement(g * t, sg)
            coeff = self.character.evaluate(Morphism(u, SignedElement(g)))
            terms.append((g * t, coeff * sg))
        return AlgebraElement(self.group, terms)

    def __str__(self):
        return f"from-character({self.character})"


def apply(d: Derivation, a) -> AlgebraElement:
    return d.apply(a)


def commutator(d1: Derivation, d2: Derivation) -> Commutator:
    return Commutator(d1, d2)


def check_graded_leibniz(d: Derivation, w: Window, cap: int | None = None, seed: int = 0,
                         max_counterexamples: int = 10) -> Report:
    """d(uv) = d(u) v + (-1)^|u| u d(v) on every pair of window basis elements."""
    pairs = [(u, v) for u in w for v in w]
    pairs, fraction = limit(pairs, cap, seed)
    bad = []
    n_bad = 0
    gr = d.grading
    for u, v in pairs:
        lhs = d.column(u * v)
        rhs = d.column(u) * v + (u * d.column(v)).scale(gr.sign(u))
        if lhs != rhs:
            n_bad += 1
            if len(bad) < max_counterexamples:
                bad.append({"pair": (u, v), "lhs": lhs, "rhs": rhs})
    details = {"derivation": str(d), "pairs_checked": len(pairs), "sampling_fraction": fraction,
               "failing_pairs": n_bad}
    return Report("leibniz", n_bad == 0, bad, details)


def leibniz_extend(grading: Grading, table: dict, w: Window | None = None):
    """Extend a generator table; returns ``(derivation, report)``.

    The report checks that every defining relator is sent to 0 (the condition
    for the extension from the free group to descend to G) and, when a window
    is given, the graded Leibniz rule on all window pairs.
    """
    d = TableDerivation(grading, table)
    violated = []
    for rel in grading.group.relators():
        val = d.word_value(rel)
        if val:
            violated.append({"relator": format_word(rel), "d_relator": val})
    details = {"relators_checked": len(grading.group.relators())}
    passed = not violated
    counter = list(violated)
    if w is not None:
        lr = check_graded_leibniz(d, w)
        details["leibniz"] = lr.details
        passed = passed and lr.passed
        counter.extend(lr.counterexamples)
    return d, Report("table-consistency", passed, counter, details)


def is_quasi_inner(d: Derivation, w: Window) -> Report:
    """Quasi-inner means the character of ``d`` vanishes on every loop."""
    from .characters import character_of_derivation, is_trivial_on_loops

    report = is_trivial_on_loops(character_of_derivation(d), w)
    report.check = "quasi-inner"
    return report


def check_ideal_property(d: Derivation, w: Window, elements=None) -> Report:
    """For loop-trivial ``d``: the bracket with every inner character stays loop-trivial."""
    from .characters import InnerCharacter, bracket, character_of_derivation, is_trivial_on_loops

    chi = character_of_derivation(d)
    base = is_trivial_on_loops(chi, w)
    if not base.passed:
        raise PreconditionError("the derivation is not quasi-inner on this window")
    elements = list(w) if elements is None else list(elements)
    bad = []
    for a in elements:
        r = is_trivial_on_loops(bracket(chi, InnerCharacter(d.grading, a)), w)
        if not r.passed:
            bad.append({"a": a, "nonzero_loops": r.counterexamples[:3]})
    return Report("ideal", not bad, bad, {"elements": len(elements), "derivation": str(d)})
