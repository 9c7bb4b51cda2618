"""Locally finite characters on the action groupoid.

A character is read through its columns: ``column(g)`` is the finite algebra
element ``sum_h chi(h, g) h`` over positive ``h``. Evaluation on a morphism
``(u, g)`` with signed ``u`` follows the sign rule chi(-h, g) = -chi(h, g).
Morphisms with negative ``v`` are rejected rather than given a guessed value.
"""

from __future__ import annotations

from .algebra import AlgebraElement, Grading
from .coefficients import ONE, ZERO, GaussianRational
from .derivations import CharacterDerivation, Derivation
from .groupoid import ActionGroupoid, Morphism, SignedElement, morphism
from .groups import GroupElement, Window
from .reports import Report, limit


class UnsupportedMorphism(ValueError):
    pass


class Character:
    def __init__(self, grading: Grading):
        self.grading = grading
        self.group = grading.group
        self._columns: dict = {}

    def _column(self, g: GroupElement) -> AlgebraElement:
        raise NotImplementedError

    def column(self, g: GroupElement) -> AlgebraElement:
        val = self._columns.get(g)
        if val is None:
            val = self._column(g)
            self._columns[g] = val
        return val

    def column_support(self, g: GroupElement) -> list:
        return self.column(g).support()

    def _check(self, m: Morphism):
        if m.v.sign != 1:
            raise UnsupportedMorphism(f"characters are only defined on positive-v morphisms, got {m}")

    def evaluate(self, m: Morphism) -> GaussianRational:
        self._check(m)
        c = self.column(m.v.element).coefficient(m.u.element)
        return c if m.u.sign == 1 else -c

    def __call__(self, u, v) -> GaussianRational:
        return self.evaluate(morphism(u, v))

    def __add__(self, other):
        return FormalSum(self.grading, [(ONE, self), (ONE, other)])

    def __sub__(self, other):
        return FormalSum(self.grading, [(ONE, self), (-ONE, other)])

    def __rmul__(self, c):
        return FormalSum(self.grading, [(GaussianRational.coerce(c), self)])

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class DerivationCharacter(Character):
    """chi(h, g) = coefficient of h in d(g)."""

    def __init__(self, d: Derivation):
        super().__init__(d.grading)
        self.derivation = d

    def _column(self, g):
        return self.derivation.column(g)

    def __str__(self):
        return f"chi[{self.derivation}]"


class InnerCharacter(Character):
    """Closed form of the inner character of ``a``: chi(phi) = F(t(phi)) - F(s(phi))
    with F the indicator of ``a`` minus the indicator of ``-a``.

    It is +1 on arrows into ``a``, -1 on arrows out of ``a``, 0 on loops, and
    odd under u -> -u; it coincides with the character of the inner
    derivation x -> a x - (-1)^|x| x a.
    """

    def __init__(self, grading: Grading, a):
        super().__init__(grading)
        self.a = SignedElement.coerce(a)
        self.groupoid = ActionGroupoid(grading)

    def _indicator(self, obj: SignedElement) -> int:
        if obj == self.a:
            return 1
        if obj == -self.a:
            return -1
        return 0

    def evaluate(self, m):
        self._check(m)
        gd = self.groupoid
        return GaussianRational(self._indicator(gd.target(m)) - self._indicator(gd.source(m)))

    def _column(self, g):
        a = self.a.element
        candidates = {a * g, g * a}
        terms = [(h, self.evaluate(Morphism(SignedElement(h), SignedElement(g)))) for h in candidates]
        return AlgebraElement(self.group, terms)

    def __str__(self):
        return f"chi^{self.a}"


class FormalSum(Character):
    def __init__(self, grading: Grading, terms):
        super().__init__(grading)
        self.terms = [(GaussianRational.coerce(c), chi) for c, chi in terms]

    def evaluate(self, m):
        self._check(m)
        total = ZERO
        for c, chi in self.terms:
            total = total + c * chi.evaluate(m)
        return total

    def _column(self, g):
        parts = []
        for c, chi in self.terms:
            parts.extend((h, c * v) for h, v in chi.column(g).terms.items())
        return AlgebraElement(self.group, parts)

    def __str__(self):
        return " + ".join(f"{c}*{chi}" for c, chi in self.terms) or "0"


class BracketCharacter(Character):
    """{chi1, chi2}(a, g) = sum_h chi1(a, h) chi2(h, g) - chi2(a, h) chi1(h, g).

    Each sum runs over the column support of the right-hand factor, which is
    finite, so the formula is evaluated exactly.
    """

    def __init__(self, chi1: Character, chi2: Character):
        super().__init__(chi1.grading)
        self.chi1 = chi1
        self.chi2 = chi2

    def evaluate(self, m):
        self._check(m)
        a, g = m.u, m.v
        total = ZERO
        for h, c2 in self.chi2.column(g.element).terms.items():
            total = total + self.chi1.evaluate(Morphism(a, SignedElement(h))) * c2
        for h, c1 in self.chi1.column(g.element).terms.items():
            total = total - self.chi2.evaluate(Morphism(a, SignedElement(h))) * c1
        return total

    def _column(self, g):
        candidates = set()
        for h in self.chi2.column(g).terms:
            candidates.update(self.chi1.column(h).terms)
        for h in self.chi1.column(g).terms:
            candidates.update(self.chi2.column(h).terms)
        sg = SignedElement(g)
        terms = [(a, self.evaluate(Morphism(SignedElement(a), sg))) for a in candidates]
        return AlgebraElement(self.group, terms)

    def __str__(self):
        return f"{{{self.chi1}, {self.chi2}}}"


class TableCharacter(Character):
    """Explicit columns, falling back to another character (or zero) elsewhere."""

    def __init__(self, grading: Grading, columns: dict, fallback: Character | None = None):
        super().__init__(grading)
        self.columns = dict(columns)
        self.fallback = fallback

    def _column(self, g):
        if g in self.columns:
            return self.columns[g]
        if self.fallback is not None:
            return self.fallback.column(g)
        return AlgebraElement(self.group)

    def __str__(self):
        return f"table[{len(self.columns)} columns]"


def character_of_derivation(d: Derivation) -> DerivationCharacter:
    return DerivationCharacter(d)


def derivation_of_character(chi: Character) -> CharacterDerivation:
    return CharacterDerivation(chi)


def bracket(chi1: Character, chi2: Character) -> BracketCharacter:
    return BracketCharacter(chi1, chi2)


def evaluate(chi: Character, m: Morphism) -> GaussianRational:
    return chi.evaluate(m)


def check_additivity(chi: Character, w: Window, cap: int | None = None, seed: int = 0,
                     max_counterexamples: int = 10) -> Report:
    """chi(psi o phi) = chi(psi) + chi(phi) over composable window pairs."""
    gd = ActionGroupoid(chi.grading)
    mors = gd.morphisms(w)
    by_source: dict = {}
    for m in mors:
        by_source.setdefault(gd.source(m), []).append(m)
    pairs = [(m1, m2) for m1 in mors for m2 in by_source.get(gd.target(m1), ())]
    pairs, fraction = limit(pairs, cap, seed)
    bad = []
    n_bad = 0
    for m1, m2 in pairs:
        c = gd._compose(m2, m1)
        lhs = chi.evaluate(c)
        rhs = chi.evaluate(m2) + chi.evaluate(m1)
        if lhs != rhs:
            n_bad += 1
            if len(bad) < max_counterexamples:
                bad.append({"psi": m2, "phi": m1, "composite": c, "chi_composite": lhs, "chi_sum": rhs})
    details = {"character": str(chi), "composable_pairs": len(pairs), "sampling_fraction": fraction,
               "failing_pairs": n_bad}
    return Report("additivity", n_bad == 0, bad, details)


def is_trivial_on_loops(chi: Character, w: Window, max_counterexamples: int = 10) -> Report:
    gd = ActionGroupoid(chi.grading)
    bad = []
    n_loops = 0
    n_bad = 0
    for a in gd.objects(w):
        for m in gd.loops_at(a, w):
            n_loops += 1
            val = chi.evaluate(m)
            if val:
                n_bad += 1
                if len(bad) < max_counterexamples:
                    bad.append({"loop": m, "at": a, "value": val})
    details = {"character": str(chi), "loops_checked": n_loops, "nonzero_loops": n_bad}
    return Report("loops", n_bad == 0, bad, details)


def char_table(chi: Character, w: Window) -> dict:
    """Windowed matrix: rows ``u`` (positive), columns ``v``, exact values."""
    rows = list(w)
    return {
        "rows": [str(u) for u in rows],
        "columns": [str(v) for v in rows],
        "values": [[str(chi(u, v)) for v in rows] for u in rows],
    }
