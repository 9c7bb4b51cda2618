"""DG-algebra structures on graded group algebras.

``check_dg`` squares the operator exactly (columns are finite) and checks
the degree shift; ``check_iso`` tests the conjugation identity
``sum_h c_h^g chi2(x, h) = sum_h chi1(h, g) c_x^h`` for an algebra
automorphism ``f(g) = sum_h c_h^g h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraElement, Grading, validate_grading
from .characters import Character, character_of_derivation, check_additivity
from .coefficients import ONE, ZERO, GaussianRational
from .derivations import (
    CentralDerivation,
    Derivation,
    GradedGroupCharacter,
    InnerDerivation,
    ParityTau,
    TableTau,
    check_graded_leibniz,
    validate_tau,
)
from .groupoid import Morphism, SignedElement
from .groups import (
    DirectProduct,
    Group,
    GroupElement,
    GroupMap,
    Heisenberg,
    Integers,
    Symmetric,
    Window,
    enumerate_window,
    is_central,
    validate_group_map,
)
from .reports import PreconditionError, Report

MODES = {"cochain": 1, "chain": -1}


def _shift(mode: str) -> int:
    try:
        return MODES[mode]
    except KeyError:
        raise PreconditionError(f"mode must be 'cochain' or 'chain', got {mode!r}") from None


@dataclass
class DGReport(Report):
    square_zero: Report | None = None
    degree_shift: Report | None = None
    mode: str = "cochain"
    window_size: int = 0

    def to_dict(self):
        out = super().to_dict()
        out["mode"] = self.mode
        out["window_size"] = self.window_size
        out["square_zero"] = self.square_zero.to_dict()
        out["degree_shift"] = self.degree_shift.to_dict()
        return out


def check_dg(d: Derivation, gr: Grading | None = None, mode: str = "cochain", w: Window | None = None,
             max_counterexamples: int = 10) -> DGReport:
    """d(d(g)) = 0 and deg h = deg g + shift for every nonzero chi(h, g), over window columns."""
    if w is None:
        raise PreconditionError("check_dg needs a window")
    gr = d.grading if gr is None else gr
    shift = _shift(mode)
    sq_bad = []
    deg_bad = []
    for g in w:
        dg = d.column(g)
        ddg = d.apply(dg)
        if ddg and len(sq_bad) < max_counterexamples:
            h = ddg.support()[0]
            sq_bad.append({"g": g, "d2": ddg, "element": h, "coefficient": ddg.coefficient(h)})
        want = gr.degree(g) + shift
        for h in dg.support():
            if gr.degree(h) != want and len(deg_bad) < max_counterexamples:
                deg_bad.append({"h": h, "g": g, "deg_h": gr.degree(h), "deg_g": gr.degree(g)})
    sq = Report("square-zero", not sq_bad, sq_bad, {"columns": len(w)})
    ds = Report("degree-shift", not deg_bad, deg_bad, {"shift": shift})
    return DGReport(
        check="dg",
        passed=sq.passed and ds.passed,
        counterexamples=sq_bad + deg_bad,
        details={"derivation": str(d), "mode": mode, "window": len(w)},
        square_zero=sq,
        degree_shift=ds,
        mode=mode,
        window_size=len(w),
    )


def central_dg_criterion(z: GroupElement, tau: GradedGroupCharacter, gr: Grading, w: Window,
                         mode: str = "cochain") -> Report:
    """tau(g) tau(g z) = 0 on the window, cross-checked against :func:`check_dg`."""
    shift = _shift(mode)
    if gr.degree(z) != shift:
        raise PreconditionError(f"deg({z}) = {gr.degree(z)}, expected {shift}")
    d = CentralDerivation(gr, z, tau, w)
    bad = []
    for g in w:
        prod = tau(g) * tau(g * z)
        if prod:
            bad.append({"g": g, "tau_g": tau(g), "tau_gz": tau(g * z)})
    dg = check_dg(d, gr, mode, w)
    criterion = not bad
    details = {
        "z": z,
        "tau": str(tau),
        "criterion": "pass" if criterion else "fail",
        "check_dg": dg.status,
        "agree": criterion == dg.passed,
    }
    return Report("central-dg-criterion", criterion, bad, details)


# -- algebra automorphisms ----------------------------------------------------

class AlgebraAutomorphism:
    """f(g) = sum_h c_h^g h on basis elements, extended linearly."""

    form = "abstract"

    def __init__(self, grading: Grading):
        self.grading = grading
        self.group = grading.group

    def column(self, g: GroupElement) -> AlgebraElement:
        raise NotImplementedError

    def apply(self, a) -> AlgebraElement:
        if isinstance(a, GroupElement):
            return self.column(a)
        terms = []
        for g, c in a.terms.items():
            terms.extend((h, c * v) for h, v in self.column(g).terms.items())
        return AlgebraElement(self.group, terms)

    __call__ = apply

    def inverse(self, w: Window | None = None) -> "AlgebraAutomorphism":
        raise NotImplementedError


class GroupTransport(AlgebraAutomorphism):
    form = "group-automorphism"

    def __init__(self, grading: Grading, f: GroupMap, inverse_map: GroupMap | None = None):
        super().__init__(grading)
        if f.kind != "automorphism":
            raise PreconditionError("transport needs a map declared as an automorphism")
        self.map = f
        self.inverse_map = inverse_map

    def column(self, g):
        return AlgebraElement.basis(self.map(g))

    def inverse(self, w=None):
        inv = self.inverse_map
        if inv is None:
            if w is None:
                raise PreconditionError("a search window is needed to invert the group map")
            inv = self.map.inverse(w)
        return GroupTransport(self.grading, inv, self.map)

    def __str__(self):
        return f"transport {self.map!r}"


class DiagonalScaling(AlgebraAutomorphism):
    """g -> lam^deg(g) g."""

    form = "scaling"

    def __init__(self, grading: Grading, lam):
        super().__init__(grading)
        self.lam = GaussianRational.coerce(lam)
        if not self.lam:
            raise PreconditionError("scaling factor must be nonzero")

    def column(self, g):
        return AlgebraElement.basis(g, self.lam ** self.grading.degree(g))

    def inverse(self, w=None):
        return DiagonalScaling(self.grading, ONE / self.lam)

    def __str__(self):
        return f"scaling({self.lam})"


class WindowMatrix(AlgebraAutomorphism):
    """Explicit columns c^g on a finite set of basis elements."""

    form = "matrix"

    def __init__(self, grading: Grading, columns: dict):
        super().__init__(grading)
        self.columns = dict(columns)

    def column(self, g):
        try:
            return self.columns[g]
        except KeyError:
            raise PreconditionError(f"matrix has no column for {g}") from None

    def __str__(self):
        return f"matrix[{len(self.columns)} columns]"


def validate_automorphism(f: AlgebraAutomorphism, w: Window) -> Report:
    """Multiplicative and degree preserving on window pairs (columns known to the map)."""
    gr = f.grading
    bad = []
    known = [g for g in w if not isinstance(f, WindowMatrix) or g in f.columns]
    for g in known:
        img = f.column(g)
        if not img:
            bad.append({"zero_image": g})
        if any(gr.degree(h) != gr.degree(g) for h in img.terms):
            bad.append({"degree_not_preserved": g, "image": img})
    pairs = 0
    for g in known:
        for h in known:
            if isinstance(f, WindowMatrix) and (g * h) not in f.columns:
                continue
            pairs += 1
            if f.column(g * h) != f.column(g) * f.column(h):
                bad.append({"not_multiplicative": (g, h)})
                if len(bad) > 20:
                    break
    details = {"form": f.form, "pairs_checked": pairs}
    if isinstance(f, GroupTransport):
        gm = validate_group_map(f.map, w)
        details["group_map"] = gm.to_dict()
        if not gm.passed:
            bad.extend(gm.counterexamples)
    return Report("automorphism", not bad, bad, details)


def check_iso(d1: Derivation, d2: Derivation, f: AlgebraAutomorphism, w: Window,
              max_counterexamples: int = 10) -> Report:
    """Is ``f`` an isomorphism of DG structures (Q(i)[G], d1) -> (Q(i)[G], d2) on the window?

    The conjugation identity is evaluated through the characters; the
    operator identity f(d1(g)) = d2(f(g)) is computed independently and the
    report says whether the two routes agree and which side differs.
    """
    audit = validate_automorphism(f, w)
    if not audit.passed:
        raise PreconditionError(f"not a graded algebra automorphism on the window: {audit.counterexamples[0]}")
    chi1 = character_of_derivation(d1)
    chi2 = character_of_derivation(d2)
    bad = []
    routes_disagree = []
    for g in w:
        cg = f.column(g)
        col1 = chi1.column(g)
        candidates = set()
        for h in cg.terms:
            candidates.update(chi2.column(h).terms)
        for h in col1.terms:
            candidates.update(f.column(h).terms)
        sg = SignedElement(g)
        eq_ok = True
        for x in sorted(candidates, key=GroupElement.sort_key):
            sx = SignedElement(x)
            lhs = ZERO
            for h, c in cg.terms.items():
                lhs = lhs + c * chi2.evaluate(Morphism(sx, SignedElement(h)))
            rhs = ZERO
            for h, c in col1.terms.items():
                rhs = rhs + chi1.evaluate(Morphism(SignedElement(h), sg)) * f.column(h).coefficient(x)
            if lhs != rhs:
                eq_ok = False
                if len(bad) < max_counterexamples:
                    bad.append({"g": g, "x": x, "conjugation_lhs": lhs, "conjugation_rhs": rhs})
        f_d1 = f.apply(d1.column(g))
        d2_f = d2.apply(cg)
        if (f_d1 == d2_f) != eq_ok:
            routes_disagree.append(g)
        if f_d1 != d2_f and len(bad) < max_counterexamples:
            bad.append({"g": g, "f(d1(g))": f_d1, "d2(f(g))": d2_f})
    details = {
        "automorphism": str(f),
        "d1": str(d1),
        "d2": str(d2),
        "window": len(w),
        "routes_agree": not routes_disagree,
    }
    return Report("iso", not bad, bad, details)


class TransportedCharacter(Character):
    """chi'(h, g) = chi(f(h), f(g)) for a group automorphism f."""

    def __init__(self, chi: Character, f: GroupMap, inverse_map: GroupMap):
        super().__init__(chi.grading)
        self.chi = chi
        self.map = f
        self.inverse_map = inverse_map

    def evaluate(self, m):
        self._check(m)
        u = SignedElement(self.map(m.u.element), m.u.sign)
        v = SignedElement(self.map(m.v.element))
        return self.chi.evaluate(Morphism(u, v))

    def _column(self, g):
        fg = self.map(g)
        terms = [(self.inverse_map(k), c) for k, c in self.chi.column(fg).terms.items()]
        return AlgebraElement(self.group, terms)

    def __str__(self):
        return f"transport({self.chi})"


def transport_character(chi: Character, f: GroupMap, w: Window, inverse_map: GroupMap | None = None,
                        search_length: int = 3) -> TransportedCharacter:
    """Pull ``chi`` back along ``f``; the result is the character of the isomorphic structure."""
    gr = chi.grading
    if f.kind != "automorphism":
        raise PreconditionError("transport needs an automorphism")
    report = validate_group_map(f, w)
    if not report.passed:
        raise PreconditionError(f"invalid automorphism: {report.counterexamples[0]}")
    for s in f.domain.generators():
        if gr.degree(f(s)) != gr.degree(s):
            raise PreconditionError(f"automorphism changes the degree of {s}")
    if inverse_map is None:
        inverse_map = f.inverse(enumerate_window(f.domain, search_length))
    return TransportedCharacter(chi, f, inverse_map)


# -- demonstrations -----------------------------------------------------------

@dataclass
class DemoBundle:
    name: str
    group: Group
    grading: Grading
    derivation: Derivation | None
    window: Window
    reports: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Every report came out as documented (``expected`` defaults to pass)."""
        return all(r.passed == self.expected.get(k, True) for k, r in self.reports.items())

    def to_dict(self):
        return {
            "demo": self.name,
            "status": "pass" if self.passed else "fail",
            "group": self.group.to_dict(),
            "grading": self.grading.to_dict(),
            "derivation": None if self.derivation is None else str(self.derivation),
            "window": self.window.summary(),
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
            "expected": {k: ("pass" if self.expected.get(k, True) else "fail") for k in self.reports},
        }


def demo_integers_dg(length: int = 6) -> DemoBundle:
    """Q(i)[Z], deg x = 1, central derivation d(x^k) = (k mod 2) x^(k+1)."""
    Z = Integers()
    gr = Grading(Z, {"x": 1})
    w = enumerate_window(Z, length)
    x = Z.gen("x")
    tau = ParityTau(gr, 1)
    d = CentralDerivation(gr, x, tau)
    reports = {
        "dg": check_dg(d, gr, "cochain", w),
        "leibniz": check_graded_leibniz(d, w),
        "criterion": central_dg_criterion(x, tau, gr, w),
    }
    return DemoBundle("integers-dg", Z, gr, d, w, reports)


def demo_product_dg(H: Group | None = None, length: int = 2) -> DemoBundle:
    """Z x H with deg x = 1 and H in degree 0; central derivation along (x, e)."""
    H = Symmetric(3) if H is None else H
    if "x" in H.generator_names:
        raise PreconditionError("H must not use the generator name 'x'")
    G = DirectProduct([Integers(), H])
    gr = Grading(G, {"x": 1})
    w = enumerate_window(G, length)
    z = G.gen("x")
    tau = ParityTau(gr, 1)
    d = CentralDerivation(gr, z, tau)
    reports = {
        "grading": validate_grading(gr, w),
        "dg": check_dg(d, gr, "cochain", w),
        "leibniz": check_graded_leibniz(d, w),
        "criterion": central_dg_criterion(z, tau, gr, w),
    }
    return DemoBundle("product-dg", G, gr, d, w, reports)


def demo_inner_central_dg(a: GroupElement | None = None, grading: Grading | None = None,
                          length: int = 5) -> DemoBundle:
    """Inner derivation of a central element of degree 1 (default: x in Z with deg x = 1)."""
    if a is None:
        Z = Integers()
        a = Z.gen("x")
        grading = Grading(Z, {"x": 1})
    if grading is None:
        raise PreconditionError("a grading is required with a custom element")
    G = a.group
    if not is_central(a).central:
        raise PreconditionError(f"{a} is not central")
    if grading.degree(a) != 1:
        raise PreconditionError(f"deg({a}) must be 1")
    w = enumerate_window(G, length)
    d = InnerDerivation(grading, a)
    reports = {
        "dg": check_dg(d, grading, "cochain", w),
        "leibniz": check_graded_leibniz(d, w),
        "additivity": check_additivity(character_of_derivation(d), enumerate_window(G, min(length, 3))),
    }
    return DemoBundle("inner-central-dg", G, grading, d, w, reports)


def demo_heisenberg_grading_audit(length: int = 2) -> DemoBundle:
    """The degree map y^b z^c x^a -> c is not a homomorphism; deg x = 1 is."""
    H = Heisenberg()
    w = enumerate_window(H, length)
    claimed = Grading(H, {"z": 1}, strict=False)
    repaired = Grading(H, {"x": 1})
    reports = {
        "claimed-grading": validate_grading(claimed, w),
        "x-grading": validate_grading(repaired, w),
    }
    expected = {"claimed-grading": False, "x-grading": True}
    return DemoBundle("heisenberg-audit", H, claimed, None, w, reports, expected)


DEMOS = {
    "integers-dg": demo_integers_dg,
    "product-dg": demo_product_dg,
    "inner-central-dg": demo_inner_central_dg,
    "heisenberg-audit": demo_heisenberg_grading_audit,
}


def search_failing_tau_table(gr: Grading, z: GroupElement, w: Window, values=(-1, 0, 1)):
    """Exhaustive search over tau tables on ``w`` (values from ``values``) that pass the
    window-bounded character check yet violate tau(g) tau(gz) = 0 on the window.

    Returns the first such table in lexicographic order, or None.
    """
    import itertools

    elems = list(w)
    for combo in itertools.product(values, repeat=len(elems)):
        tau = TableTau(gr, dict(zip(elems, combo)))
        if not any(tau(g) * tau(g * z) for g in elems):
            continue
        if validate_tau(tau, gr, w).passed:
            return tau
    return None
