from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from graded_derivations.algebra import (
    AlgebraElement,
    Grading,
    alg_add,
    alg_mul,
    alg_scale,
    degree,
    homogeneous_components,
    is_homogeneous,
    parity,
    validate_grading,
)
from graded_derivations.coefficients import ONE, GaussianRational
from graded_derivations.groups import DirectProduct, Heisenberg, Integers, Symmetric, enumerate_window
from graded_derivations.reports import GroupMismatch, ParseError, PreconditionError

H = Heisenberg()
WH = list(enumerate_window(H, 1))

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
gauss = st.builds(GaussianRational, fractions, fractions)


def elements(group, pool):
    return st.lists(st.tuples(st.sampled_from(pool), gauss), max_size=4).map(lambda t: AlgebraElement(group, t))


h_elems = elements(H, WH)


# -- coefficients ----------------------------------------------------------------

@given(gauss, gauss, gauss)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_gaussian_str_roundtrip(a):
    assert GaussianRational.parse(str(a)) == a


def test_gaussian_rendering():
    assert str(GaussianRational(Fraction(3, 2), Fraction(1, 2))) == "3/2+1/2i"
    assert str(GaussianRational(0, 2)) == "2i"
    assert str(GaussianRational(Fraction(-1, 2))) == "-1/2"
    assert GaussianRational.parse("i") == GaussianRational(0, 1)
    assert Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2)
    assert GaussianRational.parse("1/3") + GaussianRational.parse("1/6") == GaussianRational.parse("1/2")


# -- algebra ---------------------------------------------------------------------

def test_convolution_examples():
    Z = Integers()
    x = Z.gen("x")
    a = AlgebraElement(Z, [(x, 1), (x.inverse(), 1)])
    assert a * x == AlgebraElement(Z, [(x ** 2, 1), (Z.identity(), 1)])
    assert alg_scale(a, 0).support() == []
    hx, hy = H.gen("x"), H.gen("y")
    prod = alg_mul(AlgebraElement.basis(hx), AlgebraElement.basis(hy))
    assert prod.items() == [(hx * hy, ONE)] and str(prod) == "y*z*x"


def test_zero_pruning():
    Z = Integers()
    x = Z.gen("x")
    a = AlgebraElement(Z, [(x, 1), (x, -1)])
    assert a == 0 and a.support() == []
    assert alg_add(AlgebraElement.basis(x), -AlgebraElement.basis(x)).terms == {}


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        AlgebraElement.basis(Integers().gen("x")) + AlgebraElement.basis(H.gen("x"))


@given(h_elems, h_elems, h_elems)
def test_ring_axioms(a, b, c):
    e = AlgebraElement.basis(H.identity())
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * e == a == e * a
    assert a + b == b + a


@given(h_elems)
def test_literal_roundtrip(a):
    assert AlgebraElement.parse(str(a), H) == a


def test_literal_syntax():
    Z = Integers()
    a = AlgebraElement.parse("2*x^2 - 1/2*x^-1 + (1+1/3i)*e", Z)
    assert a.coefficient(Z.gen("x") ** 2) == GaussianRational(2)
    assert a.coefficient(Z.identity()) == GaussianRational(1, Fraction(1, 3))
    assert str(a) == "(1+1/3i) - 1/2*x^-1 + 2*x^2"
    assert AlgebraElement.parse("0", Z) == 0


@pytest.mark.parametrize("text", ["x^", "2*", "x +", "(1/2", "q", "x y"])
def test_literal_errors(text):
    with pytest.raises(ParseError) as exc:
        AlgebraElement.parse(text, Integers())
    assert exc.value.column is not None


# -- gradings ---------------------------------------------------------------------

def test_degree_examples():
    Z = Integers()
    gr = Grading(Z, {"x": 1})
    x = Z.gen("x")
    assert degree(x ** -3, gr) == -3 and parity(x ** -3, gr) == 1
    triv = Grading.trivial(Z)
    assert all(triv.degree(g) == 0 and triv.parity(g) == 0 for g in enumerate_window(Z, 3))
    P = DirectProduct([Integers(), Symmetric(3)])
    gp = Grading(P, {"x": 1})
    assert gp.degree(P.pair(Z.gen("x") ** 2, P.factors[1].transposition(1, 2))) == 2


def test_validate_grading_examples():
    Z = Integers()
    assert validate_grading(Grading(Z, {"x": 1}), enumerate_window(Z, 3)).passed
    w = enumerate_window(H, 2)
    assert validate_grading(Grading(H, {"x": 1}), w).passed
    bad = validate_grading(Grading(H, {"z": 1}, strict=False), w)
    assert not bad.passed
    first = bad.counterexamples[0]
    assert [str(g) for g in first["pair"]] == ["x", "y"]
    assert first["deg_product"] == 1 and first["deg_sum"] == 0
    assert bad.details["violated_relators"] == [{"relator": "z^-1*x*y*x^-1*y^-1", "degree": -1}]


def test_strict_grading_rejects_invalid():
    with pytest.raises(PreconditionError):
        Grading(H, {"z": 1})


@pytest.mark.parametrize("degs", [{"x": 1}, {"y": 2}, {"x": 1, "y": -3}])
def test_grading_homomorphism(degs):
    gr = Grading(H, degs)
    w = enumerate_window(H, 2)
    for g in w:
        assert gr.degree(g.inverse()) == -gr.degree(g)
        for h in w:
            assert gr.degree(g * h) == gr.degree(g) + gr.degree(h)
    assert gr.degree(H.identity()) == 0


def test_homogeneous_components():
    Z = Integers()
    gr = Grading(Z, {"x": 1})
    a = AlgebraElement.parse("x + x^2", Z)
    parts = homogeneous_components(a, gr)
    assert {k: str(v) for k, v in parts.items()} == {1: "x", 2: "x^2"}
    assert homogeneous_components(AlgebraElement(Z), gr) == {}
    b = AlgebraElement.parse("1 + 2*x + 3*x^-1", Z)
    assert {k: str(v) for k, v in homogeneous_components(b, gr).items()} == {-1: "3*x^-1", 0: "1", 1: "2*x"}


@given(h_elems, h_elems)
def test_product_of_homogeneous_parts(a, b):
    gr = Grading(H, {"x": 1})
    for i, pa in homogeneous_components(a, gr).items():
        for j, pb in homogeneous_components(b, gr).items():
            prod = pa * pb
            assert is_homogeneous(prod, gr)
            assert all(gr.degree(g) == i + j for g in prod.terms)
