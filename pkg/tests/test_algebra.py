"""Exact arithmetic: rationals, factored rational functions, series, residues."""

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from refined_tr.algebra import FR, INF, AtomMonomial, Point, Poly, Q, antiderivative, limit_at, parse_rational, rational_str, residue_at, series_at
from refined_tr.algebra.atoms import L, make_atom
from refined_tr.algebra.hbar import HbarSeries, MassFunction, SymbolicScalar, hbar_compose_shift
from refined_tr.algebra.series import poles_in

z = sp.Symbol("z")
ROOTS = [Q(0), Q(1), Q(-1), Q(2), Q(1, 2), Q(-3, 2)]

small_q = st.builds(Q, st.integers(-9, 9), st.integers(1, 6))


@st.composite
def one_var(draw):
    """Random ``p(z) / prod (z - c)^k`` with atoms from a fixed root set."""
    deg = draw(st.integers(0, 5))
    coeffs = draw(st.lists(small_q, min_size=deg + 1, max_size=deg + 1))
    num = Poly.from_dict({(i,): c for i, c in enumerate(coeffs)})
    roots = draw(st.lists(st.sampled_from(ROOTS), min_size=0, max_size=3, unique=True))
    den = {L(0, r): draw(st.integers(1, 3)) for r in roots}
    return FR(num, den)


def to_sympy(f):
    num = sum(sp.Rational(int(c.numerator), int(c.denominator)) * z ** e[0] for e, c in f.num.to_dict().items())
    den = sp.Integer(1)
    for (kind, i, c), k in f.den.items():
        den *= (z - sp.Rational(int(c.numerator), int(c.denominator))) ** k
    return num / den


def sq(c):
    return sp.Rational(int(c.numerator), int(c.denominator))


# ---------------------------------------------------------------- rationals


def test_parse_rational_forms():
    assert parse_rational("3/6") == Q(1, 2)
    assert parse_rational(" -4 ") == Q(-4)
    assert rational_str(Q(-6, 4)) == "-3/2"


@pytest.mark.parametrize("bad", ["1/0", "0.5", "1e3", "", "a/b", "1/2/3"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(small_q, small_q)
def test_rational_str_roundtrip(a, b):
    assert parse_rational(rational_str(a - b)) == a - b


# ---------------------------------------------------------------- FR arithmetic


@given(one_var(), one_var(), one_var())
@settings(max_examples=60, deadline=None)
def test_fr_ring_laws(a, b, c):
    assert (a + b) - b == a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


atom_monos = st.builds(
    lambda c, pw: FR.from_atoms(AtomMonomial(c, {L(0, r): k for r, k in pw.items()})),
    small_q.filter(bool),
    st.dictionaries(st.sampled_from(ROOTS), st.integers(-3, 3).filter(bool), max_size=3),
)


@given(one_var(), atom_monos)
@settings(max_examples=60, deadline=None)
def test_fr_division(a, b):
    # denominators stay on the atom set, so divisors are atom monomials
    assert (a * b) / b == a
    assert (a / b) * b == a


@given(one_var())
@settings(max_examples=40, deadline=None)
def test_fr_matches_sympy_pointwise(f):
    for x0 in (Q(7, 3), Q(-5, 11)):
        assert sq(f.evaluate({0: x0})) == to_sympy(f).subs(z, sq(x0))


def test_derivative_against_sympy():
    f = FR(Poly.from_dict({(2,): 1, (0,): 1}), {L(0, 0): 1, L(0, 1): 1, L(0, -1): 1})
    expect = sp.diff((z**2 + 1) / (z * (z**2 - 1)), z)
    for x0 in (3, Q(-2, 7)):
        assert sq(f.diff(0).evaluate({0: Q(x0)})) == expect.subs(z, sq(Q(x0)))


def test_scale_vars_homogeneous():
    f = FR(Poly.from_dict({(1, 1): 1}), {("S", 0, 1): 2, L(0): 1})
    g = f.scale_vars(Q(3), [0, 1])
    assert g.evaluate({0: Q(1), 1: Q(2)}) == f.evaluate({0: Q(3), 1: Q(6)})


# ---------------------------------------------------------------- residues and series


def test_residue_dz_over_z():
    assert residue_at(FR.var(0, -1), 0, Point.const(0)).const_value() == 1


def test_residue_whittaker_ydx():
    m = Q(7)
    f = FR(Poly.from_dict({(2,): m / 2, (1,): m, (0,): m / 2}), {L(0): 2})
    assert residue_at(f, 0, Point.const(0)).const_value() == m


def test_residue_parametric_order_two():
    # dz / ((z w - 1)^2 z) at z = 1/w; expanding at z = 1/w + u gives 1/(w u^2) - 1/u
    f = FR.from_atoms(make_atom("P", 0, 1) ** -2 * AtomMonomial.of(L(0), -1))
    r = residue_at(f, 0, Point("inv", 1))
    assert r.normalize() == FR.const(-1)
    w = sp.Symbol("w")
    assert sp.residue(1 / ((z * w - 1) ** 2 * z), z, 1 / w) == -1


def test_residue_at_infinity_convention():
    assert residue_at(FR.var(0, -1), 0, INF).const_value() == -1


def test_geometric_series():
    f = FR.from_atoms(AtomMonomial(-1, {L(0, 1): -1}))
    ser = series_at(f, 0, Point.const(0), 3)
    assert [ser.coeff(e).const_value() for e in range(4)] == [1, 1, 1, 1]


def test_series_simple_monomial():
    ser = series_at(FR.var(0, -2), 0, Point.const(0), 0)
    assert ser.val == -2 and ser.coeff(-2).const_value() == 1
    assert ser.coeff(-1).is_zero() and ser.coeff(0).is_zero()


def test_series_against_sympy_division():
    f = FR(Poly.from_dict({(2,): 1, (0,): 1}), {L(0, 0): 1, L(0, 1): 1, L(0, -1): 1})
    ser = series_at(f, 0, Point.const(1), 1)
    u = sp.Symbol("u")
    expect = sp.series(((1 + u) ** 2 + 1) / ((1 + u) * ((1 + u) ** 2 - 1)), u, 0, 2).removeO()
    for e in (-1, 0, 1):
        assert sq(ser.coeff(e).const_value()) == expect.coeff(u, e)


@given(one_var())
@settings(max_examples=60, deadline=None)
def test_residue_is_series_coefficient(f):
    for pt in poles_in(f, 0):
        assert residue_at(f, 0, pt) == series_at(f, 0, pt, -1).coeff(-1)


@given(one_var())
@settings(max_examples=60, deadline=None)
def test_global_residue_theorem(f):
    total = sum((residue_at(f, 0, pt).const_value() for pt in poles_in(f, 0) + [INF]), Q(0))
    assert total == 0


@given(one_var())
@settings(max_examples=60, deadline=None)
def test_residues_match_sympy(f):
    expr = to_sympy(f)
    for pt in poles_in(f, 0):
        assert sq(residue_at(f, 0, pt).const_value()) == sp.residue(expr, z, sq(pt.value))


@given(one_var())
@settings(max_examples=60, deadline=None)
def test_antiderivative_inverts_d(f):
    rat, logs = antiderivative(f, 0)
    back = rat.diff(0)
    for c, atom in logs:
        back = back + c * FR.from_atoms(AtomMonomial.of(atom, -1))
    assert back == f


def test_antiderivative_examples():
    rat, logs = antiderivative(FR.var(0, -2), 0)
    assert rat == FR.var(0, -1, -1) and logs == []
    rat, logs = antiderivative(FR.var(0, -1), 0)
    assert rat.is_zero() and logs == [(FR.const(1), L(0))]


def test_limits_at_infinity():
    assert limit_at(FR.from_atoms(AtomMonomial(1, {L(0, -1): -1})), 0, INF).is_zero()
    f = FR(Poly.var(0), {L(0, 1): 1})
    assert limit_at(f, 0, INF).const_value() == 1


# ---------------------------------------------------------------- hbar series

coeff_maps = st.dictionaries(st.integers(-2, 5), small_q, max_size=5)


@given(coeff_maps, coeff_maps, coeff_maps, st.integers(2, 6))
@settings(max_examples=80, deadline=None)
def test_hbar_ring_laws(a, b, c, order):
    A, B, C = (HbarSeries(order, x) for x in (a, b, c))
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A


@given(coeff_maps, coeff_maps, st.integers(3, 7), st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_truncation_commutes(a, b, order, drop):
    A, B = HbarSeries(order, a), HbarSeries(order, b)
    k = order - drop
    assert (A + B).truncate(k) == A.truncate(k) + B.truncate(k)
    lo = (A * B).order
    assert (A * B).truncate(min(k, lo)) == (A.truncate(k) * B.truncate(k)).truncate(min(k, lo))


def test_symbolic_scalar_cancellation():
    x = SymbolicScalar.L(3) + SymbolicScalar.Pi(2) - SymbolicScalar.L(3)
    assert x.l_free() and not x.is_rational()
    assert (x - SymbolicScalar.Pi(2)).is_zero()


def test_mass_shift_matches_taylor():
    # m^-2 at m0 + c hbar against sympy
    h = sp.Symbol("h")
    F = {0: MassFunction.power(-2, 5)}
    got = hbar_compose_shift(F, Q(3), Q(1, 2), 4)
    expect = sp.series(5 / (3 + h / 2) ** 2, h, 0, 5).removeO()
    for k in range(5):
        assert sq(got.coefficient(k).rational_value()) == expect.coeff(h, k)


def test_log_shift_keeps_L_symbol():
    got = MassFunction.log(2).shifted(Q(4), Q(1), 2)
    assert got.coefficient(0) == SymbolicScalar.L(2)
    assert got.coefficient(1).rational_value() == Q(1, 2)
