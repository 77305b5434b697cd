import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from refined_tr.algebra import Q
from refined_tr.algebra.hbar import SymbolicScalar
from refined_tr.bps import (
    SADDLE_OMEGA,
    ambiguity_check,
    ambiguity_report,
    bernoulli,
    bps_structure,
    closed_form_F,
    closed_form_Vk,
    cycle_voros,
    double_reflection_identity,
    hat_F,
    rescaling_identity,
    single_reflection_identity,
    symmetric_part,
)
from refined_tr.curves import build_curve

from conftest import AIRY, DBES, WEBER, WHITTAKER

w = sp.Symbol("w")
rat = st.builds(Q, st.integers(-12, 12), st.integers(1, 7))
nonzero = rat.filter(bool)


def sq(c):
    return sp.Rational(int(c.numerator), int(c.denominator))


def oracle_bernoulli(N, k, x, a):
    gen = w**N * sp.exp(sq(x) * w)
    for ai in a:
        gen /= sp.exp(sq(ai) * w) - 1
    return sp.series(gen, w, 0, k + 1).removeO().coeff(w, k) * sp.factorial(k)


# ---------------------------------------------------------------- Bernoulli


def test_double_bernoulli_unrefined_value():
    assert oracle_bernoulli(2, 4, Q(0), (Q(1), Q(-1))) == sp.Rational(-1, 10)
    assert bernoulli(2, 4, 0, (1, -1)) == Q(-1, 10)


@given(st.integers(0, 7), rat, nonzero)
@settings(max_examples=25, deadline=None)
def test_single_bernoulli_matches_generating_function(k, x, a):
    assert sq(bernoulli(1, k, x, (a,))) == oracle_bernoulli(1, k, x, (a,))


@given(st.integers(0, 6), rat, nonzero, nonzero)
@settings(max_examples=20, deadline=None)
def test_double_bernoulli_matches_generating_function(k, x, a, b):
    assert sq(bernoulli(2, k, x, (a, b))) == oracle_bernoulli(2, k, x, (a, b))


@pytest.mark.parametrize("k", range(8))
def test_unit_parameter_gives_bernoulli_polynomials(k):
    x = sp.Rational(2, 7)
    assert sq(bernoulli(1, k, Q(2, 7), (1,))) == sp.bernoulli(k, x)


@given(st.sampled_from([1, 2]), st.integers(0, 12), rat, nonzero, nonzero, nonzero)
@settings(max_examples=60, deadline=None)
def test_rescaling(N, k, x, a, b, lam):
    assert rescaling_identity(N, k, x, (a, b)[:N], lam)


@given(st.integers(0, 12), rat, nonzero)
@settings(max_examples=60, deadline=None)
def test_reflections(k, x, s):
    assert double_reflection_identity(k, x, s)
    assert single_reflection_identity(k, x, s)


def test_double_reflection_printed_form():
    # B_{2,k}(-x + Q | s, -1/s) = (-1)^k B_{2,k}(x | s, -1/s)
    s, x = Q(3), Q(2, 9)
    Qc = s - 1 / s
    for k in range(13):
        assert bernoulli(2, k, -x + Qc, (s, -1 / s)) == (-1) ** k * bernoulli(2, k, x, (s, -1 / s))


def test_bernoulli_rejects_bad_input():
    with pytest.raises(ValueError):
        bernoulli(2, 3, 0, (1,))
    with pytest.raises(ValueError):
        bernoulli(1, 3, 0, (0,))


# ---------------------------------------------------------------- structures


def test_saddle_types():
    assert SADDLE_OMEGA["I"] == {0: 1}
    assert SADDLE_OMEGA["II"] == {1: 1, -1: 1}
    assert SADDLE_OMEGA["III"] == {2: 1, 0: 2, -2: 1}
    assert SADDLE_OMEGA["IV"] == {-1: -1}


def test_weber_structure():
    b = bps_structure(build_curve(*WEBER))
    assert b.rank == 1 and len(b.active) == 2
    plus, minus = b.active
    assert plus.zhat == 9 and minus.zhat == -9
    assert plus.zcheck == Q(1, 3) * Q(3, 2) / 2
    assert plus.omega_dict() == {0: 1}
    assert plus.pairing_alpha == 1 and minus.pairing_alpha == -1


def test_whittaker_structure_type_two():
    b = bps_structure(build_curve(*WHITTAKER))
    assert b.active[0].omega_dict() == {1: 1, -1: 1}


@pytest.mark.parametrize("args", [AIRY, DBES], ids=lambda a: a[0])
def test_rank_zero_outputs_vanish(args):
    b = bps_structure(build_curve(*args))
    assert b.rank == 0
    assert all(closed_form_F(b, g2) == 0 for g2 in range(3, 9))


# ---------------------------------------------------------------- closed forms

# recursion outputs, frozen
WEBER_F = {3: Q(-1, 216), 4: Q(-61, 311040), 5: Q(7, 524880), 6: Q(631, 423263232)}
WHITTAKER_F = {3: Q(11, 960), 4: Q(367, 384000), 5: Q(-1313, 11520000), 6: Q(-2879, 129024000)}
WEBER_V = [Q(-11, 1350), Q(2, 10125), Q(91, 4100625), Q(-172, 102515625), Q(-98776, 290631796875)]
WHITTAKER_V = [Q(323, 12000), Q(-97, 100000), Q(-136957, 720000000), Q(258619, 10000000000), Q(1152701141, 126000000000000)]


@pytest.mark.parametrize("args,table", [(WEBER, WEBER_F), (WHITTAKER, WHITTAKER_F)], ids=["Weber", "Whittaker"])
def test_closed_form_free_energies(args, table):
    b = bps_structure(build_curve(*args))
    for g2, v in table.items():
        assert closed_form_F(b, g2) == v


@pytest.mark.parametrize("args,table", [(WEBER, WEBER_V), (WHITTAKER, WHITTAKER_V)], ids=["Weber", "Whittaker"])
def test_closed_form_voros(args, table):
    b = bps_structure(build_curve(*args))
    assert [closed_form_Vk(b, k) for k in range(1, 6)] == table


@given(nonzero, rat, st.integers(1, 6), st.integers(3, 8))
@settings(max_examples=40, deadline=None)
def test_pair_sum_equals_single_term(s, mu, t, g2):
    b = bps_structure(build_curve("Weber", s, t, mu, Q(1, 2)))
    assert closed_form_F(b, g2) == hat_F(b, g2, s, mu, t * t)


@given(nonzero, rat, st.integers(3, 8))
@settings(max_examples=30, deadline=None)
def test_closed_form_invariant_under_s_to_minus_inverse(s, mu, g2):
    for name, mass in (("Weber", 2), ("Whittaker", 3)):
        a = bps_structure(build_curve(name, s, mass, mu, Q(1, 2)))
        b = bps_structure(build_curve(name, -1 / s, mass, mu, Q(1, 2)))
        assert closed_form_F(a, g2) == closed_form_F(b, g2)


def test_unrefined_weber_genus_two():
    for t in (1, 2, 3):
        b = bps_structure(build_curve("Weber", 1, t))
        assert closed_form_F(b, 4) == Q(-1, 240) / (t**4)
        assert closed_form_F(b, 3) == 0 and closed_form_F(b, 5) == 0


# ---------------------------------------------------------------- cycle and ambiguity


@pytest.mark.parametrize("args", [WEBER, WHITTAKER], ids=lambda a: a[0])
def test_cycle_voros_conventions(args):
    c = build_curve(*args)
    b = bps_structure(c)
    p = c.params
    shown = cycle_voros(b, c, "displayed")
    contour = cycle_voros(b, c)
    assert shown.coefficient(-1) == SymbolicScalar.Pi(2 * c.m / p.s)
    assert shown.coefficient(0) == SymbolicScalar.const(p.Qcal * p.mu / (2 * p.s)) - SymbolicScalar.Pi(p.nu / p.s**2)
    assert contour.coefficient(0) == SymbolicScalar.Pi(p.Qcal * p.mu / p.s - p.nu / p.s**2)
    assert all(contour.coefficient(k).is_zero() for k in range(1, contour.order + 1))


def test_symmetric_part():
    assert symmetric_part({1: 1, -1: 1}) == {1: 2}
    assert symmetric_part({0: 1}) == {0: 2}
    assert symmetric_part({2: 3, -2: -3}) == {}


def test_ambiguity_examples():
    b = bps_structure(build_curve(*WHITTAKER))
    assert ambiguity_check(b, {1: 2})
    assert ambiguity_report(b, {1: 2})["free_energies_agree"]
    rep = ambiguity_report(b, {0: 2})
    assert not rep["free_energies_agree"] and not rep["symmetric_part_preserved"] and rep["consistent"]


@given(st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=4))
@settings(max_examples=40, deadline=None)
def test_ambiguity_both_directions(repl):
    for args in (WEBER, WHITTAKER):
        b = bps_structure(build_curve(*args))
        assert ambiguity_check(b, repl)
