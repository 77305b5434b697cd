import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refined_tr.algebra import FR, Q, residue_at
from refined_tr.algebra.hbar import MassFunction
from refined_tr.algebra.series import poles_in
from refined_tr.bps import bps_structure, closed_form_Vk, cycle_voros
from refined_tr.curves import build_curve
from refined_tr.wkb import (
    _in_z,
    delta_operator,
    derived_q1,
    printed_quantum_curve,
    quantum_curve,
    riccati,
    t_odd,
    voros_cycle,
    voros_path,
)

from conftest import WEBER, WHITTAKER
from test_bps import WEBER_V, WHITTAKER_V

RANK_ONE = [WEBER, WHITTAKER]
ids = lambda a: a[0]


def test_derived_first_order_potential():
    c = build_curve(*WEBER)
    p = c.params
    assert derived_q1(c) == {0: (p.nu / p.s - p.Qcal * p.mu) / 2}
    c = build_curve(*WHITTAKER)
    p = c.params
    assert derived_q1(c) == {-1: (p.Qcal * p.mu - p.nu / p.s) / 2}


def test_printed_operator_kept_verbatim():
    c = build_curve(*WEBER)
    p = c.params
    q = printed_quantum_curve(c)
    assert q.Q0 == {2: Q(1, 4), 0: -c.m}
    assert q.Q1 == {0: (p.nu / p.s + p.Qcal * p.mu) / 2}
    assert quantum_curve(c, "printed").Q1 == q.Q1


@pytest.mark.parametrize("args", RANK_ONE, ids=ids)
def test_riccati_defect_vanishes(args):
    c = build_curve(*args)
    s = c.params.s
    K = 5
    S = riccati(c, K)
    qz = [_in_z(c, q) for q in quantum_curve(c).parts()]
    inv_dx = c.dx.inverse()
    for j in range(0, K + 2):
        lhs = S[j - 2].diff(0) * inv_dx if j >= 1 else FR.const(0)
        for a in range(-1, j):
            b = j - 2 - a
            if -1 <= b <= K:
                lhs = lhs + S[a] * S[b]
        target = qz[j] if j < 3 else FR.const(0)
        assert lhs.scale(s * s) == target


@pytest.mark.parametrize("args", RANK_ONE, ids=ids)
def test_odd_forms_poles_and_residues(args):
    c = build_curve(*args)
    To = t_odd(c, 4)
    for k in range(1, 5):
        f = To[k]
        assert all(pt in c.R for pt in poles_in(f, 0))
        for pt in poles_in(f, 0):
            assert residue_at(f, 0, pt).is_zero()


@pytest.mark.parametrize("args,expect", [(WEBER, WEBER_V), (WHITTAKER, WHITTAKER_V)], ids=["Weber", "Whittaker"])
def test_path_voros(args, expect):
    V = voros_path(build_curve(*args), 5)
    assert all(V.coefficient(k).is_rational() for k in range(1, 6))
    assert [V.coefficient(k).rational_value() for k in range(1, 6)] == expect


@pytest.mark.parametrize("args", RANK_ONE, ids=ids)
def test_cycle_voros_two_terms(args):
    c = build_curve(*args)
    V = voros_cycle(c, 4)
    assert V == cycle_voros(bps_structure(c), c)


@given(st.builds(Q, st.integers(1, 5), st.integers(1, 3)), st.builds(Q, st.integers(-3, 3), st.integers(1, 3)), st.builds(Q, st.integers(1, 4), st.integers(5, 7)))
@settings(max_examples=6, deadline=None)
def test_path_voros_matches_closed_form_random(s, mu, nu_plus):
    for name, mass in (("Weber", 2), ("Whittaker", 3)):
        c = build_curve(name, s, mass, mu, nu_plus)
        V = voros_path(c, 3)
        b = bps_structure(c)
        assert [V.coefficient(k).rational_value() for k in (1, 2, 3)] == [closed_form_Vk(b, k) for k in (1, 2, 3)]


def test_printed_weber_operator_flips_mu():
    # the printed first-order term reproduces the closed form only after mu -> -mu
    args = list(WEBER)
    c = build_curve(*args)
    flipped = build_curve(args[0], args[1], args[2], -args[3], args[4])
    V = voros_path(c, 3, qc=printed_quantum_curve(c))
    b = bps_structure(flipped)
    assert [V.coefficient(k).rational_value() for k in (1, 2, 3)] == [closed_form_Vk(b, k) for k in (1, 2, 3)]
    assert V.coefficient(1).rational_value() != closed_form_Vk(bps_structure(c), 1)


def test_printed_whittaker_operator_differs():
    c = build_curve(*WHITTAKER)
    V = voros_path(c, 2, qc=printed_quantum_curve(c))
    assert V.coefficient(1).rational_value() != closed_form_Vk(bps_structure(c), 1)


def test_delta_on_constant_is_zero():
    F = {0: MassFunction.power(0, 7)}
    assert delta_operator(F, Q(3), Q(2), Q(-1, 2), 4).is_zero()


def test_delta_on_quadratic():
    # shifts are eps*hbar: -(2 sinh(e1 hbar d/2))(2 sinh(e2 hbar d/2)) m^2 = -2 e1 e2 hbar^2
    F = {0: MassFunction.power(2, 1)}
    out = delta_operator(F, Q(3), Q(2), Q(-1, 2), 3)
    assert out.coefficient(2).rational_value() == -2 * Q(2) * Q(-1, 2)
    assert out.coefficient(0).is_zero() and out.coefficient(1).is_zero()
