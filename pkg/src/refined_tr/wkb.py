"""Quantum curves, WKB solutions and Voros coefficients.

Potentials are Laurent polynomials in ``x``; WKB data lives on the
parametrizing ``z``-sphere as one-form bodies in ``z_0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional

from .algebra import FR, Point, Q, limit_at
from .algebra.hbar import HbarSeries, MassFunction, SymbolicScalar, hbar_compose_shift, log1p_series
from .algebra.rational import Rational
from .algebra.series import antiderivative
from .curves import CurveModel
from .errors import InvariantViolation, UnexpectedLogPart


@dataclass
class QuantumCurve:
    """``(eps1^2 d^2/dx^2 - Q(x, hbar)) psi = 0`` with ``Q = Q0 + hbar Q1 + hbar^2 Q2``.

    Each ``Q_j`` maps powers of ``x`` to coefficients.
    """

    curve: str
    Q0: Dict[int, Rational]
    Q1: Dict[int, Rational]
    Q2: Dict[int, Rational]

    def parts(self) -> List[Dict[int, Rational]]:
        return [self.Q0, self.Q1, self.Q2]

    def to_json(self) -> dict:
        from .algebra.rational import rational_str

        return {
            f"Q{j}": {str(k): rational_str(v) for k, v in sorted(q.items())}
            for j, q in enumerate(self.parts())
        }


def printed_quantum_curve(curve: CurveModel) -> QuantumCurve:
    """Reference operator coefficients, kept verbatim for comparison."""
    p = curve.params
    s, Qc, mu, nu = p.s, p.Qcal, p.mu, p.nu
    if curve.name == "Weber":
        return QuantumCurve("Weber", {2: Q(1, 4), 0: -curve.m}, {0: (nu / s + Qc * mu) / 2}, {})
    if curve.name == "Whittaker":
        return QuantumCurve(
            "Whittaker",
            {0: Q(1, 4), -1: curve.m},
            {-1: (s * nu - Qc * mu) / 2},
            {-2: (Qc * Qc - s * s) / 4},
        )
    if curve.name == "Airy":
        return QuantumCurve("Airy", {1: Q(1)}, {}, {})
    return QuantumCurve("DegenerateBessel", {-1: Q(1, 4)}, {}, {})


def quantum_curve(curve: CurveModel, source: str = "recursion") -> QuantumCurve:
    """Quantum curve with ``Q1`` matched to the recursion wavefunction.

    ``source="printed"`` returns the reference coefficients unchanged.  The
    default keeps ``Q0`` and ``Q2`` and replaces ``Q1`` by the value forced at
    order ``hbar^1`` by ``omega_{1/2,1}`` and ``omega_{0,2}`` (see ``derived_q1``).
    """
    printed = printed_quantum_curve(curve)
    if source == "printed":
        return printed
    if source != "recursion":
        raise ValueError(f"unknown quantum curve source {source!r}")
    return QuantumCurve(curve.name, printed.Q0, derived_q1(curve), printed.Q2)


def wavefunction_s0(curve: CurveModel) -> FR:
    """``S_0 dx`` read off the recursion wavefunction (body in ``z_0``).

    ``S_0 dx = omega_{1/2,1}/s + (1/s^2) sum_p nu_p int_p^z omega_{0,2}(z, .)``.
    """
    from .curves import omega02
    from .recursion import omega_base

    p = curve.params
    s = p.s
    total = omega_base(curve)[(1, 1)].scale(1 / s)
    if curve.name in ("Weber", "Whittaker"):
        weights = [(curve.P["+"], p.nu_plus), (curve.P["-"], p.nu_minus)]
    else:
        weights = [(curve.P["oo"], Q(1))]
    rat, logs = antiderivative(omega02(curve, 0, 1), 1)
    if any(not c.is_zero() for c, _ in logs):
        raise UnexpectedLogPart("omega_{0,2} primitive has a log part")
    upper = rat.rename({1: 0}).normalize()
    for pt, w in weights:
        if not w:
            continue
        part = upper - limit_at(rat, 1, pt)
        total = total + part.scale(w / (s * s))
    return total.normalize()


def _laurent_in_x(curve: CurveModel, f: FR, lo: int = -3, hi: int = 3) -> Dict[int, Rational]:
    """Write a function of ``z`` as a Laurent polynomial in ``x``; raise if impossible."""
    from flint import fmpq, fmpq_mat

    degs = list(range(lo, hi + 1))
    pts, z = [], 2
    while len(pts) < len(degs):
        zq = Q(z, 1) if z % 2 else Q(1, z)
        try:
            xv = curve.x.evaluate({0: zq})
            fv = f.evaluate({0: zq})
        except ZeroDivisionError:
            z += 1
            continue
        if xv:
            pts.append((xv, fv))
        z += 1
    A = fmpq_mat([[fmpq(int((xv ** d).numerator), int((xv ** d).denominator)) for d in degs] for xv, _ in pts])
    b = fmpq_mat([[fmpq(int(fv.numerator), int(fv.denominator))] for _, fv in pts])
    sol = A.solve(b)
    out = {}
    for i, d in enumerate(degs):
        c = Q(int(sol[i, 0].p), int(sol[i, 0].q))
        if c:
            out[d] = c
    if not _in_z(curve, out) == f:
        raise InvariantViolation("function is not a Laurent polynomial in x")
    return out


def derived_q1(curve: CurveModel) -> Dict[int, Rational]:
    """``Q1 = 2 s^2 S_{-1} S_0^odd`` with ``S_0`` from the wavefunction.

    Only the sheet-odd part of ``S_0`` is used: it is unchanged by gauge
    transformations ``psi -> g(x) psi``, which shift the even part alone.
    """
    s = curve.params.s
    s0 = wavefunction_s0(curve)
    s0_odd = (s0 - curve.pullback(s0, 0)).scale(Q(1, 2))
    q1 = (curve.y * s0_odd * curve.dx.inverse()).scale(2 * s).normalize()
    return _laurent_in_x(curve, q1)


def _in_z(curve: CurveModel, q: Mapping[int, Rational]) -> FR:
    """Laurent polynomial in ``x`` pulled back along ``x(z)``."""
    key = ("x_pow",)
    pows = curve._cache.setdefault(key, {0: FR.const(1)})
    total = FR.const(0)
    for k, c in q.items():
        if k not in pows:
            base = curve.x if k > 0 else curve.x.inverse()
            pows[k] = (base ** abs(k)).normalize()
        total = total + pows[k].scale(c)
    return total.normalize()


def riccati(curve: CurveModel, order: int, qc: Optional[QuantumCurve] = None) -> Dict[int, FR]:
    """``S_k`` for ``-1 <= k <= order`` as functions of ``z``.

    ``S = sum hbar^k S_k`` solves ``s^2 (S' + S^2) = Q`` with ``' = d/dx``.
    """
    s = curve.params.s
    qc = qc or quantum_curve(curve)
    Qz = [_in_z(curve, q) for q in qc.parts()]
    inv_dx = curve.dx.inverse()
    S: Dict[int, FR] = {-1: curve.y.scale(1 / s)}
    denom = S[-1].scale(2).inverse()
    for j in range(1, order + 2):
        rhs = Qz[j].scale(1 / (s * s)) if j < len(Qz) else FR.const(0)
        rhs = rhs - (S[j - 2].diff(0) * inv_dx)
        for a in range(0, j - 1):
            b = j - 2 - a
            rhs = rhs - S[a] * S[b]
        S[j - 1] = (rhs * denom).normalize()
    # S'_{-1} consistency: s^2 S_{-1}^2 = Q0
    if not S[-1] * S[-1] == Qz[0].scale(1 / (s * s)):
        raise InvariantViolation("leading WKB term does not solve the classical curve")
    return S


def wkb_one_forms(curve: CurveModel, order: int, qc: Optional[QuantumCurve] = None) -> Dict[int, FR]:
    """``T_k = S_k dx/dz`` (bodies in ``z_0``)."""
    S = riccati(curve, order, qc)
    return {k: (v * curve.dx).normalize() for k, v in S.items()}


def t_odd(curve: CurveModel, order: int, qc: Optional[QuantumCurve] = None) -> Dict[int, FR]:
    """Sheet-odd part ``(T_k - sigma^* T_k)/2`` for ``-1 <= k <= order``."""
    T = wkb_one_forms(curve, order, qc)
    return {k: (v - curve.pullback(v, 0)).scale(Q(1, 2)).normalize() for k, v in T.items()}


def _endpoints(curve: CurveModel):
    """``(infinity_-, infinity_+)`` on the ``z``-sphere."""
    return curve.P["-"], curve.P["+"]


def _definite(f: FR, a: Point, b: Point) -> Rational:
    rat, logs = antiderivative(f, 0)
    logs = [(c, atom) for c, atom in logs if not c.is_zero()]
    if logs:
        raise UnexpectedLogPart(f"log part {[(c.to_str(), atom) for c, atom in logs]}")
    return (limit_at(rat, 0, b) - limit_at(rat, 0, a)).const_value()


def voros_path(curve: CurveModel, order: int, qc: Optional[QuantumCurve] = None) -> HbarSeries:
    """``V_alpha = sum_{k>=1} hbar^k int_{infinity_-}^{infinity_+} T_odd^(k)``."""
    if curve.name not in ("Weber", "Whittaker"):
        raise ValueError("path Voros coefficients need a rank-one curve")
    To = t_odd(curve, order, qc)
    a, b = _endpoints(curve)
    coeffs = {k: SymbolicScalar.const(_definite(To[k], a, b)) for k in range(1, order + 1)}
    return HbarSeries(order, coeffs)


def voros_cycle(curve: CurveModel, order: int) -> HbarSeries:
    """``V_gamma = oint_gamma T_odd`` with ``gamma`` a small circle around ``infinity_+``.

    The contour integral is ``2 pi i`` times the residue; ``Pi`` is the formal ``pi i``.
    """
    from .algebra import residue_at

    To = t_odd(curve, order)
    pt = curve.P["+"]
    out = {}
    # normalized so that oint_gamma ydx = 2 pi i m
    r0 = residue_at(curve.ydx, 0, pt).const_value()
    orient = 1 if r0 == curve.m else -1
    for k in range(-1, order + 1):
        r = residue_at(To[k], 0, pt).const_value() * orient
        out[k] = SymbolicScalar.Pi(2 * r)
    return HbarSeries(order, out)


def _shift_curve(curve: CurveModel, dnu: Rational) -> CurveModel:
    from .curves import build_curve

    p = curve.params
    mass = p.mass
    return build_curve(curve.name, p.s, mass, p.mu, p.nu_plus + dnu / 2)


def _log_ratio(c: Rational, m: Rational, order: int) -> HbarSeries:
    """``log(m + c hbar) - log m``."""
    return log1p_series(c / m, order)


def contiguity_rhs(curve: CurveModel, order: int) -> HbarSeries:
    """Right side of the nu-shift identity at the curve's own ``nu``."""
    p = curve.params
    s, Qc, mu, nu, m = p.s, p.Qcal, p.mu, p.nu, curve.m
    base = Qc * mu / 2 - nu / (2 * s)
    if curve.name == "Weber":
        return -_log_ratio(base - s / 2, m, order)
    if curve.name == "Whittaker":
        c = base + s / 2
        return _log_ratio(c + Qc / 2, m, order) + _log_ratio(c - Qc / 2, m, order)
    raise ValueError("contiguity needs a rank-one curve")


def contiguity_lhs(curve: CurveModel, order: int) -> HbarSeries:
    beta = curve.params.beta
    step = 2 * beta if curve.name == "Weber" else -2 * beta
    shifted = _shift_curve(curve, step)
    return voros_path(shifted, order) - voros_path(curve, order)


def contiguity_check(curve: CurveModel, order: int) -> bool:
    """``V(nu + 2 beta) - V(nu)`` (Weber) or ``V(nu - 2 beta) - V(nu)`` (Whittaker)."""
    K = order + 2
    diff = contiguity_lhs(curve, K) - contiguity_rhs(curve, K)
    return all(diff.coefficient(k).is_zero() for k in range(-1, order + 1))


def special_contiguity_check(curve: CurveModel, order: int) -> bool:
    """The ``nu = -+beta`` specialisations for Weber and Whittaker."""
    from .curves import build_curve

    p = curve.params
    beta, s, Qc, mu, m = p.beta, p.s, p.Qcal, p.mu, curve.m
    K = order + 2
    # nu = 2 nu_+ - 1
    at = lambda nu: build_curve(curve.name, s, p.mass, mu, (nu + 1) / 2)
    lhs = voros_path(at(beta), K) - voros_path(at(-beta), K)
    if curve.name == "Weber":
        rhs = -_log_ratio(Qc * mu / 2, m, K)
    else:
        rhs = -(_log_ratio(Qc * mu / 2 + Qc / 2, m, K) + _log_ratio(Qc * mu / 2 - Qc / 2, m, K))
    diff = lhs - rhs
    return all(diff.coefficient(k).is_zero() for k in range(-1, order + 1))


def difference_relation_series(curve: CurveModel, F: Mapping[int, MassFunction], order: int) -> HbarSeries:
    """``F(m - (nu-1)hbar/(2s)) - F(m - (nu+1)hbar/(2s)) - F0'/(s hbar) + nu F0''/(2 beta) - F_{1/2}'/s``."""
    p = curve.params
    s, nu, beta, m = p.s, p.nu, p.beta, curve.m
    out = hbar_compose_shift(F, m, -(nu - 1) / (2 * s), order) - hbar_compose_shift(F, m, -(nu + 1) / (2 * s), order)
    F0, Fh = F[-2], F[-1]
    corr = HbarSeries(
        order,
        {
            -1: -F0.derivative().evaluate(m) * (1 / s),
            0: F0.derivative(2).evaluate(m) * (nu / (2 * beta)) - Fh.derivative().evaluate(m) * (1 / s),
        },
    )
    return out + corr


def delta_operator(F: Mapping[int, MassFunction], m, eps1, eps2, order: int) -> HbarSeries:
    """Four-term action of ``-(e^{e1 d/2} - e^{-e1 d/2})(e^{e2 d/2} - e^{-e2 d/2})``."""
    terms = [(-1, -eps1 / 2 - eps2 / 2), (1, -eps1 / 2 + eps2 / 2), (1, eps1 / 2 - eps2 / 2), (-1, eps1 / 2 + eps2 / 2)]
    out = HbarSeries(order)
    for sign, c in terms:
        sh = hbar_compose_shift(F, m, c, order)
        out = out + sh if sign > 0 else out - sh
    return out


def f_difference_rhs(curve: CurveModel, order: int) -> HbarSeries:
    p = curve.params
    Qc, mu, m = p.Qcal, p.mu, curve.m
    L = HbarSeries(order, {0: SymbolicScalar.L()})
    if curve.name == "Weber":
        return L + _log_ratio(mu * Qc / 2, m, order)
    if curve.name == "Whittaker":
        return L + L + _log_ratio(mu * Qc / 2 + Qc / 2, m, order) + _log_ratio(mu * Qc / 2 - Qc / 2, m, order)
    raise ValueError("difference equation needs a rank-one curve")


def f_difference_equation_check(curve: CurveModel, F: Mapping[int, MassFunction], order: int) -> bool:
    s = curve.params.s
    K = order + 2
    lhs = delta_operator(F, curve.m, s, -1 / s, K)
    diff = lhs - f_difference_rhs(curve, K)
    return all(diff.coefficient(k).is_zero() for k in range(-2, order + 1))


def difference_relation_check(curve: CurveModel, order: int, F: Optional[Mapping[int, MassFunction]] = None) -> bool:
    """Free-energy difference relation reproduces ``V_alpha`` through ``hbar^order``.

    ``F`` defaults to the recursion free energies with alpha-integral unstable terms.
    """
    if F is None:
        from .energies import free_energy_series
        from .recursion import OmegaTable

        F = free_energy_series(OmegaTable(curve), order + 1)
    K = order + 2
    rel = difference_relation_series(curve, F, K)
    V = voros_path(curve, order)
    if not all(rel.coefficient(k).is_zero() for k in (-1, 0)):
        return False
    return all(rel.coefficient(k) == V.coefficient(k) for k in range(1, order + 1))
