"""Free energies, iterated path integrals and the variational identity."""

from __future__ import annotations

from typing import Dict, Optional

from .algebra import FR, Q, limit_at, series_at
from .algebra.hbar import MassFunction
from .algebra.rational import Rational
from .algebra.series import antiderivative, valuation
from .curves import CurveModel, phi_series
from .errors import UnexpectedLogPart, UnstableRequest
from .recursion import OmegaTable


def free_energy_stable(table: OmegaTable, g2: int) -> Rational:
    """``F_g = 1/(2-2g) sum_{r in R*} Res_r Phi omega_{g,1}`` for ``2g >= 3``."""
    if g2 < 3:
        raise UnstableRequest(f"F with 2g = {g2} is not given by the residue formula")
    curve = table.curve
    w = table.get(g2, 1)
    total = Q(0)
    if w.is_zero():
        return total
    for r in curve.R_star:
        v = valuation(w, 0, r)
        if v >= 0:
            continue
        prod = phi_series(curve, 0, r, -v) * series_at(w, 0, r, -1)
        total += prod.coeff(-1).const_value()
    return total / (2 - g2)


# printed closed forms: F0 = a m^2 log m + b m^2, F_{1/2} = c m log m - c m, F1 = d log m
def free_energy_unstable(curve: CurveModel) -> Dict[int, MassFunction]:
    """Closed forms of ``F_0, F_{1/2}, F_1`` keyed by the hbar power ``2g - 2``."""
    p = curve.params
    mu, Qc = p.mu, p.Qcal
    if curve.name == "Weber":
        return {
            -2: MassFunction({(2, 1): Q(1, 2), (2, 0): Q(-3, 4)}),
            -1: MassFunction({(1, 1): mu * Qc / 2, (1, 0): -mu * Qc / 2}),
            0: MassFunction.log(-(2 + (1 - 3 * mu * mu) * Qc * Qc) / 24),
        }
    if curve.name == "Whittaker":
        return {
            -2: MassFunction({(2, 1): 1, (2, 0): Q(-3, 2)}),
            -1: MassFunction({(1, 1): mu * Qc, (1, 0): -mu * Qc}),
            0: MassFunction.log(-(2 + (2 - 3 * mu * mu) * Qc * Qc) / 12),
        }
    return {-2: MassFunction(), -1: MassFunction(), 0: MassFunction()}


def alpha_integral(curve: CurveModel, f: FR, n: int) -> Rational:
    """``int_alpha ... int_alpha f`` over slots ``z_0 .. z_{n-1}``, innermost slot last.

    ``alpha`` runs from ``infinity_-`` to ``infinity_+``.
    """
    if "+" not in curve.P:
        raise ValueError(f"{curve.name} has no path alpha")
    start, end = curve.P["-"], curve.P["+"]
    cur = f
    for v in reversed(range(n)):
        rat, logs = antiderivative(cur, v)
        logs = [(c, a) for c, a in logs if not c.is_zero()]
        if logs:
            raise UnexpectedLogPart(f"log part in slot {v}: {[a for _, a in logs]}")
        cur = (limit_at(rat, v, end) - limit_at(rat, v, start)).normalize()
    return cur.const_value()


def mass_derivative_from_alpha(table: OmegaTable, g2: int, n: int) -> Rational:
    """``d^n F_g / dm^n`` via the variational formula."""
    return alpha_integral(table.curve, table.get(g2, n), n)


def unstable_from_recursion(table: OmegaTable) -> Dict[int, MassFunction]:
    """``F_0, F_{1/2}, F_1`` reconstructed from alpha-integrals.

    Homogeneity fixes the mass dependence: ``F_0'''``, ``F_{1/2}''`` and ``F_1'``
    all scale as ``1/m``.  The polynomial ambiguity is fixed to the shapes
    ``A m^2 (log m - 3/2)`` and ``B m (log m - 1)``.
    """
    m = table.curve.m
    d3 = mass_derivative_from_alpha(table, 0, 3) * m
    d2 = mass_derivative_from_alpha(table, 1, 2) * m
    d1 = mass_derivative_from_alpha(table, 2, 1) * m
    return {
        -2: MassFunction({(2, 1): d3 / 2, (2, 0): -3 * d3 / 4}),
        -1: MassFunction({(1, 1): d2, (1, 0): -d2}),
        0: MassFunction.log(d1),
    }


def free_energy_series(table: OmegaTable, max_g2: int, unstable: Optional[Dict[int, MassFunction]] = None):
    """``F = sum hbar^{2g-2} F_g`` as mass functions, stable terms homogeneous in ``m``."""
    m = table.curve.m
    F = dict(unstable if unstable is not None else unstable_from_recursion(table))
    for g2 in range(3, max_g2 + 1):
        F[g2 - 2] = MassFunction.power(2 - g2, free_energy_stable(table, g2) * m ** (g2 - 2))
    return F


def variational_check(table: OmegaTable, g2: int, n: int = 1) -> dict:
    """Compare ``d^n F_g/dm^n`` with the alpha-integral of ``omega_{g,n}``.

    Stable ``F_g`` use ``F_g = c m^{2-2g}``; unstable ones use the printed closed forms.
    """
    curve = table.curve
    m = curve.m
    lhs = mass_derivative_from_alpha(table, g2, n)
    if g2 >= 3:
        c = free_energy_stable(table, g2)
        mf = MassFunction.power(2 - g2, c * m ** (g2 - 2))
    else:
        mf = free_energy_unstable(curve)[g2 - 2]
    rhs = mf.derivative(n).evaluate(m)
    ok = rhs.is_rational() and rhs.rational_value() == lhs
    return {"g2": g2, "n": n, "alpha_integral": lhs, "mass_derivative": rhs, "holds": ok}
