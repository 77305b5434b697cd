"""Refined topological recursion and its structural checks.

Entries are keyed by ``(g2, n)`` with ``g2 = 2g``; the body of ``omega_{g,n}``
is a :class:`FR` in ``z_0 .. z_{n-1}`` with the ``dz`` factors implicit.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Tuple

from .algebra import INF, FR, Point, Q, residue_at, series_at
from .algebra.series import poles_in, valuation
from .algebra.factored import fr_sum
from .curves import CurveModel, bsum, eta_point, kernel, omega02, phi_series
from .errors import UnstableRequest

BASE = {(0, 1), (0, 2), (1, 1)}


def omega_base(curve: CurveModel) -> Dict[Tuple[int, int], FR]:
    """``omega_{0,1}``, ``omega_{0,2}`` and ``omega_{1/2,1}``."""
    y = curve.y
    dlogy = (y.diff(0) / y).normalize()
    w = -dlogy
    for pt, mu in curve.P_plus:
        w = w + eta_point(curve, pt).scale(mu)
    return {
        (0, 1): curve.ydx,
        (0, 2): omega02(curve),
        (1, 1): w.scale(curve.Qcal / 2).normalize(),
    }


def is_stable(g2: int, n: int) -> bool:
    return n >= 1 and g2 >= 0 and (g2, n) not in BASE


class OmegaTable:
    """Memoized multidifferentials for one curve."""

    def __init__(self, curve: CurveModel):
        self.curve = curve
        self.Qcal = curve.Qcal
        self.entries: Dict[Tuple[int, int], FR] = dict(omega_base(curve))

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, g2: int, n: int) -> FR:
        if n < 1 or g2 < 0:
            raise ValueError(f"no entry ({g2}, {n})")
        key = (g2, n)
        if key not in self.entries:
            for dep in dependencies(g2, n):
                if dep not in self.entries:
                    self.entries[dep] = compute_entry(self, *dep)
            self.entries[key] = compute_entry(self, g2, n)
        return self.entries[key]

    def at(self, g2: int, n: int, variables) -> FR:
        """Entry with slot ``k`` evaluated at variable ``variables[k]``."""
        body = self.get(g2, n)
        mapping = {k: v for k, v in enumerate(variables) if k != v}
        return body.rename(mapping) if mapping else body


def rec_terms(g2: int, n: int):
    """Ingredients of ``Rec`` for ``omega_{g,n}`` as symbolic descriptors.

    Yields ``("B", i, (g2', n'), slots)``, ``("prod", (a, slots_a), (b, slots_b))``,
    ``("diag", (g2', n'))`` and ``("Q", (g2', n'))`` where slot lists refer to
    ``J = (1, .., n-1)``.
    """
    J = list(range(1, n))
    out = []
    if n - 1 >= 1:
        for i in J:
            rest = [j for j in J if j != i]
            out.append(("B", i, (g2, n - 1), rest))
    for a in range(g2 + 1):
        b = g2 - a
        for r in range(len(J) + 1):
            for J1 in itertools.combinations(J, r):
                J2 = [j for j in J if j not in J1]
                ka, kb = (a, len(J1) + 1), (b, len(J2) + 1)
                if ka == (0, 1) or kb == (0, 1):
                    continue
                out.append(("prod", (ka, list(J1)), (kb, J2)))
    if g2 >= 2:
        out.append(("diag", (g2 - 2, n + 1)))
    if g2 >= 1:
        out.append(("Q", (g2 - 1, n)))
    return out


def dependencies(g2: int, n: int) -> List[Tuple[int, int]]:
    """All entries needed for ``(g2, n)``, ordered so each precedes its users."""
    seen: Dict[Tuple[int, int], None] = {}

    def visit(key):
        if key in seen or key in BASE:
            return
        for d in _direct(*key):
            visit(d)
        seen[key] = None

    for d in _direct(g2, n):
        visit(d)
    return list(seen)


def _direct(g2: int, n: int):
    deps = set()
    for t in rec_terms(g2, n):
        if t[0] == "B":
            deps.add(t[2])
        elif t[0] == "prod":
            deps.add(t[1][0])
            deps.add(t[2][0])
        else:
            deps.add(t[1])
    return deps


def rec_body(table: OmegaTable, g2: int, n: int, p: int) -> FR:
    """``Rec^Q_{g,n}(p, J)`` with ``p = z_p`` and ``J = z_1 .. z_{n-1}``."""
    total = FR.const(0)
    for t in rec_terms(g2, n):
        total = total + _rec_term(table, t, p)
    return total


def _rec_term(table: OmegaTable, t, p: int) -> FR:
    curve = table.curve
    kind = t[0]
    if kind == "B":
        _, i, key, rest = t
        return bsum(curve, p, i) * table.at(*key, [p] + rest)
    if kind == "prod":
        (ka, sa), (kb, sb) = t[1], t[2]
        return table.at(*ka, [p] + sa) * table.at(*kb, [p] + sb)
    g2p, np_ = t[1]
    if kind == "diag":
        return table.at(g2p, np_, [p, p] + list(range(1, np_ - 1)))
    # Q dx d(w/dx)  =  Q (w' - w dx'/dx)
    w = table.at(g2p, np_, [p] + list(range(1, np_)))
    dx = curve.in_var(curve.dx, p)
    ratio = curve._cache.get(("dlogdx", p))
    if ratio is None:
        ratio = (dx.diff(p) / dx).normalize()
        curve._cache[("dlogdx", p)] = ratio
    return (w.diff(p) - w * ratio).scale(table.Qcal)


def residue_points(curve: CurveModel, n: int) -> List[Point]:
    """``R``, then ``sigma(J_0)``, then ``P'_+`` for an ``n``-point entry."""
    pts = list(curve.R)
    pts += [curve.sigma_of_var(k) for k in range(n)]
    pts += [pt for pt, _ in curve.P_plus]
    return pts


def compute_entry(table: OmegaTable, g2: int, n: int) -> FR:
    """Residue formula for ``omega_{g,n}``."""
    if (g2, n) in BASE:
        raise UnstableRequest(f"({g2}, {n}) is a base case")
    curve = table.curve
    p = n
    K = kernel(curve, p)
    residues = []
    for t in rec_terms(g2, n):
        integrand = K * _rec_term(table, t, p)
        if integrand.is_zero():
            continue
        for pt in residue_points(curve, n):
            residues.append(residue_at(integrand, p, pt))
    return (-fr_sum(residues)).normalize()


# ---------------------------------------------------------------- checks


def symmetry_check(table: OmegaTable, g2: int, n: int) -> bool:
    """Body invariant under every adjacent transposition of slots."""
    w = table.get(g2, n)
    for i in range(n - 1):
        if not w.rename({i: i + 1, i + 1: i}) == w:
            return False
    return True


def permitted_atom(curve: CurveModel, atom) -> bool:
    kind = atom[0]
    if kind == "L":
        pt = Point.const(atom[2])
        return pt in curve.R_star
    if kind == "P":
        return curve.sigma == "inv"
    if kind == "S":
        return curve.sigma == "neg"
    return False


def pole_locus_check(table: OmegaTable, g2: int, n: int) -> bool:
    """Poles only on ``R*`` and on ``z_i = sigma(z_j)``, including at infinity."""
    curve = table.curve
    w = table.get(g2, n).normalize()
    if w.is_zero():
        return True
    if not all(permitted_atom(curve, a) for a in w.den):
        return False
    if INF not in curve.R_star:
        for v in range(n):
            # regular at infinity: body = O(1/z^2)
            if valuation(w, v, INF) < 2:
                return False
    return True


def residue_free_check(table: OmegaTable, g2: int, n: int) -> bool:
    """Zero residue in ``z_0`` at every pole, finite or infinite."""
    w = table.get(g2, n)
    if w.is_zero():
        return True
    pts = poles_in(w, 0) + [INF]
    return all(residue_at(w, 0, pt).is_zero() for pt in pts)


def loop_equation_in_range(g2: int, n: int) -> bool:
    """Stated range for ``omega_{g,n}`` (``n`` points): integer ``g >= 1``, ``n >= 2``."""
    k = n - 1
    return g2 % 2 == 0 and g2 >= 2 and k >= 1 and g2 + k - 2 > 0


def loop_equation_terms(table: OmegaTable, g2: int, n: int) -> List[FR]:
    """Summands of the global loop equation for ``omega_{g,n}`` (``n`` points).

    ``omega(z_0, J) + Rec(z_0, J)/(2 ydx(z_0)) - sum_i d_i(kernel_i * omega_{g,n-1}(J))``
    """
    curve = table.curve
    if n < 2:
        raise ValueError("loop equation needs at least two points")
    terms = [table.get(g2, n)]
    ydx0 = curve.ydx.scale(2)
    rec = rec_body(table, g2, n, 0)
    terms.append((rec / ydx0))
    lower = table.at(g2, n - 1, list(range(1, n)))
    for i in range(1, n):
        terms.append(-(kernel(curve, i) * lower).diff(i))
    return terms


def loop_eq_check(table: OmegaTable, g2: int, n: int) -> bool:
    """Exact global loop equation for ``omega_{g,n}``."""
    return fr_sum(loop_equation_terms(table, g2, n)).is_zero()


def loop_eq_spot_check(table: OmegaTable, g2: int, n: int, rng, trials: int = 3) -> bool:
    """Loop equation evaluated at random rational points, summand by summand."""
    terms = loop_equation_terms(table, g2, n)
    done = 0
    while done < trials:
        pt = {i: Q(rng.randint(-40, 40), rng.randint(1, 13)) for i in range(n)}
        try:
            total = sum((t.evaluate(pt) for t in terms), Q(0))
        except ZeroDivisionError:
            continue
        if total:
            return False
        done += 1
    return True


def dilaton_rhs(table: OmegaTable, g2: int, n: int) -> FR:
    """``-(sum_{R*} + sum_{sigma(J)}) Res_p Phi(p) omega_{g,n+1}(p, J)`` with ``p = z_n``."""
    curve = table.curve
    w = table.get(g2, n + 1)
    if w.is_zero():
        return FR.const(0)
    p = n
    pts = list(curve.R_star) + [curve.sigma_of_var(j) for j in range(n)]
    parts = []
    for pt in pts:
        v = valuation(w, p, pt)
        if v >= 0:
            continue
        prod = phi_series(curve, p, pt, -v) * series_at(w, p, pt, -1)
        parts.append(prod.coeff(-1))
    return (-fr_sum(parts)).normalize()


def dilaton_check(table: OmegaTable, g2: int, n: int) -> bool:
    """``(2g+n-2) omega_{g,n} = -sum Res Phi omega_{g,n+1}``."""
    if n < 1 or g2 + n - 2 < 1:
        raise ValueError("dilaton relation needs n > 0 and 2g + n - 2 >= 1")
    lhs = table.get(g2, n).scale(g2 + n - 2)
    return (lhs - dilaton_rhs(table, g2, n)).is_zero()


def scaling_exponent(curve: CurveModel, g2: int, n: int) -> int:
    if curve.name == "Airy":
        return 2 - 3 * g2 - 4 * (n - 1)
    if curve.name == "DegenerateBessel":
        return g2 - 2
    raise ValueError("scaling law applies to Airy and DegenerateBessel only")


def _w_in_y(curve: CurveModel, w: FR, n: int) -> FR:
    """Divide out ``dy_i/dz_i`` so the result is a density in the ``y_i``."""
    dy = curve.y.diff(0)
    inv = dy.inverse()
    out = w
    for i in range(n):
        out = out * curve.in_var(inv, i)
    return out.normalize()


def scaling_check_airy_dbes(table: OmegaTable, g2: int, n: int, c) -> bool:
    """``W(c y) = c^e W(y)`` with ``W`` the density in the ``y_i``."""
    curve = table.curve
    c = Q(c)
    e = scaling_exponent(curve, g2, n)
    W = _w_in_y(curve, table.get(g2, n), n)
    # y = z (Airy) or y = 1/(2z) (degenerate Bessel)
    lam = c if curve.name == "Airy" else 1 / c
    scaled = W.scale_vars(lam, range(n))
    return scaled == W.scale(c ** e)
