"""The four hypergeometric-type refined spectral curves in rational parametrizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .algebra import INF, FR, LaurentSeries, Point, Q, residue_at, series_at
from .algebra.atoms import AtomMonomial, L, make_atom
from .algebra.rational import Rational
from .errors import ConfigError, InvariantViolation

CURVES = ("Weber", "Whittaker", "Airy", "DegenerateBessel")
RANK_ONE = ("Weber", "Whittaker")


@dataclass(frozen=True)
class CurveParams:
    s: Rational
    mass: Optional[Rational]
    mu: Rational
    nu_plus: Rational

    @property
    def nu_minus(self) -> Rational:
        return 1 - self.nu_plus

    @property
    def nu(self) -> Rational:
        return self.nu_plus - self.nu_minus

    @property
    def Qcal(self) -> Rational:
        return self.s - 1 / self.s

    @property
    def beta(self) -> Rational:
        return self.s * self.s


@dataclass
class PhiPrimitive:
    """``Phi = rational + log_coeff * log z``."""

    rational: FR
    log_coeff: Rational


@dataclass
class CurveModel:
    name: str
    params: CurveParams
    m: Optional[Rational]
    x: FR
    y: FR
    dx: FR
    ydx: FR
    sigma: str  # "inv" (z -> 1/z) or "neg" (z -> -z)
    R: List[Point]
    R_star: List[Point]
    P: Dict[str, Point]
    P_plus: List[Tuple[Point, Rational]]
    phi_log: Rational
    phi_rational: FR
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def Qcal(self) -> Rational:
        return self.params.Qcal

    def sigma_point(self, pt: Point) -> Point:
        if pt.kind == "const":
            if self.sigma == "neg":
                return Point.const(-pt.value)
            return INF if pt.value == 0 else Point.const(1 / pt.value)
        if pt.kind == "inf":
            return Point.const(0) if self.sigma == "inv" else INF
        raise ValueError(pt)

    def sigma_of_var(self, j: int) -> Point:
        return Point(self.sigma, j)

    def pullback(self, f: FR, i: int) -> FR:
        """``sigma^*`` of the one-form ``f dz_i`` in slot ``i`` (body only)."""
        g = f.mobius(i, self.sigma)
        if self.sigma == "inv":
            return g.mul_atoms(AtomMonomial(-1, {L(i): -2}))
        return -g

    def in_var(self, f: FR, v: int) -> FR:
        return f if v == 0 else f.rename({0: v})


def _fr_from(coeff, powers) -> FR:
    return FR.from_atoms(AtomMonomial(coeff, powers))


def build_curve(name: str, s, mass=None, mu=0, nu_plus=Q(1, 2)) -> CurveModel:
    """Construct a curve and verify its structural identities."""
    if name not in CURVES:
        raise ConfigError(f"unknown curve {name!r}; expected one of {CURVES}")
    s, mu, nu_plus = Q(s), Q(mu), Q(nu_plus)
    if not s:
        raise ConfigError("s must be nonzero")
    if name in RANK_ONE:
        if mass is None or not Q(mass):
            raise ConfigError(f"{name} needs a nonzero mass parameter")
        mass = Q(mass)
    else:
        mass = None
    params = CurveParams(s, mass, mu, nu_plus)
    z = FR.var(0)
    if name == "Weber":
        t = mass
        m = t * t
        x = (z + FR.var(0, -1)).scale(t)
        y = (z - FR.var(0, -1)).scale(t / 2)
        sigma = "inv"
        R = [Point.const(1), Point.const(-1)]
        phi_rat = (FR.var(0, 2) - FR.var(0, -2)).scale(m / 4)
        phi_log = -m
    elif name == "Whittaker":
        m = mass
        x = _fr_from(m, {L(0, 1): 2, L(0): -1})
        y = _fr_from(Q(1, 2), {L(0, -1): 1, L(0, 1): -1})
        sigma = "inv"
        R = [Point.const(1), Point.const(-1)]
        phi_rat = (z - FR.var(0, -1)).scale(m / 2)
        phi_log = m
    elif name == "Airy":
        m = None
        x = FR.var(0, 2)
        y = z
        sigma = "neg"
        R = [Point.const(0), INF]
        phi_rat = FR.var(0, 3, Q(2, 3))
        phi_log = Q(0)
    else:
        m = None
        x = FR.var(0, 2)
        y = _fr_from(Q(1, 2), {L(0): -1})
        sigma = "neg"
        R = [Point.const(0), INF]
        phi_rat = z
        phi_log = Q(0)
    dx = x.diff(0).normalize()
    ydx = (y * dx).normalize()
    # poles of ydx and their labels
    candidates = [Point.const(0), INF]
    poles = []
    for pt in candidates:
        # at infinity the one-form is f(1/u) * (-du/u^2)
        top = 1 if pt.kind == "inf" else -1
        ser = series_at(ydx, 0, pt, top)
        if any(not ser.coeff(e).is_zero() for e in range(ser.val, top + 1)):
            poles.append(pt)
    P: Dict[str, Point] = {}
    if name in RANK_ONE:
        for pt in poles:
            r = residue_at(ydx, 0, pt).const_value()
            if r == m:
                P["+"] = pt
            elif r == -m:
                P["-"] = pt
            else:
                raise InvariantViolation(f"residue of ydx at {pt} is {r}, expected +-{m}")
        if set(P) != {"+", "-"}:
            raise InvariantViolation("could not label both poles of ydx")
        P_plus = [(P["+"], mu)]
    else:
        P = {"oo": pt for pt in poles}
        P_plus = []
    R_star = [r for r in R if r not in poles]
    curve = CurveModel(name, params, m, x, y, dx, ydx, sigma, R, R_star, P, P_plus, phi_log, phi_rat)
    _verify_curve(curve)
    return curve


def _verify_curve(c: CurveModel) -> None:
    x_s = c.x.mobius(0, c.sigma)
    y_s = c.y.mobius(0, c.sigma)
    if not x_s == c.x:
        raise InvariantViolation(f"{c.name}: x(sigma(z)) != x(z)")
    if not y_s == -c.y:
        raise InvariantViolation(f"{c.name}: y(sigma(z)) != -y(z)")
    if not c.x.mobius(0, c.sigma).mobius(0, c.sigma) == c.x:
        raise InvariantViolation(f"{c.name}: sigma is not an involution")
    dphi = c.phi_rational.diff(0) + FR.var(0, -1).scale(c.phi_log)
    if not dphi == c.ydx:
        raise InvariantViolation(f"{c.name}: d(Phi) != ydx")
    # ydx has no zeroes away from ramification points
    for a in _zero_atoms(c.ydx):
        if Point.const(a) not in c.R:
            raise InvariantViolation(f"{c.name}: ydx vanishes at z = {a}, not a ramification point")
    for r in c.R:
        if c.sigma_point(r) != r:
            raise InvariantViolation(f"{c.name}: {r} is not fixed by sigma")


def _zero_atoms(f: FR):
    from .algebra.atoms import factor_poly

    am = factor_poly(f.num)
    return [a[2] for a in am.powers if a[0] == "L"]


def eta_point(curve: CurveModel, pt: Point) -> FR:
    """``eta_p(z0)`` for a labeled point ``p`` (body in ``z0``)."""
    other = curve.sigma_point(pt)
    return _inv_dist(pt) - _inv_dist(other)


def _inv_dist(pt: Point) -> FR:
    if pt.kind == "inf":
        return FR.const(0)
    return _fr_from(1, {L(0, pt.value): -1})


def eta_generic(curve: CurveModel, p: int) -> FR:
    """``eta_p(z0)`` with ``p = z_p`` a free variable (``p > 0``)."""
    if curve.sigma == "inv":
        # (p^2 - 1) / ((z0 - p)(p z0 - 1))
        return _fr_from(1, {L(p, 1): 1, L(p, -1): 1, ("D", 0, p): -1, ("P", 0, p): -1})
    return _fr_from(2, {L(p): 1, ("D", 0, p): -1, ("S", 0, p): -1})


def omega02(curve: CurveModel, a: int = 0, b: int = 1) -> FR:
    if curve.sigma == "inv":
        return FR.from_atoms(make_atom("P", a, b) ** -2)
    return FR.from_atoms(make_atom("S", a, b) ** -2)


def bsum(curve: CurveModel, p: int, q: int) -> FR:
    """``dx(p)dx(q)/(x(p)-x(q))^2 = B(p,q) + B(sigma p, q)`` (body)."""
    key = ("bsum", p, q)
    if key not in curve._cache:
        diag = FR.from_atoms(make_atom("D", p, q) ** -2)
        if curve.sigma == "inv":
            other = FR.from_atoms(make_atom("P", p, q) ** -2)
        else:
            other = FR.from_atoms(make_atom("S", p, q) ** -2)
        curve._cache[key] = diag - other
    return curve._cache[key]


def kernel(curve: CurveModel, p: int) -> FR:
    """``eta_p(z0) / (2 ydx(p))`` with ``p = z_p``."""
    key = ("kernel", p)
    if key not in curve._cache:
        ydx_p = curve.in_var(curve.ydx, p).scale(2)
        curve._cache[key] = (eta_generic(curve, p) / ydx_p).normalize()
    return curve._cache[key]


def phi(curve: CurveModel) -> PhiPrimitive:
    return PhiPrimitive(curve.phi_rational, curve.phi_log)


def phi_series(curve: CurveModel, v: int, pt: Point, order: int) -> LaurentSeries:
    """Local expansion of ``Phi`` about ``pt`` with the branch constant of ``log z`` dropped."""
    ser = series_at(curve.in_var(curve.phi_rational, v), v, pt, order)
    if not curve.phi_log:
        return ser
    # log(pt + u) - log(pt) = log(1 + u/pt)
    if pt.kind == "const":
        if pt.value == 0:
            raise ValueError("log z is singular at 0")
        ratio = FR.const(1 / pt.value)
    elif pt.kind == "inv":
        ratio = FR.var(pt.value)
    else:
        raise ValueError(f"log z expansion unsupported at {pt}")
    cs = [FR.const(0)] * (order + 1)
    rp = FR.const(1)
    for k in range(1, order + 1):
        rp = rp * ratio
        cs[k] = rp.scale(Q((-1) ** (k + 1), k) * curve.phi_log)
    return ser + LaurentSeries(0, cs)
