"""Local Laurent expansions, residues, primitives and endpoint limits.

All routines act on one distinguished variable ``z_v`` of a
:class:`FactoredRational`; coefficients stay rational in the others.
"""

from __future__ import annotations

from typing import List, Tuple

from ..errors import PoleAtEndpoint
from .atoms import (
    INF,
    Atom,
    AtomMonomial,
    L,
    Point,
    atom_root,
    expand_atom,
    has_var,
    make_atom,
)
from .factored import FactoredRational as FR
from .poly import Poly
from .rational import Q, binomial

_ZERO = FR(Poly())


class LaurentSeries:
    """Truncated Laurent series ``sum_k coeffs[k] u^(val+k)``.

    Coefficients are known for exponents ``< prec = val + len(coeffs)``.
    """

    __slots__ = ("val", "coeffs")

    def __init__(self, val: int, coeffs: List[FR]):
        self.val = val
        self.coeffs = coeffs

    @property
    def prec(self) -> int:
        return self.val + len(self.coeffs)

    def coeff(self, e: int) -> FR:
        if e >= self.prec:
            raise ValueError(f"coefficient u^{e} beyond precision {self.prec}")
        if e < self.val:
            return _ZERO
        return self.coeffs[e - self.val]

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        if prec <= self.val:
            return LaurentSeries(prec, [])
        return LaurentSeries(self.val, self.coeffs[: prec - self.val])

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.val, [c * other for c in self.coeffs])
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = prec - val
        out = []
        for k in range(n):
            acc = _ZERO
            for i in range(max(0, k - len(other.coeffs) + 1), min(k, len(self.coeffs) - 1) + 1):
                a = self.coeffs[i]
                b = other.coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return LaurentSeries(val, out)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        return LaurentSeries(val, [self.coeff(e) + other.coeff(e) for e in range(val, prec)])

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.val, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def derivative(self) -> "LaurentSeries":
        """Term-wise ``d/du``."""
        return LaurentSeries(self.val - 1, [c.scale(self.val + k) for k, c in enumerate(self.coeffs)])

    def map(self, fn) -> "LaurentSeries":
        return LaurentSeries(self.val, [fn(c) for c in self.coeffs])

    def __repr__(self):
        terms = ", ".join(f"u^{self.val + k}: {c.to_str()}" for k, c in enumerate(self.coeffs))
        return f"LaurentSeries({terms}; O(u^{self.prec}))"


def _shifted_numerator(num: Poly, v: int, pt: Point):
    """``(poly in z_v = u, atom-monomial prefactor)`` for a finite point."""
    if pt.kind == "const":
        return num.shift_var(v, Poly.const(pt.value)), None
    j = pt.value
    if pt.kind == "inv":
        # z_j^D num(1/z_j + u) = M(1 + z_j u) with M(w) = sum_d C_d z_j^(D-d) w^d
        coeffs = num.coeffs_in(v)
        dmax = max(coeffs)
        M = Poly.from_coeffs(v, {d: c.mul_monomial({j: dmax - d}) for d, c in coeffs.items()})
        return M.subs_poly(v, Poly.const(1) + Poly.monomial({j: 1, v: 1})), AtomMonomial.of(L(j), -dmax)
    center = Poly.var(j, coeff=-1 if pt.kind == "neg" else 1)
    return num.shift_var(v, center), None


def _numerator_terms(num: Poly, v: int, pt: Point, count_for):
    """``(vn, [FR, ..])`` with ``count_for(vn)`` coefficients from ``u^vn``."""
    if pt.kind == "inf":
        vn = -num.degree(v)
        n = count_for(vn)
        return vn, [FR(c) for c in num.high_coeffs(v, n)] if n > 0 else []
    shifted, pref = _shifted_numerator(num, v, pt)
    vn, cs = shifted.low_coeffs(v, count_for, skip_zeros=True)
    out = [FR(c) for c in cs]
    if pref is not None:
        out = [c.mul_atoms(pref) for c in out]
    return vn, out


def _prepare(f: FR, v: int, pt: Point):
    """Split ``f`` into numerator series, atom factors and a prefactor."""
    shift = 0
    pref = AtomMonomial(1)
    ratios = []
    rest = {}
    for a, k in f.den.items():
        if not has_var(a, v):
            rest[a] = k
            continue
        A, B, upow = expand_atom(a, v, pt)
        shift -= upow * k
        pref = pref * A ** (-k)
        if not B.is_zero():
            ratios.append((B / A, k))
    for a, k in rest.items():
        pref = pref * AtomMonomial.of(a, -k)
    return shift, pref, ratios


def valuation(f: FR, v: int, pt: Point) -> int:
    """Exact order of ``f`` at ``z_v = pt`` in the local coordinate ``u``."""
    if f.is_zero():
        raise ValueError("valuation of zero")
    shift, _, _ = _prepare(f, v, pt)
    vn, _ = _numerator_terms(f.num, v, pt, lambda vn: 0)
    return shift + vn


def series_at(f: FR, v: int, pt: Point, order: int) -> LaurentSeries:
    """Laurent expansion of ``f`` in ``u`` (``z_v = pt + u``, or ``1/u`` at infinity)
    with all coefficients through ``u^order``."""
    if f.is_zero():
        return LaurentSeries(order + 1, [])
    shift, pref, ratios = _prepare(f, v, pt)
    vn, ncoeffs = _numerator_terms(f.num, v, pt, lambda vn: order + 1 - shift - vn)
    base = shift + vn
    n = order + 1 - base
    if n <= 0:
        return LaurentSeries(order + 1, [])
    # prod (1 + r u)^(-k), truncated to n terms
    fac = None
    for r, k in ratios:
        cs = []
        rp = AtomMonomial(1)
        for i in range(n):
            cs.append(FR.from_atoms(rp * binomial(-k, i)))
            rp = rp * r
        ser = LaurentSeries(0, cs)
        fac = ser if fac is None else fac * ser
    prod = LaurentSeries(vn, ncoeffs)
    if fac is not None:
        prod = prod * fac
    return LaurentSeries(base, [c.mul_atoms(pref) for c in prod.coeffs])


def residue_at(f: FR, v: int, pt: Point) -> FR:
    """Residue of the one-form ``f dz_v`` at ``pt``."""
    if pt.kind == "inf":
        return -series_at(f, v, INF, 1).coeff(1)
    return series_at(f, v, pt, -1).coeff(-1)


def poles_in(f: FR, v: int) -> List[Point]:
    """Finite poles of ``f`` in ``z_v`` (from the denominator atoms)."""
    return [atom_root(a, v) for a in sorted(f.den) if has_var(a, v)]


def local_coordinate(v: int, pt: Point) -> AtomMonomial:
    """``z_v - pt`` as an atom monomial (finite points only)."""
    if pt.kind == "const":
        return AtomMonomial.of(L(v, pt.value))
    j = pt.value
    if pt.kind == "inv":
        return make_atom("P", v, j) * AtomMonomial.of(L(j), -1)
    if pt.kind == "neg":
        return make_atom("S", v, j)
    return make_atom("D", v, j)


def antiderivative(f: FR, v: int) -> Tuple[FR, List[Tuple[FR, Atom]]]:
    """Primitive of ``f dz_v`` as ``(rational part, [(coefficient, atom)])``.

    The log part lists ``c * log(atom)`` terms; atoms are in ``z_v``.
    """
    rational = _ZERO
    logs = []
    for a in sorted(f.den):
        if not has_var(a, v):
            continue
        pt = atom_root(a, v)
        ser = series_at(f, v, pt, -1)
        loc = local_coordinate(v, pt)
        for e in range(ser.val, -1):
            c = ser.coeff(e)
            if c.is_zero():
                continue
            k = -e
            rational = rational + c.mul_atoms(loc ** (1 - k)).scale(Q(-1, k - 1))
        res = ser.coeff(-1)
        if not res.is_zero():
            logs.append((res.normalize(), a))
    ser = series_at(f, v, INF, 0)
    for e in range(ser.val, 1):
        c = ser.coeff(e)
        if not c.is_zero():
            d = -e
            rational = rational + c * FR.var(v, d + 1, Q(1, d + 1))
    return rational.normalize(), logs


def limit_at(f: FR, v: int, pt: Point) -> FR:
    """Value of ``f`` at ``z_v = pt``; raises :class:`PoleAtEndpoint` on a pole."""
    ser = series_at(f, v, pt, 0)
    for e in range(ser.val, 0):
        if not ser.coeff(e).is_zero():
            raise PoleAtEndpoint(f"pole of order {-e} at z{v} = {pt}")
    return ser.coeff(0).normalize()
