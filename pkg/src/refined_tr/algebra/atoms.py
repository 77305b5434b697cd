"""Denominator atoms and the points at which expansions are taken.

Every denominator in the engine is a product of linear *atoms*:

* ``("L", i, c)``  ->  ``z_i - c``            (``c`` rational, ``c = 0`` is ``z_i``)
* ``("P", i, j)``  ->  ``z_i * z_j - 1``      (``i < j``)
* ``("S", i, j)``  ->  ``z_i + z_j``          (``i < j``)
* ``("D", i, j)``  ->  ``z_i - z_j``          (``i < j``)

Poles of the multidifferentials sit at ``z = +-1, 0, infinity`` and on the loci
``z_i = sigma(z_j)``; for the involutions ``z -> 1/z`` and ``z -> -z`` this
set is closed under every operation the recursion performs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

import gmpy2

from .poly import Poly
from .rational import Q, Rational

Atom = Tuple


def L(i: int, c=0) -> Atom:
    return ("L", i, Q(c))


def atom_vars(atom: Atom) -> Tuple[int, ...]:
    return (atom[1],) if atom[0] == "L" else (atom[1], atom[2])


def has_var(atom: Atom, v: int) -> bool:
    return atom[1] == v or (atom[0] != "L" and atom[2] == v)


@lru_cache(maxsize=None)
def atom_poly(atom: Atom) -> Poly:
    kind, i, j = atom
    if kind == "L":
        return Poly.var(i) - Poly.const(j)
    if kind == "P":
        return Poly.monomial({i: 1, j: 1}) - Poly.const(1)
    if kind == "S":
        return Poly.var(i) + Poly.var(j)
    if kind == "D":
        return Poly.var(i) - Poly.var(j)
    raise ValueError(f"unknown atom {atom!r}")


@lru_cache(maxsize=None)
def atom_power(atom: Atom, k: int) -> Poly:
    if k == 0:
        return Poly.const(1)
    if k == 1:
        return atom_poly(atom)
    half = atom_power(atom, k // 2)
    out = half * half
    if k % 2:
        out = out * atom_poly(atom)
    return out


def atom_str(atom: Atom, names=None) -> str:
    def nm(i):
        return names[i] if names else f"z{i}"

    kind, i, j = atom
    if kind == "L":
        if j == 0:
            return nm(i)
        return f"({nm(i)} - {j})" if j > 0 else f"({nm(i)} + {-j})"
    if kind == "P":
        return f"({nm(i)}*{nm(j)} - 1)"
    if kind == "S":
        return f"({nm(i)} + {nm(j)})"
    return f"({nm(i)} - {nm(j)})"


class AtomMonomial:
    """``coeff * prod(atom ** k)`` with integer (possibly negative) ``k``."""

    __slots__ = ("coeff", "powers")

    def __init__(self, coeff=1, powers: Optional[Dict[Atom, int]] = None):
        self.coeff = Q(coeff)
        self.powers = {a: k for a, k in (powers or {}).items() if k}

    @staticmethod
    def of(atom: Atom, k: int = 1) -> "AtomMonomial":
        return AtomMonomial(1, {atom: k})

    def is_zero(self) -> bool:
        return not self.coeff

    def __mul__(self, other) -> "AtomMonomial":
        if not isinstance(other, AtomMonomial):
            return AtomMonomial(self.coeff * Q(other), self.powers)
        p = dict(self.powers)
        for a, k in other.powers.items():
            p[a] = p.get(a, 0) + k
        return AtomMonomial(self.coeff * other.coeff, p)

    __rmul__ = __mul__

    def inverse(self) -> "AtomMonomial":
        if not self.coeff:
            raise ZeroDivisionError("inverse of zero")
        return AtomMonomial(1 / self.coeff, {a: -k for a, k in self.powers.items()})

    def __pow__(self, k: int) -> "AtomMonomial":
        if k < 0:
            return self.inverse() ** (-k)
        return AtomMonomial(self.coeff ** k, {a: e * k for a, e in self.powers.items()})

    def __truediv__(self, other: "AtomMonomial") -> "AtomMonomial":
        return self * other.inverse()

    def __repr__(self):
        return f"AtomMonomial({self.coeff}, {self.powers})"


ZERO_AM = AtomMonomial(0)


def make_atom(kind: str, i: int, j) -> AtomMonomial:
    """Normalized atom monomial for ``kind`` applied to ``(i, j)``."""
    if kind == "L":
        return AtomMonomial.of(("L", i, Q(j)))
    if kind == "D":
        if i == j:
            return ZERO_AM
        if i < j:
            return AtomMonomial.of(("D", i, j))
        return AtomMonomial(-1, {("D", j, i): 1})
    if kind == "S":
        if i == j:
            return AtomMonomial(2, {L(i): 1})
        return AtomMonomial.of(("S", min(i, j), max(i, j)))
    if kind == "P":
        if i == j:
            return AtomMonomial(1, {L(i, 1): 1, L(i, -1): 1})
        return AtomMonomial.of(("P", min(i, j), max(i, j)))
    raise ValueError(kind)


def lin_const_atom(i: int, a, b) -> AtomMonomial:
    """Factor ``a * z_i + b`` (rationals) into an atom monomial."""
    a, b = Q(a), Q(b)
    if not a:
        return AtomMonomial(b)
    return AtomMonomial(a, {L(i, -b / a): 1})


def rename_atom(atom: Atom, mapping) -> AtomMonomial:
    kind, i, j = atom
    ni = mapping.get(i, i)
    if kind == "L":
        return make_atom("L", ni, j)
    return make_atom(kind, ni, mapping.get(j, j))


def subs_atom(atom: Atom, v: int, c) -> AtomMonomial:
    """Value of ``atom`` at ``z_v = c``; zero result means a pole."""
    c = Q(c)
    kind, i, j = atom
    if kind == "L":
        return AtomMonomial(c - j)
    other = j if i == v else i
    if kind == "P":
        return lin_const_atom(other, c, -1)
    if kind == "S":
        return lin_const_atom(other, 1, c)
    # D: z_i - z_j
    if i == v:
        return lin_const_atom(other, -1, c)
    return lin_const_atom(other, 1, -c)


@dataclass(frozen=True)
class Point:
    """Expansion point for a variable.

    ``kind`` is one of ``"const"`` (rational ``value``), ``"inf"``, or a
    parametric point given by another variable ``value``: ``"inv"`` is
    ``1/z_value``, ``"neg"`` is ``-z_value`` and ``"id"`` is ``z_value``.
    """

    kind: str
    value: object = None

    @staticmethod
    def const(c) -> "Point":
        return Point("const", Q(c))

    def __str__(self):
        if self.kind == "const":
            return str(self.value)
        if self.kind == "inf":
            return "oo"
        return {"inv": "1/z{}", "neg": "-z{}", "id": "z{}"}[self.kind].format(self.value)


INF = Point("inf")


def expand_atom(atom: Atom, v: int, pt: Point):
    """Write ``atom(z_v = pt + u)`` as ``u**upow * (A + B*u)``.

    Returns ``(A, B, upow)`` with ``A`` a nonzero :class:`AtomMonomial` and
    ``B`` an :class:`AtomMonomial` (possibly zero).  At ``"inf"`` the
    substitution is ``z_v = 1/u``.
    """
    kind, i, j = atom
    one = AtomMonomial(1)
    if kind == "L":
        c = j
        if pt.kind == "const":
            if pt.value == c:
                return one, ZERO_AM, 1
            return AtomMonomial(pt.value - c), one, 0
        if pt.kind == "inf":
            return one, AtomMonomial(-c), -1
        k = pt.value
        if pt.kind == "inv":  # 1/z_k - c = (1 - c z_k)/z_k
            return lin_const_atom(k, -c, 1) * AtomMonomial.of(L(k), -1), one, 0
        if pt.kind == "neg":
            return lin_const_atom(k, -1, -c), one, 0
        return lin_const_atom(k, 1, -c), one, 0
    other = j if i == v else i
    if pt.kind == "inf":
        if kind == "P":  # (z_o - u)/u
            return AtomMonomial.of(L(other)), AtomMonomial(-1), -1
        if kind == "S":  # (1 + z_o u)/u
            return one, AtomMonomial.of(L(other)), -1
        if i == v:  # (1 - z_o u)/u
            return one, AtomMonomial(-1, {L(other): 1}), -1
        return AtomMonomial(-1), AtomMonomial.of(L(other)), -1
    if pt.kind == "const":
        c = pt.value
        if kind == "P":
            return lin_const_atom(other, c, -1), AtomMonomial.of(L(other)), 0
        if kind == "S":
            return lin_const_atom(other, 1, c), one, 0
        if i == v:
            return lin_const_atom(other, -1, c), one, 0
        return lin_const_atom(other, 1, -c), AtomMonomial(-1), 0
    k = pt.value
    zk = AtomMonomial.of(L(k))
    if pt.kind == "inv":
        if kind == "P":  # z_o/z_k - 1 + z_o u
            if other == k:
                return zk, ZERO_AM, 1
            return make_atom("D", other, k) * zk.inverse(), AtomMonomial.of(L(other)), 0
        if kind == "D":
            # z_v - z_o -> (1 - z_k z_o)/z_k ; z_o - z_v -> (z_k z_o - 1)/z_k
            sgn = -1 if i == v else 1
            return make_atom("P", k, other) * zk.inverse() * sgn, AtomMonomial(-sgn), 0
        raise ValueError(f"atom {atom} cannot be expanded at {pt}")
    if pt.kind == "neg":
        if kind == "S":  # z_o - z_k + u
            if other == k:
                return one, ZERO_AM, 1
            return make_atom("D", other, k), one, 0
        if kind == "D":
            # z_v - z_o -> -(z_k + z_o) ; z_o - z_v -> z_o + z_k
            if i == v:
                return make_atom("S", k, other) * -1, one, 0
            return make_atom("S", k, other), AtomMonomial(-1), 0
        raise ValueError(f"atom {atom} cannot be expanded at {pt}")
    # "id": z_v = z_k + u
    if kind == "D":
        if other == k:
            return (one, ZERO_AM, 1) if i == v else (AtomMonomial(-1), ZERO_AM, 1)
        if i == v:
            return make_atom("D", k, other), one, 0
        return make_atom("D", other, k), AtomMonomial(-1), 0
    if kind == "S":
        return make_atom("S", k, other), one, 0
    return make_atom("P", k, other), AtomMonomial.of(L(other)), 0


def atom_root(atom: Atom, v: int) -> Point:
    """The point where ``atom`` vanishes as a function of ``z_v``."""
    kind, i, j = atom
    if kind == "L":
        return Point.const(j)
    other = j if i == v else i
    return Point({"P": "inv", "S": "neg", "D": "id"}[kind], other)


def divide_by_atom(poly: Poly, atom: Atom) -> Optional[Poly]:
    """Exact quotient ``poly / atom`` or ``None`` when not divisible."""
    if poly.is_zero():
        return poly
    return poly.divexact(atom_poly(atom))


def _shift_down(poly: Poly, i: int) -> Poly:
    return poly.divexact(Poly.var(i))


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def factor_poly(poly: Poly) -> AtomMonomial:
    """Factor ``poly`` completely into atoms, or raise ``ValueError``.

    Univariate factors are found by the rational root test; bivariate atoms
    are tried among the variables present.
    """
    if poly.is_zero():
        raise ZeroDivisionError("cannot factor zero")
    powers: Dict[Atom, int] = {}
    rest = poly
    variables = sorted(rest.variables())
    for i in variables:
        while rest.min_degree(i) > 0:
            rest = _shift_down(rest, i)
            powers[L(i)] = powers.get(L(i), 0) + 1
    for a in variables:
        for b in variables:
            if a >= b:
                continue
            for kind in ("P", "S", "D"):
                atom = (kind, a, b)
                while True:
                    q = divide_by_atom(rest, atom)
                    if q is None:
                        break
                    rest = q
                    powers[atom] = powers.get(atom, 0) + 1
    for i in sorted(rest.variables()):
        while rest.has_var(i):
            if len(rest.variables()) != 1:
                raise ValueError(f"cannot factor {poly!r} into atoms")
            root = _rational_root(rest, i)
            if root is None:
                raise ValueError(f"cannot factor {poly!r} into atoms")
            rest = divide_by_atom(rest, L(i, root))
            powers[L(i, root)] = powers.get(L(i, root), 0) + 1
    return AtomMonomial(rest.const_value(), powers)


def _rational_root(poly: Poly, i: int) -> Optional[Rational]:
    coeffs = {k: p.const_value() for k, p in poly.coeffs_in(i).items()}
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gmpy2.gcd(den, c.denominator)
    ints = {k: int(c * den) for k, c in coeffs.items()}
    lo = min(ints)
    hi = max(ints)
    if lo > 0:
        return Q(0)
    for p in _divisors(ints[0]):
        for q in _divisors(ints[hi]):
            for sgn in (1, -1):
                r = Q(sgn * p, q)
                if sum(c * r ** k for k, c in ints.items()) == 0:
                    return r
    return None
