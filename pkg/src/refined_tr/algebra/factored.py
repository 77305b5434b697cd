"""Rational functions with denominators factored over the atom set."""

from __future__ import annotations

from typing import Dict, Mapping, Optional

from .atoms import (
    Atom,
    AtomMonomial,
    atom_poly,
    atom_power,
    atom_str,
    atom_vars,
    divide_by_atom,
    factor_poly,
    has_var,
    rename_atom,
    subs_atom,
)
from .poly import Poly
from .rational import Q, Rational


def _den_key(den: Mapping[Atom, int]):
    return tuple(sorted(den.items()))


class FactoredRational:
    """``num / prod(atom ** k)`` with ``k > 0``.

    Zero always carries an empty denominator.  Arithmetic does not cancel
    common atoms; call :meth:`normalize` on final results.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Dict[Atom, int]] = None):
        self.num = num
        self.den = {} if num.is_zero() or not den else {a: k for a, k in den.items() if k}

    # construction
    @staticmethod
    def const(c) -> "FactoredRational":
        return FactoredRational(Poly.const(c))

    @staticmethod
    def var(i: int, power: int = 1, coeff=1) -> "FactoredRational":
        if power >= 0:
            return FactoredRational(Poly.var(i, power, coeff))
        return FactoredRational(Poly.const(coeff), {("L", i, Q(0)): -power})

    @staticmethod
    def from_poly(p: Poly) -> "FactoredRational":
        return FactoredRational(p)

    @staticmethod
    def from_atoms(am: AtomMonomial) -> "FactoredRational":
        num = Poly.const(am.coeff)
        den = {}
        for a, k in am.powers.items():
            if k > 0:
                num = num * atom_power(a, k)
            else:
                den[a] = -k
        return FactoredRational(num, den)

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def variables(self) -> set:
        out = set(self.num.variables())
        for a in self.den:
            out.update(atom_vars(a))
        return out

    def is_const(self) -> bool:
        return self.num.is_const() and not self.den

    def const_value(self) -> Rational:
        if self.den:
            raise ValueError("not a constant")
        return self.num.const_value()

    # arithmetic
    def __add__(self, other) -> "FactoredRational":
        if not isinstance(other, FactoredRational):
            other = FactoredRational.const(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return FactoredRational(self.num + other.num, self.den)
        lcm = dict(self.den)
        for a, k in other.den.items():
            if k > lcm.get(a, 0):
                lcm[a] = k
        return FactoredRational(self._lift(lcm) + other._lift(lcm), lcm)

    __radd__ = __add__

    def _lift(self, lcm) -> Poly:
        mult = None
        for a, k in lcm.items():
            e = k - self.den.get(a, 0)
            if e:
                p = atom_power(a, e)
                mult = p if mult is None else mult * p
        return self.num if mult is None else self.num * mult

    def __neg__(self) -> "FactoredRational":
        return FactoredRational(-self.num, self.den)

    def __sub__(self, other) -> "FactoredRational":
        if not isinstance(other, FactoredRational):
            other = FactoredRational.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "FactoredRational":
        return (-self) + other

    def scale(self, c) -> "FactoredRational":
        return FactoredRational(self.num.scale(c), self.den)

    def __mul__(self, other) -> "FactoredRational":
        if isinstance(other, AtomMonomial):
            return self.mul_atoms(other)
        if not isinstance(other, FactoredRational):
            return self.scale(other)
        if self.num.is_zero() or other.num.is_zero():
            return FactoredRational(Poly())
        den = dict(self.den)
        for a, k in other.den.items():
            den[a] = den.get(a, 0) + k
        return FactoredRational(self.num * other.num, den)

    __rmul__ = __mul__

    def mul_atoms(self, am: AtomMonomial) -> "FactoredRational":
        """Multiply by an atom monomial, cancelling against the denominator."""
        if self.num.is_zero() or not am.coeff:
            return FactoredRational(Poly())
        den = dict(self.den)
        num = self.num.scale(am.coeff) if am.coeff != 1 else self.num
        for a, k in am.powers.items():
            if k < 0:
                den[a] = den.get(a, 0) - k
                continue
            have = den.get(a, 0)
            cancel = min(have, k)
            if cancel:
                den[a] = have - cancel
            if k > cancel:
                num = num * atom_power(a, k - cancel)
        return FactoredRational(num, den)

    def __pow__(self, k: int) -> "FactoredRational":
        if k < 0:
            return self.inverse() ** (-k)
        return FactoredRational(self.num ** k, {a: e * k for a, e in self.den.items()})

    def inverse(self) -> "FactoredRational":
        """Inverse; the numerator must factor completely into atoms."""
        am = factor_poly(self.num)
        out = FactoredRational(Poly.const(1))
        for a, k in self.den.items():
            out = FactoredRational(out.num * atom_power(a, k), out.den)
        return out.mul_atoms(am.inverse())

    def __truediv__(self, other) -> "FactoredRational":
        if isinstance(other, AtomMonomial):
            return self.mul_atoms(other.inverse())
        if not isinstance(other, FactoredRational):
            return self.scale(1 / Q(other))
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactoredRational):
            other = FactoredRational.const(other)
        return (self - other).num.is_zero()

    def __hash__(self):
        raise TypeError("FactoredRational is not hashable")

    # calculus and substitution
    def diff(self, i: int) -> "FactoredRational":
        """Partial derivative in ``z_i``."""
        involved = [a for a in self.den if has_var(a, i)]
        if not involved:
            return FactoredRational(self.num.diff(i), self.den)
        # d(N / prod a^k) = (N' prod a - N sum k a' prod_{b != a} b) / prod a^{k+1}
        prod_all = Poly.const(1)
        for a in involved:
            prod_all = prod_all * atom_poly(a)
        num = self.num.diff(i) * prod_all
        for a in involved:
            rest = Poly.const(1)
            for b in involved:
                if b != a:
                    rest = rest * atom_poly(b)
            da = atom_poly(a).diff(i)
            num = num - (self.num * da * rest).scale(self.den[a])
        den = dict(self.den)
        for a in involved:
            den[a] += 1
        return FactoredRational(num, den)

    def subs(self, i: int, c) -> "FactoredRational":
        """Substitute the rational ``c`` for ``z_i``."""
        out = FactoredRational(self.num.subs(i, c), {a: k for a, k in self.den.items() if not has_var(a, i)})
        am = AtomMonomial(1)
        for a, k in self.den.items():
            if has_var(a, i):
                v = subs_atom(a, i, c)
                if v.is_zero():
                    raise ZeroDivisionError(f"pole at z{i} = {c}")
                am = am * v ** (-k)
        return out.mul_atoms(am)

    def mobius(self, i: int, kind: str) -> "FactoredRational":
        """Substitute ``z_i -> 1/z_i`` (``kind="inv"``) or ``z_i -> -z_i`` (``"neg"``)."""
        from .atoms import L, lin_const_atom, make_atom

        am = AtomMonomial(1)
        if kind == "neg":
            num = self.num.subs_poly(i, Poly.var(i, coeff=-1))
            for a, k in self.den.items():
                if not has_var(a, i):
                    continue
                kd, p, q = a
                if kd == "L":
                    v = AtomMonomial(-1, {L(i, -q): 1})
                elif kd == "S":
                    v = make_atom("D", q if p == i else p, i)
                elif kd == "D":
                    o = q if p == i else p
                    v = make_atom("S", i, o) * (-1 if p == i else 1)
                else:
                    raise ValueError(f"atom {atom_str(a)} is not closed under z -> -z")
                am = am * v ** (-k)
        elif kind == "inv":
            coeffs = self.num.coeffs_in(i)
            dmax = max(coeffs) if coeffs else 0
            num = Poly.from_coeffs(i, {dmax - d: c for d, c in coeffs.items()})
            am = am * AtomMonomial.of(L(i), -dmax)
            for a, k in self.den.items():
                if not has_var(a, i):
                    continue
                kd, p, q = a
                o = q if p == i else p
                if kd == "L":
                    v = lin_const_atom(i, -q, 1)
                elif kd == "P":
                    v = make_atom("D", o, i)
                elif kd == "D":
                    v = make_atom("P", i, o) * (-1 if p == i else 1)
                else:
                    raise ValueError(f"atom {atom_str(a)} is not closed under z -> 1/z")
                am = am * (v * AtomMonomial.of(L(i), -1)) ** (-k)
        else:
            raise ValueError(kind)
        return FactoredRational(num, {a: k for a, k in self.den.items() if not has_var(a, i)}).mul_atoms(am)

    def rename(self, mapping: Mapping[int, int]) -> "FactoredRational":
        """Rename variables; colliding variables are identified."""
        am = AtomMonomial(1)
        for a, k in self.den.items():
            v = rename_atom(a, mapping)
            if v.is_zero():
                raise ZeroDivisionError(f"renaming {mapping} hits the pole {atom_str(a)}")
            am = am * v ** (-k)
        return FactoredRational(self.num.rename(mapping)).mul_atoms(am)

    def scale_vars(self, lam, variables) -> "FactoredRational":
        """Substitute ``z_i -> lam * z_i`` for ``i`` in ``variables``.

        Only atoms homogeneous of degree one (``z_i``, ``z_i + z_j``, ``z_i - z_j``)
        may involve the scaled variables.
        """
        lam = Q(lam)
        vs = set(variables)
        gens = {i: Poly.var(i, coeff=lam) for i in vs}
        num = self.num
        for i, g in gens.items():
            num = num.subs_poly(i, g)
        factor = Q(1)
        for a, k in self.den.items():
            touched = [v for v in atom_vars(a) if v in vs]
            if not touched:
                continue
            kd = a[0]
            homogeneous = (kd == "L" and a[2] == 0) or (kd in ("S", "D") and set(atom_vars(a)) <= vs)
            if not homogeneous:
                raise ValueError(f"atom {atom_str(a)} is not homogeneous in the scaled variables")
            factor *= lam ** k
        return FactoredRational(num.scale(1 / factor), dict(self.den))

    def evaluate(self, values: Mapping[int, object]) -> Rational:
        d = Q(1)
        for a, k in self.den.items():
            d *= atom_poly(a).evaluate(values) ** k
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(values) / d

    def partial_evaluate(self, values: Mapping[int, object]) -> "FactoredRational":
        out = self
        for i, c in values.items():
            out = out.subs(i, c)
        return out

    def normalize(self) -> "FactoredRational":
        """Cancel every atom that divides the numerator."""
        if self.num.is_zero():
            return FactoredRational(Poly())
        num = self.num
        den = dict(self.den)
        for a in sorted(den):
            while den[a]:
                q = divide_by_atom(num, a)
                if q is None:
                    break
                num = q
                den[a] -= 1
        return FactoredRational(num, den)

    def den_poly(self) -> Poly:
        out = Poly.const(1)
        for a, k in self.den.items():
            out = out * atom_power(a, k)
        return out

    # display
    def to_str(self, names=None) -> str:
        num = self.num.to_str(names)
        if not self.den:
            return num
        parts = []
        for a, k in sorted(self.den.items()):
            s = atom_str(a, names)
            parts.append(s if k == 1 else f"{s}^{k}")
        return f"({num}) / ({'*'.join(parts)})"

    def __repr__(self):
        return f"FR[{self.to_str()}]"


FR = FactoredRational


def fr_sum(items) -> FactoredRational:
    """Sum many terms: numerators sharing a denominator are added first, then
    each group is lifted once to the common denominator."""
    groups: Dict[tuple, list] = {}
    for f in items:
        if f.num.is_zero():
            continue
        key = _den_key(f.den)
        if key in groups:
            groups[key][1] = groups[key][1] + f.num
        else:
            groups[key] = [f.den, f.num]
    if not groups:
        return FactoredRational(Poly())
    lcm: Dict[Atom, int] = {}
    for den, _ in groups.values():
        for a, k in den.items():
            if k > lcm.get(a, 0):
                lcm[a] = k
    total = Poly()
    for den, num in groups.values():
        if not num.is_zero():
            total = total + FactoredRational(num, den)._lift(lcm)
    return FactoredRational(total, lcm)
