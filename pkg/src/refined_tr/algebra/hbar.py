"""Scalars over Q[L, Pi] and truncated hbar-series.

``L`` stands for ``log m0`` and ``Pi`` for ``pi*i``; both are formal.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Tuple

from .rational import Q, Rational, binomial, rational_str


class SymbolicScalar:
    """Polynomial in the formal symbols ``L`` and ``Pi`` with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], object] | None = None):
        self.terms: Dict[Tuple[int, int], Rational] = {}
        for key, c in (terms or {}).items():
            c = Q(c)
            if c:
                self.terms[key] = c

    @staticmethod
    def const(c) -> "SymbolicScalar":
        return SymbolicScalar({(0, 0): c})

    @staticmethod
    def L(c=1) -> "SymbolicScalar":
        return SymbolicScalar({(1, 0): c})

    @staticmethod
    def Pi(c=1) -> "SymbolicScalar":
        return SymbolicScalar({(0, 1): c})

    @staticmethod
    def coerce(x) -> "SymbolicScalar":
        return x if isinstance(x, SymbolicScalar) else SymbolicScalar.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, l_pow: int = 0, pi_pow: int = 0) -> Rational:
        return self.terms.get((l_pow, pi_pow), Q(0))

    def l_free(self) -> bool:
        return all(a == 0 for a, _ in self.terms)

    def is_rational(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def rational_value(self) -> Rational:
        if not self.is_rational():
            raise ValueError(f"{self} is not a pure rational")
        return self.coefficient()

    def __add__(self, other) -> "SymbolicScalar":
        other = SymbolicScalar.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return SymbolicScalar(out)

    __radd__ = __add__

    def __neg__(self) -> "SymbolicScalar":
        return SymbolicScalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "SymbolicScalar":
        return self + (-SymbolicScalar.coerce(other))

    def __rsub__(self, other) -> "SymbolicScalar":
        return SymbolicScalar.coerce(other) - self

    def __mul__(self, other) -> "SymbolicScalar":
        if not isinstance(other, SymbolicScalar):
            c = Q(other)
            return SymbolicScalar({k: v * c for k, v in self.terms.items()})
        out: Dict[Tuple[int, int], Rational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return SymbolicScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "SymbolicScalar":
        return self * (1 / Q(c))

    def __eq__(self, other) -> bool:
        return (self - SymbolicScalar.coerce(other)).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_json(self) -> Dict[str, str]:
        """``{"1": ..., "L": ..., "L^2*Pi": ...}`` with rational strings."""
        out = {}
        for (a, b), c in sorted(self.terms.items()):
            out[_mono_name(a, b)] = rational_str(c)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            name = _mono_name(a, b)
            parts.append(rational_str(c) if name == "1" else f"{rational_str(c)}*{name}")
        return " + ".join(parts)

    __repr__ = __str__


def _mono_name(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("L" if a == 1 else f"L^{a}")
    if b:
        parts.append("Pi" if b == 1 else f"Pi^{b}")
    return "*".join(parts) or "1"


class HbarSeries:
    """``sum_k c_k hbar^k`` known through ``hbar^K`` (``K = order``)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Mapping[int, object] | None = None):
        self.order = order
        self.coeffs: Dict[int, object] = {}
        for k, c in (coeffs or {}).items():
            if k > order:
                continue
            if not isinstance(c, SymbolicScalar) and not hasattr(c, "num"):
                c = SymbolicScalar.const(c)
            if not c.is_zero():
                self.coeffs[k] = c

    def coefficient(self, k: int):
        if k > self.order:
            raise ValueError(f"hbar^{k} beyond truncation order {self.order}")
        return self.coeffs.get(k, SymbolicScalar())

    def min_power(self) -> int:
        return min(self.coeffs) if self.coeffs else self.order + 1

    def truncate(self, order: int) -> "HbarSeries":
        return HbarSeries(min(order, self.order), self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other) -> "HbarSeries":
        if not isinstance(other, HbarSeries):
            other = HbarSeries(self.order, {0: other})
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return HbarSeries(order, out)

    __radd__ = __add__

    def __neg__(self) -> "HbarSeries":
        return HbarSeries(self.order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other) -> "HbarSeries":
        if not isinstance(other, HbarSeries):
            other = HbarSeries(self.order, {0: other})
        return self + (-other)

    def __mul__(self, other) -> "HbarSeries":
        if not isinstance(other, HbarSeries):
            return HbarSeries(self.order, {k: c * other for k, c in self.coeffs.items()})
        # a truncation error at order K_a times the lowest power of b
        order = min(self.order + other.min_power(), other.order + self.min_power())
        if not self.coeffs or not other.coeffs:
            order = min(self.order, other.order)
        out: Dict[int, object] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if k <= order:
                    out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return HbarSeries(order, out)

    __rmul__ = __mul__

    def shift_power(self, p: int) -> "HbarSeries":
        """Multiply by ``hbar^p``."""
        return HbarSeries(self.order + p, {k + p: c for k, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("HbarSeries is not hashable")

    def to_json(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "coefficients": {str(k): c.to_json() for k, c in sorted(self.coeffs.items())},
        }

    def __repr__(self):
        body = " + ".join(f"({c})*hbar^{k}" for k, c in sorted(self.coeffs.items()))
        return f"HbarSeries({body or '0'}; O(hbar^{self.order + 1}))"


def log1p_series(x: Rational, order: int) -> HbarSeries:
    """``log(1 + x*hbar)`` through ``hbar^order``."""
    return HbarSeries(order, {k: Q((-1) ** (k + 1)) * x ** k / k for k in range(1, order + 1)})


class MassFunction:
    """Finite sum ``sum A * m^d * (log m)^e`` with ``e`` in {0, 1}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], object] | None = None):
        self.terms: Dict[Tuple[int, int], Rational] = {}
        for (d, e), c in (terms or {}).items():
            if e not in (0, 1):
                raise ValueError("only (log m)^0 and (log m)^1 are supported")
            c = Q(c)
            if c:
                self.terms[(d, e)] = self.terms.get((d, e), 0) + c

    @staticmethod
    def power(d: int, c=1) -> "MassFunction":
        return MassFunction({(d, 0): c})

    @staticmethod
    def log(c=1) -> "MassFunction":
        return MassFunction({(0, 1): c})

    def __add__(self, other: "MassFunction") -> "MassFunction":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MassFunction(out)

    def __mul__(self, c) -> "MassFunction":
        c = Q(c)
        return MassFunction({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def derivative(self, times: int = 1) -> "MassFunction":
        out = self
        for _ in range(times):
            acc: Dict[Tuple[int, int], Rational] = {}
            for (d, e), c in out.terms.items():
                if d:
                    acc[(d - 1, e)] = acc.get((d - 1, e), 0) + c * d
                if e:
                    acc[(d - 1, 0)] = acc.get((d - 1, 0), 0) + c
            out = MassFunction(acc)
        return out

    def evaluate(self, m0) -> SymbolicScalar:
        m0 = Q(m0)
        if not m0:
            raise ValueError("m0 must be nonzero")
        out = SymbolicScalar()
        for (d, e), c in self.terms.items():
            v = c * m0 ** d
            out = out + (SymbolicScalar.L(v) if e else SymbolicScalar.const(v))
        return out

    def shifted(self, m0, c, order: int) -> HbarSeries:
        """``self(m0 + c*hbar)`` as an hbar-series through ``hbar^order``."""
        m0, c = Q(m0), Q(c)
        if not m0:
            raise ValueError("m0 must be nonzero")
        x = c / m0
        logs = log1p_series(x, order) + SymbolicScalar.L()
        out = HbarSeries(order)
        for (d, e), a in self.terms.items():
            pw = HbarSeries(order, {k: a * m0 ** d * binomial(d, k) * x ** k for k in range(order + 1)})
            out = out + (pw * logs if e else pw)
        return out


def hbar_compose_shift(F: Mapping[int, MassFunction], m0, c, order: int) -> HbarSeries:
    """Expand ``sum_p hbar^p F_p(m0 + c*hbar)`` through ``hbar^order``."""
    out = HbarSeries(order)
    for p, f in F.items():
        if p > order:
            continue
        out = out + f.shifted(m0, c, order - p).shift_power(p)
    return out.truncate(order)


def series_sum(items: Iterable[HbarSeries], order: int) -> HbarSeries:
    out = HbarSeries(order)
    for s in items:
        out = out + s
    return out
