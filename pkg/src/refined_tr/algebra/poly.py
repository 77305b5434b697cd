"""Sparse multivariate polynomials over Q.

Thin wrapper around FLINT's ``fmpq_mpoly`` in a fixed context of
``MAXVARS`` variables ``z0 .. z{MAXVARS-1}``.  The wrapper keeps the rest of
the engine independent of the backend and exchanges coefficients as
``gmpy2.mpq``.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional

import flint

from .rational import Q, Rational, binomial

MAXVARS = 12
CTX = flint.fmpq_mpoly_ctx.get(("z", MAXVARS), "lex")
_GENS = CTX.gens()
_NAMES = [f"z{i}" for i in range(MAXVARS)]
_ZEROS = (0,) * MAXVARS


def to_fmpq(c) -> flint.fmpq:
    c = Q(c)
    return flint.fmpq(int(c.numerator), int(c.denominator))


def from_fmpq(c) -> Rational:
    return Q(int(c.p), int(c.q))


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _check_var(i: int) -> None:
    if not 0 <= i < MAXVARS:
        raise OverflowError(f"variable index {i} outside 0..{MAXVARS - 1}")


def _exps(exps: Mapping[int, int]) -> tuple:
    e = [0] * MAXVARS
    for i, k in exps.items():
        _check_var(i)
        if k < 0:
            raise ValueError("negative exponent in a polynomial")
        e[i] += k
    return tuple(e)


class Poly:
    """Immutable sparse polynomial in ``z0 .. z{MAXVARS-1}``."""

    __slots__ = ("p",)

    def __init__(self, p: Optional[flint.fmpq_mpoly] = None):
        self.p = CTX.from_dict({}) if p is None else p

    # construction
    @staticmethod
    def const(c) -> "Poly":
        return Poly(CTX.constant(to_fmpq(c)))

    @staticmethod
    def var(i: int, power: int = 1, coeff=1) -> "Poly":
        return Poly.monomial({i: power}, coeff)

    @staticmethod
    def monomial(exps: Mapping[int, int], coeff=1) -> "Poly":
        c = Q(coeff)
        if not c:
            return Poly()
        return Poly(CTX.from_dict({_exps(exps): to_fmpq(c)}))

    @staticmethod
    def from_dict(d: Mapping[tuple, object]) -> "Poly":
        """Build from ``{(e_0, e_1, ...): coeff}``."""
        out: Dict[tuple, Rational] = {}
        for exps, c in d.items():
            key = _exps(dict(enumerate(exps)))
            out[key] = out.get(key, 0) + Q(c)
        return Poly(CTX.from_dict({k: to_fmpq(c) for k, c in out.items() if c}))

    def to_dict(self) -> Dict[tuple, Rational]:
        return {m: from_fmpq(c) for m, c in self.p.to_dict().items()}

    # predicates
    def is_zero(self) -> bool:
        return self.p.is_zero()

    def is_const(self) -> bool:
        return self.p.is_constant()

    def const_value(self) -> Rational:
        if not self.p.is_constant():
            raise ValueError("polynomial is not constant")
        if self.p.is_zero():
            return Q(0)
        return from_fmpq(self.p.coeffs()[0])

    def __len__(self) -> int:
        return len(self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.p == other.p

    def __hash__(self):
        return hash(self.p)

    # arithmetic
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return Poly(self.p + other.p)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-self.p)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return Poly(self.p - other.p)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def scale(self, c) -> "Poly":
        c = Q(c)
        if c == 1:
            return self
        return Poly(self.p * to_fmpq(c))

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        return Poly(self.p * other.p)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        return Poly(self.p ** k)

    def mul_monomial(self, exps: Mapping[int, int], coeff=1) -> "Poly":
        return self * Poly.monomial(exps, coeff)

    def divexact(self, other: "Poly") -> Optional["Poly"]:
        """Exact quotient, or ``None`` if ``other`` does not divide ``self``."""
        q, r = divmod(self.p, other.p)
        return Poly(q) if r.is_zero() else None

    # structure
    def degree(self, i: int) -> int:
        """Degree in variable ``i`` (``-1`` for the zero polynomial)."""
        if self.p.is_zero():
            return -1
        return int(self.p.degrees()[i])

    def min_degree(self, i: int) -> int:
        if self.p.is_zero():
            return 0
        return int(min(m[i] for m in self.p.monoms()))

    def variables(self) -> set:
        if self.p.is_zero():
            return set()
        return {i for i, d in enumerate(self.p.degrees()) if d > 0}

    def has_var(self, i: int) -> bool:
        return not self.p.is_zero() and self.p.degrees()[i] > 0

    def coeffs_in(self, i: int) -> Dict[int, "Poly"]:
        """Split as ``sum_k C_k * z_i^k``; returns ``{k: C_k}``."""
        groups: Dict[int, dict] = {}
        for m, c in self.p.to_dict().items():
            k = int(m[i])
            if k:
                m = m[:i] + (0,) + m[i + 1:]
            groups.setdefault(k, {})[m] = c
        return {k: Poly(CTX.from_dict(t)) for k, t in groups.items()}

    def low_coeffs(self, i: int, count, skip_zeros: bool = False):
        """``(start, [C_start, ..])``: coefficients in ``z_i`` from ``start``.

        ``start`` is 0, or the lowest degree present when ``skip_zeros``.
        ``count`` is an int or a function of ``start``.
        """
        rest = self.p
        out = []
        start = 0
        zi = _GENS[i]
        name = _NAMES[i]
        if skip_zeros and rest.is_zero():
            raise ValueError("zero polynomial has no lowest degree")
        want = None if callable(count) else count
        while want is None or len(out) < want:
            if rest.is_zero():
                out.append(Poly())
                continue
            c = rest.subs({name: 0})
            if skip_zeros and not out and c.is_zero():
                start += 1
            else:
                if want is None:
                    want = count(start)
                    if want <= 0:
                        break
                out.append(Poly(c))
            rest = (rest - c) / zi
        return start, out

    def high_coeffs(self, i: int, count: int):
        """``[C_D, C_{D-1}, ..]`` for ``D = degree(i)``, ``count`` entries."""
        d = self.degree(i)
        if d < 0:
            return [Poly()] * count
        rev = self.p
        top = max(0, d - count + 1)
        if top:
            # strip the low part: coefficients of z_i^k, k < top, vanish after top derivatives
            q = rev
            for _ in range(top):
                q = q.derivative(i)
            scale = 1
            for k in range(2, top + 1):
                scale *= k
            rev = q * flint.fmpq(1, scale)
            # rev now holds sum_k C_k k!/(k-top)! / top! z_i^(k-top)
        _, low = Poly(rev).low_coeffs(i, d - top + 1)
        out = []
        for k in range(d, d - count, -1):
            if k < top:
                out.append(Poly())
                continue
            fac = 1
            for r in range(k - top + 1, k + 1):
                fac *= r
            out.append(low[k - top].scale(Q(_factorial(top), fac)))
        return out

    @staticmethod
    def from_coeffs(i: int, coeffs: Mapping[int, "Poly"]) -> "Poly":
        out = {}
        for k, poly in coeffs.items():
            if k < 0:
                raise ValueError("negative exponent in a polynomial")
            for m, c in poly.p.to_dict().items():
                if k:
                    m = m[:i] + (m[i] + k,) + m[i + 1:]
                out[m] = c
        return Poly(CTX.from_dict(out))

    def subs(self, i: int, value) -> "Poly":
        """Substitute the rational ``value`` for ``z_i``."""
        return Poly(self.p.subs({_NAMES[i]: to_fmpq(value)}))

    def subs_poly(self, i: int, value: "Poly") -> "Poly":
        gens = list(_GENS)
        gens[i] = value.p
        return Poly(self.p.compose(*gens))

    def diff(self, i: int) -> "Poly":
        return Poly(self.p.derivative(i))

    def rename(self, mapping: Mapping[int, int]) -> "Poly":
        """Rename variables; colliding variables multiply."""
        if not mapping:
            return self
        gens = list(_GENS)
        for a, b in mapping.items():
            _check_var(b)
            gens[a] = _GENS[b]
        return Poly(self.p.compose(*gens))

    def evaluate(self, values: Mapping[int, object]) -> Rational:
        args = [to_fmpq(values.get(i, 0)) for i in range(MAXVARS)]
        return from_fmpq(self.p(*args))

    def partial_evaluate(self, values: Mapping[int, object]) -> "Poly":
        if not values:
            return self
        return Poly(self.p.subs({_NAMES[i]: to_fmpq(v) for i, v in values.items()}))

    def shift_var(self, i: int, center: "Poly") -> "Poly":
        """``self(z_i = z_i + center)``."""
        gens = list(_GENS)
        gens[i] = _GENS[i] + center.p
        return Poly(self.p.compose(*gens))

    def taylor_shift(self, i: int, center) -> Dict[int, "Poly"]:
        """Coefficients of ``u^k`` in ``self(z_i = center + u)``."""
        return {k: c for k, c in self.shift_var(i, Poly.const(center)).coeffs_in(i).items() if not c.is_zero()}

    def content_sign(self) -> Rational:
        if self.p.is_zero():
            return Q(0)
        return from_fmpq(self.p.leading_coefficient())

    def to_str(self, names: Iterable[str] | None = None) -> str:
        if self.p.is_zero():
            return "0"
        names = list(names) if names is not None else _NAMES
        parts = []
        for m, c in sorted(self.p.to_dict().items(), reverse=True):
            c = from_fmpq(c)
            factors = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e]
            cs = str(c)
            if factors:
                mono = "*".join(factors)
                if c == 1:
                    body = mono
                elif c == -1:
                    body = "-" + mono
                else:
                    body = f"{cs}*{mono}" if "/" not in cs else f"({cs})*{mono}"
            else:
                body = cs if "/" not in cs else f"({cs})"
            parts.append(body)
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"


__all__ = ["Poly", "MAXVARS", "binomial", "to_fmpq", "from_fmpq"]
