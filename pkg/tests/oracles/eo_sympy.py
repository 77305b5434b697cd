"""Unrefined Eynard-Orantin recursion in sympy.

Written against the textbook formula with the standard Bergman kernel
``dz dw/(z-w)^2``; shares no code with the engine.
"""

import itertools

import sympy as sp


def curve_data(name, mass=None):
    z = sp.Symbol("z")
    if name == "Weber":
        x, y, sig, R = mass * (z + 1 / z), mass * (z - 1 / z) / 2, (lambda w: 1 / w), [1, -1]
    elif name == "Whittaker":
        x, y, sig, R = mass * (z - 1) ** 2 / z, (z + 1) / (2 * (z - 1)), (lambda w: 1 / w), [1, -1]
    elif name == "Airy":
        x, y, sig, R = z**2, z, (lambda w: -w), [0]
    elif name == "DegenerateBessel":
        x, y, sig, R = z**2, 1 / (2 * z), (lambda w: -w), [0]
    else:
        raise ValueError(name)
    return z, x, y, sig, R


def residue(f, z, r):
    """Residue of a rational function at a finite point by Taylor extraction."""
    u = sp.Symbol("u")
    num, den = sp.fraction(sp.cancel(sp.together(f.subs(z, r + u))))
    dp = sp.Poly(den, u)
    k = 0
    while dp.eval(0) == 0:
        dp = sp.Poly(sp.quo(dp.as_expr(), u), u)
        k += 1
    if k == 0:
        return sp.Integer(0)
    h = num / dp.as_expr()
    return sp.cancel(sp.diff(h, u, k - 1).subs(u, 0) / sp.factorial(k - 1))


class EynardOrantin:
    def __init__(self, name, mass=None):
        self.z, self.x, self.y, self.sig, self.R = curve_data(name, None if mass is None else sp.Rational(mass))
        self.Z = sp.symbols("z0:8")
        self.ydx = sp.cancel(self.y * sp.diff(self.x, self.z))

    def evaluate(self, g, n, point):
        """``omega_{g,n}`` at a rational point, with only the first slot kept symbolic."""
        pt = [sp.Rational(p) for p in point]
        a = self.Z[0]
        return sp.cancel(self._partial(g, tuple(pt[1:])).subs(a, pt[0]))

    def _partial(self, g, rest):
        """``omega_{g,1+len(rest)}(z0, rest)`` as a function of ``z0`` alone.

        Entries of ``rest`` are numbers or expressions in outer integration variables.
        """
        a, sig = self.Z[0], self.sig
        if g == 0 and len(rest) == 1:
            return 1 / (a - rest[0]) ** 2
        z = sp.Dummy("z")
        ydx = self.ydx.subs(self.z, z)
        jac = sp.diff(sig(z), z)
        K = (1 / (a - z) - 1 / (a - sig(z))) / (4 * ydx)
        body = 0
        if g >= 1:
            body += self._partial(g - 1, (sig(z),) + rest).subs(a, z) * jac
        idx = range(len(rest))
        for h in range(g + 1):
            for r in range(len(rest) + 1):
                for I in itertools.combinations(idx, r):
                    left = tuple(rest[i] for i in I)
                    right = tuple(rest[i] for i in idx if i not in I)
                    if (h, len(left)) == (0, 0) or (g - h, len(right)) == (0, 0):
                        continue
                    body += self._partial(h, left).subs(a, z) * self._partial(g - h, right).subs(a, sig(z)) * jac
        f = sp.together(K * body)
        return sp.cancel(sum(residue(f, z, r) for r in self.R))
