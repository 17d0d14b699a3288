"""Integer Laurent polynomials in one variable q, with exact arithmetic."""
from __future__ import annotations

from functools import lru_cache


class LaurentPoly:
    """Sum of c_k q^k over finitely many integers k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs}
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def q(cls, k=1):
        return cls({k: 1})

    @staticmethod
    def lift(x):
        return x if isinstance(x, LaurentPoly) else LaurentPoly(int(x))

    def __add__(self, other):
        if not isinstance(other, (int, LaurentPoly)):
            return NotImplemented
        other = LaurentPoly.lift(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.lift(other))

    def __rsub__(self, other):
        return LaurentPoly.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, (int, LaurentPoly)):
            return NotImplemented
        other = LaurentPoly.lift(other)
        out = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ZeroDivisionError("only monomials are invertible")
            (k, v), = self.coeffs.items()
            if v not in (1, -1):
                raise ZeroDivisionError("only unit monomials are invertible")
            return LaurentPoly({-k * -n: v ** -n})
        out = LaurentPoly(1)
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other):
        """Quotient and remainder, dividing from the top degree down."""
        other = LaurentPoly.lift(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        top = max(other.coeffs)
        lead = other.coeffs[top]
        low = min(other.coeffs)
        rem = LaurentPoly(self.coeffs)
        quo = {}
        while rem.coeffs and max(rem.coeffs) - top >= min(rem.coeffs) - low:
            k = max(rem.coeffs)
            c, r = divmod(rem.coeffs[k], lead)
            if r:
                break
            quo[k - top] = c
            rem = rem - LaurentPoly({k - top: c}) * other
        return LaurentPoly(quo), rem

    def __truediv__(self, other):
        quo, rem = self.divmod(other)
        if rem.coeffs:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return quo

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            v = self.coeffs[k]
            if k == 0:
                parts.append(f"{v}")
            else:
                mono = "q" if k == 1 else f"q^{k}"
                parts.append(mono if v == 1 else f"-{mono}" if v == -1 else f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def evaluate(self, x):
        return sum(v * x ** k for k, v in self.coeffs.items())


q = LaurentPoly.q()


@lru_cache(maxsize=None)
def qint(n: int, d: int = 1) -> LaurentPoly:
    """[n] in the variable q^d: (q^dn - q^-dn) / (q^d - q^-d)."""
    if n < 0:
        return -qint(-n, d)
    return LaurentPoly({d * (n - 1 - 2 * k): 1 for k in range(n)})


@lru_cache(maxsize=None)
def qfactorial(n: int, d: int = 1) -> LaurentPoly:
    out = LaurentPoly(1)
    for i in range(1, n + 1):
        out = out * qint(i, d)
    return out


def qbinomial(n: int, r: int, d: int = 1) -> LaurentPoly:
    return qfactorial(n, d) / (qfactorial(r, d) * qfactorial(n - r, d))
