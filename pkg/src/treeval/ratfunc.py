"""Rational functions over an arbitrary coefficient field.

Elements are reduced fractions of dense polynomials: numerator and
denominator coprime, denominator monic.  Works over number fields and
over finite fields alike (anything satisfying the field-descriptor
protocol of :mod:`treeval.polys`).
"""

from __future__ import annotations

from fractions import Fraction

from treeval.polys import Poly


class RatFuncField:
    """F(t) as a field descriptor whose elements are RatFunc."""

    def __init__(self, coeff_field, variable: str = "t"):
        self.coeff_field = coeff_field
        self.variable = variable
        self.char = getattr(coeff_field, "char", 0)
        self.zero = RatFunc(self, Poly.zero(coeff_field), Poly.one(coeff_field))
        self.one = RatFunc(self, Poly.one(coeff_field), Poly.one(coeff_field))
        self.gen = RatFunc(self, Poly.x(coeff_field), Poly.one(coeff_field))

    def __repr__(self):
        return f"RatFuncField({self.coeff_field!r}, {self.variable})"

    def __eq__(self, other):
        return (
            isinstance(other, RatFuncField)
            and self.coeff_field == other.coeff_field
            and self.variable == other.variable
        )

    def __hash__(self):
        return hash(("ratfunc", self.variable))

    def coerce(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.field == self:
                return x
            raise TypeError("rational function from a different field")
        if isinstance(x, Poly):
            return RatFunc(self, x, Poly.one(self.coeff_field))
        # constants, including ints/Fractions and coefficient-field elements
        c = self.coeff_field.coerce(x)
        return RatFunc(self, Poly.const(self.coeff_field, c), Poly.one(self.coeff_field))

    def inv(self, x: "RatFunc") -> "RatFunc":
        if x.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self, x.den, x.num)

    def from_coeff_polys(self, num: Poly, den: Poly | None = None) -> "RatFunc":
        return RatFunc(self, num, den if den is not None else Poly.one(self.coeff_field))


class RatFunc:
    """Reduced fraction num/den of polynomials over a coefficient field."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: RatFuncField, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        k = field.coeff_field
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.leading()
        if lc != k.one:
            inv = k.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        self.field = field
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def as_constant(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = self.field.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        if self.is_polynomial():
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"

    def _coerced(self, other):
        if isinstance(other, RatFunc):
            return other
        try:
            return self.field.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RatFunc(
            self.field, self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.field.inv(self) ** (-n)
        return RatFunc(self.field, self.num**n, self.den**n)

    def scale_coeffs(self, fn, target_field: RatFuncField) -> "RatFunc":
        """Map coefficient-wise into another rational function field."""
        k = target_field.coeff_field
        return RatFunc(
            target_field,
            self.num.map_coeffs(k, fn),
            self.den.map_coeffs(k, fn),
        )


def poly_ord_at(f: Poly, g: Poly) -> int:
    """Largest k with g^k dividing f (f nonzero, g nonconstant)."""
    if f.is_zero():
        raise ValueError("zero polynomial has infinite order")
    k = 0
    while True:
        q, r = f.divmod(g)
        if not r.is_zero():
            return k
        f = q
        k += 1


def ord_at_place(x: RatFunc, place: Poly) -> int:
    """Order of x at the finite place given by a monic irreducible poly."""
    return poly_ord_at(x.num, place) - poly_ord_at(x.den, place)


def ord_at_infinity(x: RatFunc) -> int:
    """Order of x at the degree place: deg(den) - deg(num)."""
    return x.den.degree - x.num.degree
