"""Exact coefficient fields.

Three fields are supported, selected once per computation:

* ``RationalField``  -- elements are :class:`fractions.Fraction`.
* ``GaussianField``  -- elements are :class:`GaussianRational` (Q(i)).
* ``ParamField``     -- rational functions over Q in declared parameter names,
  elements are :class:`ParamRational`.

Plain ``int`` values are accepted by every field's arithmetic. Mixing two
different field tags raises :class:`FieldMismatchError`.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field as _sympy_field

from .errors import DivisionByZeroError, FieldMismatchError

__all__ = [
    "Fraction",
    "GaussianRational",
    "ParamRational",
    "RationalField",
    "GaussianField",
    "ParamField",
    "make_field",
    "add",
    "sub",
    "mul",
    "inv",
    "is_zero",
    "render_fraction",
]


def render_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _mismatch(a, b):
    return FieldMismatchError(
        f"cannot combine {type(a).__name__} with {type(b).__name__}")


def _is_scalar(a) -> bool:
    return isinstance(a, (int, Fraction, GaussianRational, ParamRational))


class GaussianRational:
    """An element ``real + imag*i`` of Q(i)."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        real = Fraction(real)
        imag = Fraction(imag)
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "imag", imag)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, int):
            return GaussianRational(other)
        raise _mismatch(self, other)

    def __add__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = self._coerce(other)
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = self._coerce(other)
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._coerce(other) - self

    def __mul__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = self._coerce(other)
        a, b, c, d = self.real, self.imag, o.real, o.imag
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def norm(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise DivisionByZeroError("inverse of zero in Q(i)")
        return GaussianRational(self.real / n, -self.imag / n)

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, int):
            return self.imag == 0 and self.real == other
        return NotImplemented

    def __hash__(self):
        return hash(("Q(i)", self.real, self.imag))

    def __repr__(self):
        return f"GaussianRational({self.real!s}, {self.imag!s})"

    def __str__(self):
        return GaussianField().render(self)


class ParamRational:
    """A rational function over Q in the parameters of its :class:`ParamField`.

    The wrapped sympy fraction is always reduced; :meth:`numerator` and
    :meth:`denominator` expose the representative whose denominator has
    leading coefficient 1.
    """

    __slots__ = ("_f", "_field")

    def __init__(self, frac, fld: "ParamField"):
        object.__setattr__(self, "_f", frac)
        object.__setattr__(self, "_field", fld)

    def __setattr__(self, name, value):
        raise AttributeError("ParamRational is immutable")

    @property
    def field(self):
        return self._field

    def _coerce(self, other):
        if isinstance(other, ParamRational):
            if other._field != self._field:
                raise FieldMismatchError("parameter fields differ")
            return other._f
        if isinstance(other, int):
            return self._field._K(other)
        raise _mismatch(self, other)

    def _wrap(self, f):
        return ParamRational(f, self._field)

    def __add__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._wrap(self._f + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._wrap(self._f - self._coerce(other))

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._wrap(self._coerce(other) - self._f)

    def __mul__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self._wrap(self._f * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self._f)

    def __pos__(self):
        return self

    def inverse(self):
        if not self._f:
            raise DivisionByZeroError("inverse of the zero rational function")
        return self._wrap(1 / self._f)

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        o = self._coerce(other)
        if not o:
            raise DivisionByZeroError("division by the zero rational function")
        return self._wrap(self._f / o)

    def __rtruediv__(self, other):
        return self._wrap(self._coerce(other)) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self._f ** e)

    def __bool__(self):
        return bool(self._f)

    def __eq__(self, other):
        if isinstance(other, ParamRational):
            return self._field == other._field and self._f == other._f
        if isinstance(other, int):
            return self._f == other
        return NotImplemented

    def __hash__(self):
        return hash(("Q(params)", self._field.params, self._f))

    def _normalized(self):
        num, den = self._f.numer, self._f.denom
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return num, den

    def numerator(self) -> dict:
        """Numerator as ``{exponent tuple: Fraction}`` over the parameters."""
        return _poly_to_dict(self._normalized()[0])

    def denominator(self) -> dict:
        return _poly_to_dict(self._normalized()[1])

    def constant_value(self):
        """The value as a Fraction if the element does not involve any
        parameter, else None."""
        num, den = self.numerator(), self.denominator()
        zero = (0,) * len(self._field.params)
        if set(num) <= {zero} and set(den) == {zero}:
            return num.get(zero, Fraction(0)) / den[zero]
        return None

    def __repr__(self):
        return f"ParamRational({self._field.render(self)!r})"

    def __str__(self):
        return self._field.render(self)


def _poly_to_dict(p) -> dict:
    return {tuple(m): Fraction(int(c.numerator), int(c.denominator))
            for m, c in p.terms()}


def _render_param_poly(terms: dict, names) -> str:
    from .poly import render_terms

    items = sorted(terms.items(), key=lambda mc: _degrevlex_key(mc[0]), reverse=True)
    return render_terms(
        [(c, [(names[i], e) for i, e in enumerate(m) if e]) for m, c in items],
        RationalField())


def _degrevlex_key(e):
    return (sum(e), tuple(-v for v in reversed(e)))


class _FieldBase:
    tag = ""

    def parse(self, text: str, params=()):
        from .parser import parse_constant

        return parse_constant(text, self)

    def __repr__(self):
        return f"{type(self).__name__}()"

    def split_sign(self, a):
        """Split a coefficient for printing as ``(negative, body, atomic)``.

        ``body`` is None when the magnitude is one.  ``atomic`` tells whether
        the body may be juxtaposed with ``*`` factors without parentheses.
        """
        s = self.render(a)
        if s.startswith("-") and self.parse_safe_negate(a):
            body = self.render(-a)
            return True, (None if body == "1" else body), True
        return False, (None if s == "1" else s), self.is_atomic(a)

    def parse_safe_negate(self, a):
        return True

    def is_atomic(self, a):
        return True


class RationalField(_FieldBase):
    tag = "rational"
    params: tuple = ()

    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def convert(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        raise _mismatch(Fraction(0), a)

    def is_zero(self, a) -> bool:
        return a == 0

    def inv(self, a):
        a = self.convert(a)
        if a == 0:
            raise DivisionByZeroError("inverse of 0")
        return 1 / a

    def render(self, a) -> str:
        return render_fraction(self.convert(a))

    def q_components(self, coeffs):
        """Express coefficients over a Q-basis of the field: one list of
        Fractions per basis element."""
        return [[self.convert(c) for c in coeffs]]

    def as_fraction(self, a):
        return self.convert(a)


class GaussianField(_FieldBase):
    tag = "gaussian"
    params: tuple = ()

    zero = GaussianRational(0)
    one = GaussianRational(1)
    i = GaussianRational(0, 1)

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("gaussian")

    def convert(self, a):
        if isinstance(a, GaussianRational):
            return a
        if isinstance(a, int):
            return GaussianRational(a)
        if isinstance(a, Fraction):
            # The rationals embed in Q(i); this is how scalars such as 1/k!
            # enter a Gaussian computation.
            return GaussianRational(a)
        raise _mismatch(GaussianRational(0), a)

    def is_zero(self, a) -> bool:
        return not self.convert(a)

    def inv(self, a):
        return self.convert(a).inverse()

    def render(self, a) -> str:
        a = self.convert(a)
        re, im = a.real, a.imag
        if im == 0:
            return render_fraction(re)
        if abs(im) == 1:
            imag = "i"
        else:
            imag = f"{render_fraction(abs(im))}*i"
        if re == 0:
            return imag if im > 0 else f"-{imag}"
        return f"{render_fraction(re)} {'+' if im > 0 else '-'} {imag}"

    def is_atomic(self, a):
        a = self.convert(a)
        return a.real == 0 or a.imag == 0

    def parse_safe_negate(self, a):
        return self.is_atomic(a)

    def q_components(self, coeffs):
        cs = [self.convert(c) for c in coeffs]
        return [[c.real for c in cs], [c.imag for c in cs]]

    def as_fraction(self, a):
        a = self.convert(a)
        if a.imag != 0:
            raise ValueError(f"{self.render(a)} is not rational")
        return a.real


class ParamField(_FieldBase):
    """Rational functions over Q in the given parameter names."""

    tag = "param"

    def __init__(self, params):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        if not params:
            raise ValueError("a parameter field needs at least one parameter")
        self.params = params
        self._K = _sympy_field(",".join(params), QQ)[0]
        self.zero = ParamRational(self._K.zero, self)
        self.one = ParamRational(self._K.one, self)

    def __eq__(self, other):
        return isinstance(other, ParamField) and other.params == self.params

    def __hash__(self):
        return hash(("param", self.params))

    def __repr__(self):
        return f"ParamField({list(self.params)!r})"

    def gen(self, name: str) -> ParamRational:
        idx = self.params.index(name)
        return ParamRational(self._K.gens[idx], self)

    def convert(self, a):
        if isinstance(a, ParamRational):
            if a.field != self:
                raise FieldMismatchError("parameter fields differ")
            return a
        if isinstance(a, int):
            return ParamRational(self._K(a), self)
        if isinstance(a, Fraction):
            return ParamRational(self._K(QQ(a.numerator, a.denominator)), self)
        raise _mismatch(self.zero, a)

    def is_zero(self, a) -> bool:
        return not self.convert(a)

    def inv(self, a):
        return self.convert(a).inverse()

    def render(self, a) -> str:
        a = self.convert(a)
        num, den = a.numerator(), a.denominator()
        if not num:
            return "0"
        ns = _render_param_poly(num, self.params)
        zero = (0,) * len(self.params)
        if set(den) == {zero} and den[zero] == 1:
            return ns
        ds = _render_param_poly(den, self.params)
        return f"({ns})/({ds})"

    def is_atomic(self, a):
        a = self.convert(a)
        num, den = a.numerator(), a.denominator()
        zero = (0,) * len(self.params)
        return len(num) <= 1 and set(den) == {zero} and den[zero] == 1

    def parse_safe_negate(self, a):
        return self.is_atomic(a)

    def q_components(self, coeffs):
        # Common denominator, then split numerators by parameter monomial.
        cs = [self.convert(c) for c in coeffs]
        K = self._K
        den = K.ring.one
        for c in cs:
            d = c._f.denom
            den = den.lcm(d)
        nums = [c._f.numer * den.exquo(c._f.denom) for c in cs]
        monos = sorted({m for p in nums for m, _ in p.terms()})
        out = []
        for mono in monos:
            row = []
            for p in nums:
                v = dict(p.terms()).get(mono, 0)
                row.append(Fraction(int(QQ(v).numerator), int(QQ(v).denominator)))
            out.append(row)
        return out or [[Fraction(0)] * len(cs)]

    def as_fraction(self, a):
        v = self.convert(a).constant_value()
        if v is None:
            raise ValueError(f"{self.render(a)} depends on parameters")
        return v


def make_field(tag: str, params=()):
    """Field factory used by the CLI: ``rational``, ``gaussian`` or ``param``."""
    if tag == "rational":
        return RationalField()
    if tag == "gaussian":
        return GaussianField()
    if tag == "param":
        return ParamField(params)
    raise ValueError(f"unknown field tag {tag!r}")


def field_of(a):
    if isinstance(a, GaussianRational):
        return GaussianField()
    if isinstance(a, ParamRational):
        return a.field
    return RationalField()


def _check_same(a, b):
    if isinstance(a, int) or isinstance(b, int):
        return
    if type(a) is not type(b):
        raise _mismatch(a, b)
    if isinstance(a, ParamRational) and a.field != b.field:
        raise FieldMismatchError("parameter fields differ")


def add(a, b):
    _check_same(a, b)
    return a + b


def sub(a, b):
    _check_same(a, b)
    return a - b


def mul(a, b):
    _check_same(a, b)
    return a * b


def inv(a):
    return field_of(a).inv(a)


def is_zero(a) -> bool:
    return field_of(a).is_zero(a)
