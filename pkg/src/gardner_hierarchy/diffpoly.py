"""Exact differential polynomials over the Gaussian rationals.

A differential polynomial is a finite sum of monomials

    c * mu^k * u^e0 * u_x^e1 * u_xx^e2 * ...

with ``c`` in Q[i].  ``mu`` is a formal constant symbol (``D_x mu = 0``).
The same class serves the Lenard operators (printed in the variable ``v``)
and the flows they generate (printed in ``u``); only the printed name
differs.

Everything here is exact.  Floats never enter this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "Coeff",
    "DiffMonomial",
    "DiffPoly",
    "NotExact",
    "combine",
    "total_derivative",
    "formal_integral",
    "substitute_argument",
    "coefficient_of",
    "weight_check",
    "is_real",
]


class NotExact(ValueError):
    """Raised when a differential polynomial is not a total x-derivative."""


class Coeff:
    """A Gaussian rational ``re + i*im`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "Coeff":
        if isinstance(value, Coeff):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    def __add__(self, other):
        other = Coeff.coerce(other)
        return Coeff(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Coeff.coerce(other)
        return Coeff(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Coeff.coerce(other) - self

    def __mul__(self, other):
        other = Coeff.coerce(other)
        return Coeff(self.re * other.re - self.im * other.im,
                     self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Coeff.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero coefficient")
        num = self * other.conjugate()
        return Coeff(num.re / den, num.im / den)

    def __neg__(self):
        return Coeff(-self.re, -self.im)

    def conjugate(self) -> "Coeff":
        return Coeff(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = Coeff.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im:
            raise TypeError(f"coefficient {self} is not real")
        return float(self.re)

    def __repr__(self):
        return f"Coeff({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


ZERO = Coeff(0)
ONE = Coeff(1)

# A monomial is a NamedTuple so it hashes as a plain tuple (fast dict keys).
# ``exps`` holds (derivative order, exponent) pairs sorted by order, all
# exponents >= 1.


class DiffMonomial(NamedTuple):
    mu_power: int = 0
    exps: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mu_power: int = 0, exps: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> "DiffMonomial":
        items = exps.items() if isinstance(exps, Mapping) else exps
        merged: dict[int, int] = {}
        for order, e in items:
            if order < 0 or e < 0:
                raise ValueError("orders and exponents must be nonnegative")
            if e:
                merged[order] = merged.get(order, 0) + e
        return cls(mu_power, tuple(sorted(merged.items())))

    @classmethod
    def var(cls, order: int, power: int = 1) -> "DiffMonomial":
        return cls(0, ((order, power),)) if power else cls()

    def __mul__(self, other: "DiffMonomial") -> "DiffMonomial":  # type: ignore[override]
        if not other.exps:
            return DiffMonomial(self.mu_power + other.mu_power, self.exps)
        if not self.exps:
            return DiffMonomial(self.mu_power + other.mu_power, other.exps)
        merged = dict(self.exps)
        for order, e in other.exps:
            merged[order] = merged.get(order, 0) + e
        return DiffMonomial(self.mu_power + other.mu_power, tuple(sorted(merged.items())))

    @property
    def degree(self) -> int:
        """Polynomial degree in the dependent variable (mu excluded)."""
        return sum(e for _, e in self.exps)

    @property
    def max_order(self) -> int:
        """Highest derivative order present, -1 for a pure constant."""
        return self.exps[-1][0] if self.exps else -1

    @property
    def total_order(self) -> int:
        return sum(j * e for j, e in self.exps)

    def weight(self, w_v: int, w_mu: int = 1) -> int:
        return self.mu_power * w_mu + sum(e * (j + w_v) for j, e in self.exps)

    def exponent(self, order: int) -> int:
        for j, e in self.exps:
            if j == order:
                return e
        return 0

    def without(self, order: int, count: int = 1) -> "DiffMonomial":
        out = []
        for j, e in self.exps:
            if j == order:
                e -= count
                if e < 0:
                    raise ValueError("exponent underflow")
            if e:
                out.append((j, e))
        return DiffMonomial(self.mu_power, tuple(out))

    def is_linear(self) -> bool:
        """True for ``mu^k * u_{jx}`` (degree one in the dependent variable)."""
        return len(self.exps) == 1 and self.exps[0][1] == 1


def _var_name(order: int, var: str) -> str:
    if order == 0:
        return var
    if order == 1:
        return f"{var}x"
    if order == 2:
        return f"{var}xx"
    return f"{var}{order}x"


def _monomial_text(m: DiffMonomial, var: str) -> str:
    parts = []
    if m.mu_power == 1:
        parts.append("mu")
    elif m.mu_power > 1:
        parts.append(f"mu^{m.mu_power}")
    for j, e in m.exps:
        name = _var_name(j, var)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _sort_key(m: DiffMonomial):
    # total derivative order desc, mu power desc, then exponents (high orders first)
    return (-m.total_order, -m.mu_power, tuple((-j, -e) for j, e in reversed(m.exps)))


class DiffPoly:
    """Immutable differential polynomial ``{DiffMonomial: Coeff}``.

    Zero coefficients are never stored, so structural equality is
    mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[DiffMonomial, object] | None = None):
        clean: dict[DiffMonomial, Coeff] = {}
        if terms:
            for m, c in terms.items():
                c = Coeff.coerce(c)
                if c:
                    if not isinstance(m, DiffMonomial):
                        m = DiffMonomial(*m)
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[DiffMonomial, Coeff]) -> "DiffPoly":
        # trusted constructor: caller guarantees canonical, nonzero entries
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({DiffMonomial(): c})

    @classmethod
    def var(cls, order: int = 0, power: int = 1, coeff=1) -> "DiffPoly":
        return cls({DiffMonomial.var(order, power): coeff})

    @classmethod
    def mu(cls, power: int = 1) -> "DiffPoly":
        return cls({DiffMonomial(power, ()): 1})

    # mapping protocol
    @property
    def terms(self) -> Mapping[DiffMonomial, Coeff]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[DiffMonomial, Coeff]]:
        return iter(self._terms.items())

    def __iter__(self) -> Iterator[DiffMonomial]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __contains__(self, m):
        return m in self._terms

    def __getitem__(self, m: DiffMonomial) -> Coeff:
        return self._terms.get(m, ZERO)

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Coeff)):
            return self == DiffPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ring operations
    def _accumulate(self, other: "DiffPoly", sign: int) -> "DiffPoly":
        out = dict(self._terms)
        for m, c in other._terms.items():
            prev = out.get(m)
            new = (prev + c if sign > 0 else prev - c) if prev is not None else (c if sign > 0 else -c)
            if new:
                out[m] = new
            elif prev is not None:
                del out[m]
        return DiffPoly._raw(out)

    def __add__(self, other):
        other = _as_poly(other)
        return self._accumulate(other, +1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._accumulate(_as_poly(other), -1)

    def __rsub__(self, other):
        return _as_poly(other)._accumulate(self, -1)

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Coeff, complex)):
            c = Coeff.coerce(other)
            if not c:
                return DiffPoly()
            return DiffPoly._raw({m: v * c for m, v in self._terms.items()})
        other = _as_poly(other)
        out: dict[DiffMonomial, Coeff] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                c = c1 * c2
                prev = out.get(m)
                out[m] = c if prev is None else prev + c
        return DiffPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = DiffPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # structure
    @property
    def max_order(self) -> int:
        return max((m.max_order for m in self._terms), default=-1)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def real_part(self) -> "DiffPoly":
        return DiffPoly({m: Coeff(c.re) for m, c in self._terms.items()})

    def imag_part(self) -> "DiffPoly":
        return DiffPoly({m: Coeff(c.im) for m, c in self._terms.items()})

    def with_mu_zero(self) -> "DiffPoly":
        return DiffPoly._raw({m: c for m, c in self._terms.items() if m.mu_power == 0})

    def homogeneous_weights(self, w_v: int, w_mu: int = 1) -> set[int]:
        return {m.weight(w_v, w_mu) for m in self._terms}

    def sorted_terms(self) -> list[tuple[DiffMonomial, Coeff]]:
        return sorted(self._terms.items(), key=lambda mc: _sort_key(mc[0]))

    def to_text(self, var: str = "u") -> str:
        """Canonical text form, e.g. ``+10*mu^2*u3x +20*mu*u*u3x``."""
        if not self._terms:
            return "0"
        chunks = []
        for m, c in self.sorted_terms():
            mono = _monomial_text(m, var)
            if c.im == 0:
                sign = "-" if c.re < 0 else "+"
                mag = abs(c.re)
                if mono:
                    chunks.append(f"{sign}{mono}" if mag == 1 else f"{sign}{mag}*{mono}")
                else:
                    chunks.append(f"{sign}{mag}")
            else:
                # str() brackets a + bi itself; a pure imaginary needs the brackets added
                body = str(c) if c.re else f"({c})"
                chunks.append(f"+{body}*{mono}" if mono else f"+{body}")
        return " ".join(chunks)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"DiffPoly({self.to_text()!r})"

    @classmethod
    def parse(cls, text: str, var: str = "u") -> "DiffPoly":
        """Inverse of :meth:`to_text` (real or ``(a+bi)`` coefficients)."""
        text = text.strip()
        if text == "0":
            return cls()
        out = cls()
        for chunk in _split_terms(text):
            out = out + _parse_term(chunk, var)
        return out


def _as_poly(x) -> DiffPoly:
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction, Coeff, complex)):
        return DiffPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a differential polynomial")


_TERM_SPLIT = re.compile(r"\s+(?=[+-])")
_COEFF_RE = re.compile(r"^\(?(?P<re>-?\d+(?:/\d+)?)?(?:(?P<sign>[+-]?)(?P<im>\d+(?:/\d+)?)i)?\)?$")


def _split_terms(text: str) -> list[str]:
    return [t for t in _TERM_SPLIT.split(text) if t]


def _parse_coeff(token: str) -> Coeff:
    if token.endswith("i") or token.startswith("("):
        inner = token.strip("()")
        m = re.fullmatch(r"(?:(-?\d+(?:/\d+)?)(?=[+-]))?([+-]?\d+(?:/\d+)?)i", inner)
        if not m:
            raise ValueError(f"bad coefficient {token!r}")
        return Coeff(Fraction(m.group(1) or 0), Fraction(m.group(2)))
    return Coeff(Fraction(token))


def _parse_factor(token: str, var: str) -> DiffMonomial:
    base, _, power = token.partition("^")
    e = int(power) if power else 1
    if base == "mu":
        return DiffMonomial(e, ())
    if not base.startswith(var):
        raise ValueError(f"unknown factor {token!r}")
    suffix = base[len(var):]
    if suffix == "":
        order = 0
    elif suffix == "x":
        order = 1
    elif suffix == "xx":
        order = 2
    elif suffix.endswith("x") and suffix[:-1].isdigit():
        order = int(suffix[:-1])
    else:
        raise ValueError(f"unknown factor {token!r}")
    return DiffMonomial.var(order, e)


def _parse_term(chunk: str, var: str) -> DiffPoly:
    sign = 1
    if chunk[0] in "+-":
        sign = -1 if chunk[0] == "-" else 1
        chunk = chunk[1:]
    factors = chunk.split("*")
    coeff = Coeff(1)
    mono = DiffMonomial()
    for k, f in enumerate(factors):
        if k == 0 and (f[0].isdigit() or f[0] == "("):
            coeff = _parse_coeff(f)
        else:
            mono = mono * _parse_factor(f, var)
    return DiffPoly({mono: coeff * sign})


# ---------------------------------------------------------------------------
# operations


def combine(p: DiffPoly, q: DiffPoly, kind: str) -> DiffPoly:
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown combine kind {kind!r}")


def _monomial_derivative(m: DiffMonomial) -> list[tuple[int, DiffMonomial]]:
    out = []
    for j, e in m.exps:
        # e * u_j^(e-1) * u_{j+1} * rest
        out.append((e, m.without(j) * DiffMonomial.var(j + 1)))
    return out


def total_derivative(p: DiffPoly) -> DiffPoly:
    out: dict[DiffMonomial, Coeff] = {}
    for m, c in p.items():
        for mult, dm in _monomial_derivative(m):
            term = c * mult
            prev = out.get(dm)
            out[dm] = term if prev is None else prev + term
    return DiffPoly._raw({m: c for m, c in out.items() if c})


def formal_integral(p: DiffPoly) -> DiffPoly:
    """Return ``q`` with ``D_x q == p`` and no constant term.

    Integration by parts on the top derivative: an exact derivative is
    linear in its highest-order variable ``u_K`` with coefficient
    ``dq/du_{K-1}``, so integrating that coefficient in ``u_{K-1}`` peels
    off one layer and strictly lowers the top order.
    """
    remaining = p
    result = DiffPoly()
    while remaining:
        top = remaining.max_order
        if top <= 0:
            raise NotExact(f"residue {remaining} has no antiderivative")
        piece: dict[DiffMonomial, Coeff] = {}
        for m, c in remaining.items():
            e = m.exponent(top)
            if e == 0:
                continue
            if e > 1:
                raise NotExact(f"term {_monomial_text(m, 'u')} is nonlinear in its top derivative")
            rest = m.without(top)
            k = rest.exponent(top - 1)
            anti = rest * DiffMonomial.var(top - 1)
            piece[anti] = piece.get(anti, ZERO) + c * Fraction(1, k + 1)
        q = DiffPoly(piece)
        result = result + q
        new_remaining = remaining - total_derivative(q)
        if new_remaining.max_order >= top:
            raise NotExact("integration by parts failed to lower the top order")
        remaining = new_remaining
    return result


def substitute_argument(p: DiffPoly, arg: DiffPoly) -> DiffPoly:
    """Replace every ``v_{jx}`` in ``p`` by ``D_x^j arg``.

    ``mu`` factors of ``p`` carry over unchanged.
    """
    top = p.max_order
    derivs = [arg]
    for _ in range(max(top, 0)):
        derivs.append(total_derivative(derivs[-1]))
    powers: dict[tuple[int, int], DiffPoly] = {}

    def power(j: int, e: int) -> DiffPoly:
        key = (j, e)
        if key not in powers:
            powers[key] = derivs[j] if e == 1 else power(j, e - 1) * derivs[j]
        return powers[key]

    out = DiffPoly()
    for m, c in p.sorted_terms():
        term = DiffPoly({DiffMonomial(m.mu_power, ()): c})
        for j, e in m.exps:
            term = term * power(j, e)
        out = out + term
    return out


def coefficient_of(p: DiffPoly, m: DiffMonomial) -> Coeff:
    return p[m]


def weight_check(p: DiffPoly, w_v: int, expected: int) -> bool:
    if w_v not in (1, 2):
        raise ValueError("w_v must be 1 (u-grading) or 2 (v-grading)")
    return all(m.weight(w_v) == expected for m in p)


def is_real(p: DiffPoly) -> bool:
    return p.is_real()
