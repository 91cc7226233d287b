"""Exact sparse polynomial arithmetic for the invariant computations.

Monomials live in Z[a, a^-1][y, z, w] / (w^2 - w).  Exponents are stored as
tuples (ea, ey, ez, ew) with ea any integer, ey >= 0, ez >= 0 and ew in {0, 1};
the w reduction is applied on every multiplication.  Coefficients are plain
Python ints, so there is no overflow to worry about.
"""

from __future__ import annotations

from typing import Iterable, Iterator

Key = tuple[int, int, int, int]


class Poly:
    """Immutable sparse polynomial.  Zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Key, int] | None = None):
        t: dict[Key, int] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    ea, ey, ez, ew = key
                    if ey < 0 or ez < 0:
                        raise ValueError(f"negative y/z exponent in {key!r}")
                    if ew not in (0, 1):
                        raise ValueError(f"w exponent out of range in {key!r}")
                    t[key] = coeff
        self._terms = t

    # ---------------------------------------------------------------- basics

    @staticmethod
    def zero() -> "Poly":
        return _ZERO

    @staticmethod
    def one() -> "Poly":
        return _ONE

    @staticmethod
    def monomial(coeff: int, ea: int = 0, ey: int = 0, ez: int = 0, ew: int = 0) -> "Poly":
        if coeff == 0:
            return _ZERO
        return Poly({(ea, ey, ez, ew): coeff})

    @staticmethod
    def integer(n: int) -> "Poly":
        return Poly.monomial(n)

    @property
    def terms(self) -> dict[Key, int]:
        """A copy of the term map."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({} if other == 0 else {(0, 0, 0, 0): other})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"Poly({self.render_plain()})"

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            other = Poly.integer(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            new = out.get(key, 0) + coeff
            if new:
                out[key] = new
            else:
                out.pop(key, None)
        p = Poly.__new__(Poly)
        p._terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p._terms = {k: -c for k, c in self._terms.items()}
        return p

    def __sub__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            other = Poly.integer(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "Poly":
        return Poly.integer(other) - self

    def __mul__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            if other == 0:
                return _ZERO
            p = Poly.__new__(Poly)
            p._terms = {k: c * other for k, c in self._terms.items()}
            return p
        out: dict[Key, int] = {}
        get = out.get
        for (a1, y1, z1, w1), c1 in self._terms.items():
            for (a2, y2, z2, w2), c2 in other._terms.items():
                # w^2 -> w: exponents are 0/1, bitwise or is the reduction
                key = (a1 + a2, y1 + y2, z1 + z2, w1 | w2)
                new = get(key, 0) + c1 * c2
                if new:
                    out[key] = new
                else:
                    out.pop(key, None)
        p = Poly.__new__(Poly)
        p._terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = _ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---------------------------------------------------------- ring queries

    def z_degree(self) -> int | None:
        """Max z exponent, or None for the zero polynomial."""
        if not self._terms:
            return None
        return max(k[2] for k in self._terms)

    def min_a_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no a-exponents")
        return min(k[0] for k in self._terms)

    # -------------------------------------------------------- substitutions

    def subst_y(self) -> "Poly":
        """Replace every y by (-a - 2 - a^-1)."""
        if not self._terms:
            return _ZERO
        powers: list[Poly] = [_ONE]
        max_ey = max(k[1] for k in self._terms)
        for _ in range(max_ey):
            powers.append(powers[-1] * _Y_IMAGE)
        out = _ZERO
        for (ea, ey, ez, ew), coeff in self._terms.items():
            out = out + powers[ey] * Poly.monomial(coeff, ea=ea, ez=ez, ew=ew)
        return out

    def specialize_zw(self) -> "Poly":
        """Set z = 1 and w = 1 (used for the Yamada specialization)."""
        out: dict[Key, int] = {}
        for (ea, ey, _ez, _ew), coeff in self._terms.items():
            key = (ea, ey, 0, 0)
            new = out.get(key, 0) + coeff
            if new:
                out[key] = new
            else:
                out.pop(key, None)
        p = Poly.__new__(Poly)
        p._terms = out
        return p

    def mirror_a(self) -> "Poly":
        """Exchange a and a^-1."""
        p = Poly.__new__(Poly)
        p._terms = {(-ea, ey, ez, ew): c for (ea, ey, ez, ew), c in self._terms.items()}
        return p

    # ------------------------------------------------------- normalization

    def unit_normalize(self) -> tuple["Poly", int]:
        """Factor out the unit (-a)^m, m = min a-exponent.

        Returns (normalized, shift) with self == (-a)^shift * normalized and
        the normalized polynomial having minimum a-exponent 0.
        """
        if not self._terms:
            raise ValueError("cannot unit-normalize the zero polynomial")
        m = self.min_a_exponent()
        sign = -1 if m % 2 else 1
        p = Poly.__new__(Poly)
        p._terms = {(ea - m, ey, ez, ew): sign * c for (ea, ey, ez, ew), c in self._terms.items()}
        return p, m

    # ------------------------------------------------------------ rendering

    def sorted_terms(self) -> list[tuple[Key, int]]:
        """Canonical order: e_z desc, then e_w desc, e_y desc, e_a desc."""
        return sorted(self._terms.items(), key=lambda kv: (-kv[0][2], -kv[0][3], -kv[0][1], -kv[0][0]))

    def render_plain(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for (ea, ey, ez, ew), coeff in self.sorted_terms():
            body = _vars_plain(ea, ey, ez, ew)
            mag = abs(coeff)
            if body:
                text = body if mag == 1 else f"{mag}{body}"
            else:
                text = str(mag)
            if not pieces:
                pieces.append(text if coeff > 0 else f"-{text}")
            else:
                pieces.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(pieces)

    def render_latex(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for (ea, ey, ez, ew), coeff in self.sorted_terms():
            body = _vars_latex(ea, ey, ez, ew)
            mag = abs(coeff)
            if body:
                text = body if mag == 1 else f"{mag}{body}"
            else:
                text = str(mag)
            if not pieces:
                pieces.append(text if coeff > 0 else f"-{text}")
            else:
                pieces.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(pieces)

    def to_json_terms(self) -> list[dict[str, int]]:
        return [
            {"ea": ea, "ey": ey, "ez": ez, "ew": ew, "coeff": coeff}
            for (ea, ey, ez, ew), coeff in self.sorted_terms()
        ]


def _vars_plain(ea: int, ey: int, ez: int, ew: int) -> str:
    out = []
    if ea == 1:
        out.append("a")
    elif ea:
        out.append(f"a^{ea}")
    if ey == 1:
        out.append("y")
    elif ey:
        out.append(f"y^{ey}")
    if ez == 1:
        out.append("z")
    elif ez:
        out.append(f"z^{ez}")
    if ew:
        out.append("w")
    return "".join(out)


def _vars_latex(ea: int, ey: int, ez: int, ew: int) -> str:
    out = []
    if ea == 1:
        out.append("a")
    elif ea:
        out.append(f"a^{{{ea}}}")
    if ey == 1:
        out.append("y")
    elif ey:
        out.append(f"y^{{{ey}}}")
    if ez == 1:
        out.append("z")
    elif ez:
        out.append(f"z^{{{ez}}}")
    if ew:
        out.append("w")
    return "".join(out)


_ZERO = Poly.__new__(Poly)
_ZERO._terms = {}
_ONE = Poly.__new__(Poly)
_ONE._terms = {(0, 0, 0, 0): 1}

A = Poly.monomial(1, ea=1)
A_INV = Poly.monomial(1, ea=-1)
Y = Poly.monomial(1, ey=1)
Z = Poly.monomial(1, ez=1)
W = Poly.monomial(1, ew=1)

# y |-> -a - 2 - a^-1, the substitution that turns Q into (a part of) R
_Y_IMAGE = Poly({(1, 0, 0, 0): -1, (0, 0, 0, 0): -2, (-1, 0, 0, 0): -1})

# sigma = a + 1 + a^-1 shows up in several closed-form values
SIGMA = Poly({(1, 0, 0, 0): 1, (0, 0, 0, 0): 1, (-1, 0, 0, 0): 1})


def equal_up_to_unit(p: Poly, q: Poly, allow_mirror: bool = False) -> bool:
    """True iff p = (-a)^n q for some integer n (optionally also a <-> a^-1)."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    np_, _ = p.unit_normalize()
    nq, _ = q.unit_normalize()
    if np_ == nq:
        return True
    if allow_mirror:
        nqm, _ = q.mirror_a().unit_normalize()
        return np_ == nqm
    return False


def poly_sum(items: Iterable[Poly]) -> Poly:
    total = _ZERO
    for item in items:
        total = total + item
    return total


def poly_product(items: Iterable[Poly] | Iterator[Poly]) -> Poly:
    total = _ONE
    for item in items:
        total = total * item
        if total.is_zero():
            break
    return total
