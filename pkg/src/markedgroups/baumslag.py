"""Exact model of the metabelian group B and of the base group <h> x B.

The module part lives in GF(2)[x^{+-1}, (1+x)^{-1}].  Elements are kept in
a canonical fraction form numerator / (x^xpow (1+x)^ypow) with the
numerator a plain GF(2) polynomial stored as an int bit-vector (bit k is
the coefficient of x^k).

The generators act as a -> (1, 0, 0), b -> (0, 1, 0), c -> (0, 0, 1);
with the convention x^y = y^-1 x y, conjugation by b multiplies the module
by x and conjugation by c by (1+x), so a^b = x and a^c = 1+x and the
defining relation a^c = a a^b holds on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .words import Word

_ONE_PLUS_X = 0b11


def gf2_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def gf2_divmod(a: int, b: int) -> tuple[int, int]:
    """Polynomial division with remainder over GF(2); b must be non-zero."""
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    deg_b = b.bit_length() - 1
    quotient = 0
    while a.bit_length() - 1 >= deg_b and a:
        shift = a.bit_length() - 1 - deg_b
        quotient |= 1 << shift
        a ^= b << shift
    return quotient, a


def gf2_pow_one_plus_x(k: int) -> int:
    """(1+x)^k over GF(2), k >= 0."""
    result = 1
    for _ in range(k):
        result = gf2_mul(result, _ONE_PLUS_X)
    return result


@dataclass(frozen=True)
class PolyFrac:
    """Canonical element of GF(2)[x^{+-1}, (1+x)^{-1}].

    Value = num / (x^xpow (1+x)^ypow).  Canonical form: num = 0 forces
    xpow = ypow = 0; xpow > 0 forces a non-zero constant term; ypow > 0
    forces num not divisible by 1+x (checked by exact division).
    """

    num: int
    xpow: int = 0
    ypow: int = 0

    def __post_init__(self) -> None:
        if self.num < 0 or self.xpow < 0 or self.ypow < 0:
            raise ValueError("PolyFrac fields must be non-negative")
        if self.num == 0:
            if self.xpow or self.ypow:
                raise ValueError("zero must have trivial denominator")
        else:
            if self.xpow > 0 and not (self.num & 1):
                raise ValueError("numerator divisible by x with xpow > 0")
            if self.ypow > 0 and gf2_divmod(self.num, _ONE_PLUS_X)[1] == 0:
                raise ValueError("numerator divisible by 1+x with ypow > 0")

    def is_zero(self) -> bool:
        return self.num == 0

    def is_laurent(self) -> bool:
        """True iff the value lies in GF(2)[x^{+-1}] (no 1+x denominator)."""
        return self.ypow == 0


PF_ZERO = PolyFrac(0)
PF_ONE = PolyFrac(1)


def polyfrac(num: int, xpow: int = 0, ypow: int = 0) -> PolyFrac:
    """Build a PolyFrac, cancelling common factors of x and 1+x."""
    if num == 0:
        return PF_ZERO
    while xpow > 0 and not (num & 1):
        num >>= 1
        xpow -= 1
    while ypow > 0:
        quotient, remainder = gf2_divmod(num, _ONE_PLUS_X)
        if remainder != 0:
            break
        num = quotient
        ypow -= 1
    return PolyFrac(num, xpow, ypow)


def monomial(i: int) -> PolyFrac:
    """x^i for any integer i."""
    if i >= 0:
        return PolyFrac(1 << i)
    return PolyFrac(1, -i, 0)


def pf_add(p: PolyFrac, q: PolyFrac) -> PolyFrac:
    """Exact sum; addition is GF(2), so p + p = 0."""
    xpow = max(p.xpow, q.xpow)
    ypow = max(p.ypow, q.ypow)
    a = gf2_mul(p.num << (xpow - p.xpow), gf2_pow_one_plus_x(ypow - p.ypow))
    b = gf2_mul(q.num << (xpow - q.xpow), gf2_pow_one_plus_x(ypow - q.ypow))
    return polyfrac(a ^ b, xpow, ypow)


def pf_mul_monomial(p: PolyFrac, k: int, l: int = 0) -> PolyFrac:
    """Multiply by the unit x^k (1+x)^l, k and l any integers."""
    num, xpow, ypow = p.num, p.xpow, p.ypow
    xpow -= k
    if xpow < 0:
        num <<= -xpow
        xpow = 0
    ypow -= l
    if ypow < 0:
        num = gf2_mul(num, gf2_pow_one_plus_x(-ypow))
        ypow = 0
    return polyfrac(num, xpow, ypow)


def render_polyfrac(p: PolyFrac) -> str:
    if p.num == 0:
        return "0"
    terms = []
    for k in range(p.num.bit_length()):
        if (p.num >> k) & 1:
            terms.append("1" if k == 0 else ("x" if k == 1 else f"x^{k}"))
    num_text = "+".join(terms)
    den_parts = []
    if p.xpow:
        den_parts.append("x" if p.xpow == 1 else f"x^{p.xpow}")
    if p.ypow:
        den_parts.append("(1+x)" if p.ypow == 1 else f"(1+x)^{p.ypow}")
    if not den_parts:
        return num_text
    return f"({num_text})/({' '.join(den_parts)})"


# ---------------------------------------------------------------------------
# Elements of B and of <h> x B.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BElement:
    """Normal form (module part, b-exponent, c-exponent) of an element of B."""

    m: PolyFrac = PF_ZERO
    i: int = 0
    j: int = 0

    def is_identity(self) -> bool:
        return self.m.is_zero() and self.i == 0 and self.j == 0


B_IDENTITY = BElement()
B_A = BElement(PF_ONE, 0, 0)
B_B = BElement(PF_ZERO, 1, 0)
B_C = BElement(PF_ZERO, 0, 1)


def b_mul(u: BElement, v: BElement) -> BElement:
    return BElement(
        pf_add(u.m, pf_mul_monomial(v.m, -u.i, -u.j)), u.i + v.i, u.j + v.j
    )


def b_inv(u: BElement) -> BElement:
    return BElement(pf_mul_monomial(u.m, u.i, u.j), -u.i, -u.j)


@dataclass(frozen=True)
class BaseElement:
    """Element of the direct product <h> x B: h-exponent and B part."""

    n: int = 0
    beta: BElement = B_IDENTITY

    def is_identity(self) -> bool:
        return self.n == 0 and self.beta.is_identity()


BASE_IDENTITY = BaseElement()


def base_mul(u: BaseElement, v: BaseElement) -> BaseElement:
    return BaseElement(u.n + v.n, b_mul(u.beta, v.beta))


def base_inv(u: BaseElement) -> BaseElement:
    return BaseElement(-u.n, b_inv(u.beta))


def render_base(z: BaseElement) -> str:
    return (
        f"h^{z.n} * ({render_polyfrac(z.beta.m)}; b^{z.beta.i} c^{z.beta.j})"
    )


class ForeignLetterError(ValueError):
    """A word uses a generator outside the model's alphabet."""


_B_GENS = {"a": B_A, "b": B_B, "c": B_C}
_B_GENS_INV = {name: b_inv(el) for name, el in _B_GENS.items()}


def eval_b(w: Word) -> BElement:
    """Homomorphic evaluation of a word over {a, b, c} in B."""
    result = B_IDENTITY
    names = w.alphabet.names
    for idx, sign in w.letters:
        name = names[idx]
        table = _B_GENS if sign > 0 else _B_GENS_INV
        if name not in table:
            raise ForeignLetterError(f"letter {name!r} is not a generator of B")
        result = b_mul(result, table[name])
    return result


def eval_base(w: Word) -> BaseElement:
    """Homomorphic evaluation of a word over {a, b, c, h} in <h> x B."""
    n = 0
    beta = B_IDENTITY
    names = w.alphabet.names
    for idx, sign in w.letters:
        name = names[idx]
        if name == "h":
            n += sign
        elif name in _B_GENS:
            table = _B_GENS if sign > 0 else _B_GENS_INV
            beta = b_mul(beta, table[name])
        else:
            raise ForeignLetterError(
                f"letter {name!r} is not a generator of <h> x B"
            )
    return BaseElement(n, beta)


# ---------------------------------------------------------------------------
# Membership predicates.
# ---------------------------------------------------------------------------


def member_H2(z: BaseElement) -> Optional[int]:
    """k such that z = h^{2k}, if any."""
    if z.beta.is_identity() and z.n % 2 == 0:
        return z.n // 2
    return None


def member_HA(z: BaseElement) -> Optional[int]:
    """k such that z = (ha)^k, if any.

    (ha)^k = h^k a^(k mod 2) since h is central and a^2 = 1.
    """
    expected = B_IDENTITY if z.n % 2 == 0 else B_A
    if z.beta == expected:
        return z.n
    return None


def member_A(z: BaseElement) -> bool:
    """Membership in the subgroup generated by h and the a^{b^i}.

    Holds iff the b and c exponents vanish and the module part is a
    Laurent polynomial in x.
    """
    return z.beta.i == 0 and z.beta.j == 0 and z.beta.m.is_laurent()


def span_membership(targets: list[PolyFrac], candidate: PolyFrac) -> bool:
    """GF(2)-linear membership of candidate in the span of targets.

    All arguments must be Laurent polynomials in x (ypow = 0); membership
    is decided by Gaussian elimination over the finite monomial support.
    """
    for p in targets + [candidate]:
        if not p.is_laurent():
            raise ValueError("span_membership expects Laurent polynomials")
    if candidate.is_zero():
        return True
    shift = max([p.xpow for p in targets + [candidate]], default=0)
    rows = [p.num << (shift - p.xpow) for p in targets if not p.is_zero()]
    target_bits = candidate.num << (shift - candidate.xpow)
    # Row echelon over GF(2): reduce each row by the pivots found so far.
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = row
                break
            row ^= pivots[lead]
    while target_bits:
        lead = target_bits.bit_length() - 1
        if lead not in pivots:
            return False
        target_bits ^= pivots[lead]
    return True
