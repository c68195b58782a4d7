"""Exact integer checks behind the classification: the integral values of
k(x, y) = xy / (xy - 2x - 2y), two families of non-integral fractions, the
Diophantine equations p*m*n - k*m - k*n = d*p^2 and p*m*n - m - n = p^3, and
the congruences excluding the solvable families.

Everything is int / Fraction; claims about all primes are only checked on a
finite range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

DEFAULT_PRIMES = (5, 97)
HURWITZ_BOUND = 21


def primes_in(lo: int, hi: int) -> list[int]:
    return [n for n in range(max(lo, 2), hi + 1) if all(n % d for d in range(2, isqrt(n) + 1))]


def _require_prime(p: int) -> None:
    if p < 5 or primes_in(p, p) != [p]:
        raise ValueError(f"expected a prime >= 5, got {p}")


@dataclass(frozen=True, order=True)
class TypePair:
    x: int
    y: int

    def __post_init__(self):
        if self.x > self.y:
            x, y = self.y, self.x
            object.__setattr__(self, "x", x)
            object.__setattr__(self, "y", y)

    @property
    def k_value(self) -> Fraction | None:
        den = self.x * self.y - 2 * self.x - 2 * self.y
        return Fraction(self.x * self.y, den) if den > 0 else None


def hurwitz_check(x: int, y: int) -> Fraction:
    """k(x, y), asserting the Hurwitz bound k <= 21."""
    k = TypePair(x, y).k_value
    if k is None:
        raise ValueError(f"xy - 2x - 2y <= 0 for {{{x},{y}}}")
    assert k <= HURWITZ_BOUND, (x, y, k)
    return k


def table1(bound: int = 200) -> list[TypePair]:
    """All {x, y} with k(x, y) a positive integer.

    k >= 2 is equivalent to (x - 4)(y - 4) <= 16, and k = 1 is impossible
    (it would need x + y = 0), so with x <= y either x = 3 (then
    k = 3y / (y - 6) and y - 6 divides 18, y <= 24) or x = 4 (y - 4 | 16,
    y <= 20) or 5 <= x <= y with (x - 4)(y - 4) <= 16 (y <= 20).  The search
    runs to ``bound`` anyway and asserts nothing appears past y = 50.
    """
    out = []
    for x in range(3, bound + 1):
        for y in range(x, bound + 1):
            k = TypePair(x, y).k_value
            if k is not None and k.denominator == 1:
                out.append(TypePair(x, y))
    assert all(t.y <= 50 for t in out)
    assert all((t.x - 4) * (t.y - 4) <= 16 for t in out)
    return out


@dataclass(frozen=True)
class FractionCheck:
    label: str
    value: Fraction

    @property
    def integral(self) -> bool:
        return self.value.denominator == 1


def lemma_int(p: int, j: int, k: int) -> list[FractionCheck]:
    """The four fractions with q = p^j, r = p^k and j + k = 4:

    (2r + 4q - 4) / ((2q - 1)(2q - 4)),  (2r + 4q + 4) / (2q(2q + 1)),
    (2r + 4q - 2) / ((2q - 2)(2q - 3)),  (2r + 4q + 2) / ((2q - 1)(2q + 2)).
    """
    _require_prime(p)
    if j < 1 or k < 1 or j + k != 4:
        raise ValueError(f"need j, k >= 1 with j + k = 4, got ({j},{k})")
    q, r = p**j, p**k
    return [
        FractionCheck("(2p^k+4p^j-4)/((2p^j-1)(2p^j-4))", Fraction(2 * r + 4 * q - 4, (2 * q - 1) * (2 * q - 4))),
        FractionCheck("(2p^k+4p^j+4)/(2p^j(2p^j+1))", Fraction(2 * r + 4 * q + 4, 2 * q * (2 * q + 1))),
        FractionCheck("(2p^k+4p^j-2)/((2p^j-2)(2p^j-3))", Fraction(2 * r + 4 * q - 2, (2 * q - 2) * (2 * q - 3))),
        FractionCheck("(2p^k+4p^j+2)/((2p^j-1)(2p^j+2))", Fraction(2 * r + 4 * q + 2, (2 * q - 1) * (2 * q + 2))),
    ]


def _unordered_solutions(p: int, k: int, rhs: int, odd: bool = False) -> list[tuple[int, int]]:
    """Positive m <= n with p*m*n - k*m - k*n = rhs.

    For fixed m the equation is linear in n:  n = (rhs + k*m) / (p*m - k),
    so it suffices to bound m.  With m <= n,  rhs = n(p*m - k) - k*m
    >= m(p*m - 2k),  hence p*m^2 - 2k*m - rhs <= 0.
    """
    out = []
    m = 1
    while p * m * m - 2 * k * m <= rhs:
        den = p * m - k
        if den > 0:
            num = rhs + k * m
            if num % den == 0:
                n = num // den
                if n >= m and (not odd or (m % 2 and n % 2)):
                    out.append((m, n))
        m += 1
    return out


@dataclass(frozen=True)
class DiophantineReport:
    p: int
    solutions: dict[tuple[int, int], list[tuple[int, int]]]
    odd_cube: list[tuple[int, int]]

    def nonempty(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        return {dk: v for dk, v in self.solutions.items() if v}


def lemma_noi(p: int) -> DiophantineReport:
    """Solutions of p*m*n - k*m - k*n = d*p^2 for (d, k) in {1,2}^2 and odd
    solutions of p*m*n - m - n = p^3, as unordered pairs m <= n."""
    _require_prime(p)
    sols = {(d, k): _unordered_solutions(p, k, d * p * p) for d in (1, 2) for k in (1, 2)}
    return DiophantineReport(p, sols, _unordered_solutions(p, 1, p**3, odd=True))


@dataclass(frozen=True)
class ExclusionReport:
    p: int
    m_residue_mod6: int
    no_Mm: bool
    jk_solutions: list[tuple[int, int]]

    @property
    def no_Mjk(self) -> bool:
        return not self.jk_solutions

    @property
    def excluded(self) -> bool:
        return self.no_Mm and self.no_Mjk


def solvable_exclusions(p: int) -> ExclusionReport:
    """Neither solvable family reaches chi = -p^4.

    M(m) has chi = 4 - m, so m = p^4 + 4, which must be 3 mod 6.  M(j,k) has
    chi = j + k - jk, so (j - 1)(k - 1) = p^4 + 1 with j < k odd and coprime;
    all divisor pairs are checked.
    """
    _require_prime(p)
    m = p**4 + 4
    target = p**4 + 1
    jk = []
    for a in range(1, isqrt(target) + 1):
        if target % a:
            continue
        j, k = a + 1, target // a + 1
        if j < k and j % 2 and k % 2 and gcd(j, k) == 1:
            jk.append((j, k))
    return ExclusionReport(p, m % 6, m % 6 != 3, jk)
