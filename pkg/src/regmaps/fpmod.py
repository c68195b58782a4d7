"""3x3 matrices over F_p and points of the projective plane PG(2, p).

Vectors are exponent triples ``(a, b, c)`` read as columns; column ``j`` of a
matrix holds the image of the ``j``-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

Row = tuple[int, int, int]


class SingularMatrix(ArithmeticError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class Mat3:
    p: int
    entries: tuple[Row, Row, Row]

    def __post_init__(self):
        rows = tuple(tuple(int(v) % self.p for v in row) for row in self.entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("Mat3 needs three rows of three entries")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, p: int) -> Mat3:
        return cls(p, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def scalar(cls, p: int, k: int) -> Mat3:
        return cls(p, ((k, 0, 0), (0, k, 0), (0, 0, k)))

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]]) -> Mat3:
        return cls(p, tuple(tuple(columns[j][i] for j in range(3)) for i in range(3)))

    def column(self, j: int) -> Row:
        return tuple(self.entries[i][j] for i in range(3))

    def apply(self, v: Sequence[int]) -> Row:
        return tuple(sum(self.entries[i][j] * v[j] for j in range(3)) % self.p for i in range(3))

    def det(self) -> int:
        (a, b, c), (d, e, f), (g, h, i) = self.entries
        return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % self.p

    def __matmul__(self, other: Mat3) -> Mat3:
        return mat_mul(self, other)

    def __pow__(self, n: int) -> Mat3:
        return mat_pow(self, n)

    def __str__(self):
        return "\n".join(" ".join(f"{v:>2}" for v in row) for row in self.entries)


def mat_mul(A: Mat3, B: Mat3) -> Mat3:
    if A.p != B.p:
        raise ValueError(f"moduli differ: {A.p} vs {B.p}")
    return Mat3(A.p, tuple(tuple(sum(A.entries[i][k] * B.entries[k][j] for k in range(3)) for j in range(3)) for i in range(3)))


def mat_inverse(A: Mat3) -> Mat3:
    d = A.det()
    if d == 0:
        raise SingularMatrix(f"matrix is singular mod {A.p}")
    (a, b, c), (d_, e, f), (g, h, i) = A.entries
    adj = (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d_ * i, a * i - c * g, c * d_ - a * f),
        (d_ * h - e * g, b * g - a * h, a * e - b * d_),
    )
    dinv = pow(d, -1, A.p)
    return Mat3(A.p, tuple(tuple(v * dinv for v in row) for row in adj))


def mat_pow(A: Mat3, n: int) -> Mat3:
    if n < 0:
        A, n = mat_inverse(A), -n
    result = Mat3.identity(A.p)
    while n:
        if n & 1:
            result = result @ A
        A = A @ A
        n >>= 1
    return result


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A point of PG(2, p), normalized so its first nonzero coordinate is 1."""

    p: int
    coords: Row

    def __post_init__(self):
        c = tuple(int(v) % self.p for v in self.coords)
        if len(c) != 3:
            raise ValueError("a projective point has three coordinates")
        if c == (0, 0, 0):
            raise ValueError("(0, 0, 0) is not a projective point")
        lead = next(v for v in c if v)
        inv = pow(lead, -1, self.p)
        object.__setattr__(self, "coords", tuple(v * inv % self.p for v in c))

    def scaled(self, j: int) -> Row:
        """The (unnormalized) representative ``j * coords``."""
        return tuple(j * v % self.p for v in self.coords)

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"

    @classmethod
    def parse(cls, p: int, text: str) -> ProjPoint:
        parts = text.strip().strip("()").split(",")
        if len(parts) != 3:
            raise ValueError(f"expected a,b,c; got {text!r}")
        return cls(p, tuple(int(x) for x in parts))


def enumerate_pg2(p: int) -> list[ProjPoint]:
    """All p^2 + p + 1 points of PG(2, p), sorted."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    pts = [(1, b, c) for b, c in product(range(p), repeat=2)]
    pts += [(0, 1, c) for c in range(p)]
    pts.append((0, 0, 1))
    return sorted(ProjPoint(p, c) for c in pts)


def kernel_basis(A: Mat3) -> list[Row]:
    """Basis of the null space of ``A`` (column vectors), by row reduction mod p."""
    p = A.p
    M = [list(r) for r in A.entries]
    pivots = []
    row = 0
    for col in range(3):
        piv = next((r for r in range(row, 3) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [v * inv % p for v in M[row]]
        for r in range(3):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(3) if c not in pivots]
    basis = []
    for fc in free:
        v = [0, 0, 0]
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc] % p
        basis.append(tuple(v))
    return basis


def eigenspace_one(M: Mat3) -> list[ProjPoint]:
    """Projective points of ker(M - I), sorted."""
    p = M.p
    shifted = Mat3(p, tuple(tuple(M.entries[i][j] - (i == j) for j in range(3)) for i in range(3)))
    basis = kernel_basis(shifted)
    if not basis:
        return []
    if len(basis) == 3:
        return enumerate_pg2(p)
    points = set()
    for coeffs in product(range(p), repeat=len(basis)):
        v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(3))
        if v != (0, 0, 0):
            points.add(ProjPoint(p, v))
    return sorted(points)
