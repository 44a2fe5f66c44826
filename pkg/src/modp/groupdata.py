"""Static catalog of split reductive group data: fundamental degrees, bad
and torsion primes, small-rank Weyl group enumeration, and Poincare
polynomials of flag varieties."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

SIMPLE_FAMILIES = ("A", "B", "C", "D", "G2", "F4", "E6", "E7", "E8")
MATRIX_FAMILIES = ("GL", "SO", "O", "Sp", "Spin")

_EXCEPTIONAL_RANK = {"G2": 2, "F4": 4, "E6": 6, "E7": 7, "E8": 8}
_EXCEPTIONAL_DEGREES = {
    "G2": [2, 6],
    "F4": [2, 6, 8, 12],
    "E6": [2, 5, 6, 8, 9, 12],
    "E7": [2, 6, 8, 10, 12, 14, 18],
    "E8": [2, 8, 12, 14, 18, 20, 24, 30],
}


@dataclass(frozen=True)
class GroupSpec:
    """A cataloged group.  For the simple families the rank is the Lie
    rank; for GL/SO/O/Sp/Spin it is the matrix size n."""

    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        if fam not in SIMPLE_FAMILIES + MATRIX_FAMILIES:
            raise ValueError(f"unknown family {fam!r}")
        if fam in _EXCEPTIONAL_RANK and n != _EXCEPTIONAL_RANK[fam]:
            raise ValueError(f"{fam} has rank {_EXCEPTIONAL_RANK[fam]}, got {n}")
        minimum = {"A": 1, "B": 1, "C": 1, "D": 3, "GL": 1, "SO": 2, "O": 1,
                   "Sp": 2, "Spin": 3}
        if fam in minimum and n < minimum[fam]:
            raise ValueError(f"{fam} requires rank >= {minimum[fam]}, got {n}")
        if fam == "Sp" and n % 2:
            raise ValueError("Sp takes an even matrix size 2n")

    def lie_rank(self) -> int:
        if self.family in ("SO", "O", "Spin"):
            return self.rank // 2
        if self.family == "Sp":
            return self.rank // 2
        if self.family == "GL":
            return self.rank
        return self.rank

    def __str__(self):
        return f"{self.family}{self.rank}"


def fundamental_degrees(g: GroupSpec) -> list[int]:
    """Degrees of the generators of the characteristic-zero Weyl
    invariants; their product is the Weyl group order."""
    fam, n = g.family, g.rank
    if fam == "A":
        return list(range(2, n + 2))
    if fam in ("B", "C"):
        return [2 * i for i in range(1, n + 1)]
    if fam == "D":
        return sorted([2 * i for i in range(1, n)] + [n])
    if fam in _EXCEPTIONAL_DEGREES:
        return list(_EXCEPTIONAL_DEGREES[fam])
    if fam == "GL":
        return list(range(1, n + 1))
    if fam == "Sp":
        return fundamental_degrees(GroupSpec("C", n // 2))
    if fam in ("SO", "O", "Spin"):
        r = n // 2
        if n % 2:
            return fundamental_degrees(GroupSpec("B", r))
        return fundamental_degrees(GroupSpec("D", r)) if r >= 3 else \
            sorted([2 * i for i in range(1, r)] + [r])
    raise ValueError(f"no degree data for {g}")


def good_primes_excluded(g: GroupSpec) -> frozenset[int]:
    """The bad primes, by family label: none for type A, {2} for B/C/D,
    {2,3} for the exceptional groups, {2,3,5} for E8."""
    fam = g.family
    if fam in ("A", "GL"):
        return frozenset()
    if fam in ("B", "C", "D", "SO", "O", "Sp", "Spin"):
        return frozenset({2})
    if fam == "E8":
        return frozenset({2, 3, 5})
    if fam in ("G2", "F4", "E6", "E7"):
        return frozenset({2, 3})
    raise ValueError(f"no prime data for {g}")


def torsion_primes(g: GroupSpec) -> frozenset[int]:
    """Torsion primes (where H*(BG_C; Z) has p-torsion).  Every torsion
    prime is bad, but not conversely: Sp(2n) at 2 and G2 at 3 are bad and
    torsion-free.  Low ranks follow the type aliases B2=C2, D3=A3."""
    fam, n = g.family, g.rank
    if fam in ("A", "C", "GL", "Sp"):
        return frozenset()
    if fam == "B":
        return frozenset({2}) if n >= 3 else frozenset()
    if fam == "D":
        return frozenset({2}) if n >= 4 else frozenset()
    if fam == "G2":
        return frozenset({2})
    if fam in ("F4", "E6", "E7"):
        return frozenset({2, 3})
    if fam == "E8":
        return frozenset({2, 3, 5})
    if fam == "Spin":
        return frozenset({2}) if n >= 7 else frozenset()
    if fam in ("SO", "O"):
        return frozenset({2}) if n >= 3 else frozenset()
    raise ValueError(f"no torsion data for {g}")


# -- Hilbert/Poincare series ------------------------------------------

def _conv(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class Series:
    """numerator(q) / prod_{d in denominator} (1 - q^d), expanded exactly
    on demand."""

    def __init__(self, numerator=(1,), denominator=(), truncation: int = 32):
        self.numerator = tuple(numerator)
        self.denominator = tuple(sorted(denominator))
        self.truncation = truncation

    def coefficients(self, order: int | None = None) -> list[int]:
        order = self.truncation if order is None else order
        c = list(self.numerator[: order + 1])
        c += [0] * (order + 1 - len(c))
        for d in self.denominator:
            for k in range(d, order + 1):
                c[k] += c[k - d]
        return c

    def coefficient(self, d: int) -> int:
        return self.coefficients(d)[d]

    def __mul__(self, other: "Series") -> "Series":
        return Series(_conv(list(self.numerator), list(other.numerator)),
                      self.denominator + other.denominator,
                      max(self.truncation, other.truncation))

    def as_polynomial(self) -> list[int]:
        """Exact quotient as a coefficient list; raises if the denominator
        does not divide the numerator."""
        f = list(self.numerator)
        for d in self.denominator:
            deg = len(f) - 1
            if deg < d:
                raise ValueError("denominator does not divide numerator")
            g = [0] * (deg - d + 1)
            for k in range(len(g)):
                g[k] = f[k] + (g[k - d] if k >= d else 0)
            for k in range(len(g), deg + 1):
                if f[k] != (-g[k - d] if k - d < len(g) else 0):
                    raise ValueError("denominator does not divide numerator")
            f = g
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        return f

    def value_at_one(self) -> int:
        return sum(self.as_polynomial())

    def is_palindromic(self) -> bool:
        c = self.as_polynomial()
        return c == c[::-1]

    def __repr__(self):
        return f"Series(num={list(self.numerator)}, den={list(self.denominator)})"


def one_minus_q_power(d: int) -> list[int]:
    out = [0] * (d + 1)
    out[0], out[d] = 1, -1
    return out


def flag_poincare(g: GroupSpec) -> Series:
    """Poincare polynomial of the full flag variety: the length generating
    function of W, prod (1-q^{d_i}) / (1-q)^rank."""
    degrees = fundamental_degrees(g)
    num = [1]
    for d in degrees:
        num = _conv(num, one_minus_q_power(d))
    return Series(num, (1,) * len(degrees), truncation=sum(degrees))


def isotropic_grassmannian_poincare(n: int) -> Series:
    """Poincare polynomial of the maximal isotropic Grassmannian of
    SO(n): prod_{i=1}^{s} (1+q^i) with s = floor((n-1)/2)."""
    if n < 2:
        raise ValueError("need n >= 2")
    s = (n - 1) // 2
    num = [1]
    for i in range(1, s + 1):
        factor = [0] * (i + 1)
        factor[0] = factor[i] = 1
        num = _conv(num, factor)
    return Series(num, (), truncation=s * (s + 1) // 2)


# -- explicit Weyl groups at small rank --------------------------------

def weyl_elements(g: GroupSpec) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Explicit enumeration of W as signed permutations (perm, signs),
    for the classical families at rank <= 5."""
    fam, n = g.family, g.rank
    if fam in ("SO", "O", "Spin"):
        fam = "B" if n % 2 else "D"
        n //= 2
    if fam == "Sp":
        fam, n = "C", n // 2
    if fam == "GL":
        fam = "A"
        n -= 1
    if fam not in ("A", "B", "C", "D"):
        raise ValueError(f"explicit enumeration is for classical families, not {g}")
    if n > 5:
        raise ValueError(
            "rank > 5: use the generator-based Weyl actions in modp.invariants")
    if fam == "A":
        return [(p, (1,) * (n + 1)) for p in itertools.permutations(range(n + 1))]
    out = []
    for p in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if fam == "D" and signs.count(-1) % 2:
                continue
            out.append((p, signs))
    return out


_CHAIN_FAMILIES = ("A", "B", "C", "D")


def cartan_matrix(family: str, rank: int) -> list[list[int]]:
    if family in _CHAIN_FAMILIES:
        a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if family == "B" and rank >= 2:
            a[rank - 1][rank - 2] = -2
        if family == "C" and rank >= 2:
            a[rank - 2][rank - 1] = -2
        if family == "D":
            if rank < 3:
                raise ValueError("D needs rank >= 3")
            a[rank - 1][rank - 2] = a[rank - 2][rank - 1] = 0
            a[rank - 1][rank - 3] = a[rank - 3][rank - 1] = -1
        return a
    if family == "G2":
        return [[2, -1], [-3, 2]]
    if family == "F4":
        return [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    raise ValueError(f"no Cartan matrix for family {family!r}")


def weyl_length_series(g: GroupSpec) -> list[int]:
    """Coefficients of sum_W q^{l(w)}, where the length is the BFS
    distance from the identity in the simple-reflection Cayley graph.
    This is the independent oracle for flag_poincare."""
    fam, n = g.family, g.rank
    if fam in ("SO", "O", "Spin"):
        fam, n = ("B" if n % 2 else "D"), n // 2
    if fam == "Sp":
        fam, n = "C", n // 2
    if fam == "GL":
        fam, n = "A", n - 1
    if fam in _CHAIN_FAMILIES and n > 6:
        raise ValueError("BFS enumeration is desk scale: rank <= 6")
    a = cartan_matrix(fam, n)
    rank = len(a)
    gens = []
    for i in range(rank):
        # s_i maps basis vector alpha_j to alpha_j - a[i][j] alpha_i
        m = [[1 if r == c else 0 for c in range(rank)] for r in range(rank)]
        for j in range(rank):
            m[i][j] -= a[i][j]
        gens.append(tuple(tuple(row) for row in m))

    def mul(x, y):
        return tuple(tuple(sum(x[r][k] * y[k][c] for k in range(rank))
                           for c in range(rank)) for r in range(rank))

    ident = tuple(tuple(1 if r == c else 0 for c in range(rank)) for r in range(rank))
    seen = {ident}
    frontier = [ident]
    counts = [1]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = mul(w, s)
                if ws not in seen:
                    seen.add(ws)
                    nxt.append(ws)
        if nxt:
            counts.append(len(nxt))
        frontier = nxt
    return counts
