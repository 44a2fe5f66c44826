"""Weyl group actions on character-lattice polynomial rings in
characteristic p, the eta/mu invariant products for the spin groups, and
degree-by-degree verification of claimed invariant-ring presentations
against a brute-force kernel oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exactalg import (
    F2Matrix,
    FpMatrix,
    Poly,
    PolyRing,
    SubstHom,
    elementary_symmetric,
    f2_kernel_basis,
    _f2_pivot_rows,
)
from .groupdata import Series

MONOMIAL_GUARD = 200_000


class WeylAction:
    """A finite list of grading-preserving ring endomorphism generators.

    `xs` are the values of the torus coordinates x_1..x_r inside the ring
    (the last one may be the eliminated variable, rewritten through the
    linear relation x_1 + ... + x_r = 0), and `A` is the extra spin weight
    when present."""

    def __init__(self, ring: PolyRing, generators: list[tuple[str, SubstHom]],
                 xs: list[Poly], A: Poly | None = None, label: str = ""):
        self.ring = ring
        self.generators = generators
        self.xs = xs
        self.A = A
        self.label = label

    def sub_action(self, names: list[str]) -> "WeylAction":
        keep = [(n, h) for n, h in self.generators if n in set(names)]
        return WeylAction(self.ring, keep, self.xs, self.A, f"{self.label}[sub]")

    def __repr__(self):
        return f"WeylAction({self.label}, {len(self.generators)} generators)"


def _quotient_ring_xs(r: int, p: int, extra: tuple[str, ...] = ()) -> tuple[PolyRing, list[Poly]]:
    """F_p[x_1..x_{r-1}, extra...] with x_r eliminated through
    x_1 + ... + x_r = 0."""
    names = [f"x{i}" for i in range(1, r)] + list(extra)
    ring = PolyRing(names, modulus=p)
    xs = [ring.var(f"x{i}") for i in range(1, r)]
    last = ring.zero()
    for v in xs:
        last = last - v
    xs.append(last)
    return ring, xs


def _perm_hom(ring: PolyRing, xs: list[Poly], i: int, j: int,
              fixed: tuple[str, ...] = ()) -> SubstHom:
    """Transposition of x_{i+1} and x_{j+1} on a (possibly eliminated)
    coordinate ring."""
    images = {}
    r = len(xs)
    for k in range(r):
        name = f"x{k + 1}"
        if name not in ring._index:
            continue
        target = j if k == i else i if k == j else k
        images[name] = xs[target]
    for name in fixed:
        images[name] = ring.var(name)
    return SubstHom(ring, ring, images)


def spin_action(n: int, p: int = 2) -> WeylAction:
    """The Weyl group of Spin(n) acting on F_2[x_1..x_r, A]/(x_1+...+x_r):
    S_r permutes the x_i and fixes A; the sign part acts through
    eps_i(A) = A - x_i (odd n) or eps_1 eps_j (even n), trivially on the
    x_i themselves mod 2."""
    if p != 2:
        raise ValueError("the x/A model of the spin character lattice is defined mod 2 only")
    if n < 6:
        raise ValueError("need n >= 6 (smaller spin groups have symplectic factors)")
    r = n // 2
    ring, xs = _quotient_ring_xs(r, 2, extra=("A",))
    A = ring.var("A")
    gens: list[tuple[str, SubstHom]] = []
    for i, j in itertools.combinations(range(r), 2):
        gens.append((f"s({i + 1},{j + 1})", _perm_hom(ring, xs, i, j, fixed=("A",))))
    fixed_x = {name: ring.var(name) for name in ring.names if name != "A"}
    if n % 2:
        for i in range(r):
            gens.append((f"eps{i + 1}", SubstHom(ring, ring, dict(fixed_x, A=A + xs[i]))))
    else:
        for j in range(1, r):
            gens.append((f"eps1*eps{j + 1}",
                         SubstHom(ring, ring, dict(fixed_x, A=A + xs[0] + xs[j]))))
    return WeylAction(ring, gens, xs, A, label=f"Spin({n}) mod {p}")


def classical_action(family: str, rank: int, p: int) -> WeylAction:
    """W(B/C/D) acting on F_p[x_1..x_r]: permutations plus sign changes
    (the sign part is trivial when p = 2)."""
    if family not in ("B", "C", "D"):
        raise ValueError(f"classical_action takes B, C or D, not {family!r}")
    ring = PolyRing([f"x{i}" for i in range(1, rank + 1)], modulus=p)
    xs = [ring.var(f"x{i}") for i in range(1, rank + 1)]
    gens = []
    for i, j in itertools.combinations(range(rank), 2):
        gens.append((f"s({i + 1},{j + 1})", _perm_hom(ring, xs, i, j)))
    ident = {n: ring.var(n) for n in ring.names}
    if family in ("B", "C"):
        for i in range(rank):
            gens.append((f"eps{i + 1}",
                         SubstHom(ring, ring, dict(ident, **{f"x{i + 1}": -xs[i]}))))
    else:
        for j in range(1, rank):
            gens.append((f"eps1*eps{j + 1}",
                         SubstHom(ring, ring, dict(ident, x1=-xs[0],
                                                   **{f"x{j + 1}": -xs[j]}))))
    return WeylAction(ring, gens, xs, label=f"{family}{rank} mod {p}")


def symmetric_quotient_action(r: int, p: int = 2) -> WeylAction:
    """S_r acting on F_p[x_1..x_r]/(x_1+...+x_r) (the Nakajima setting)."""
    if r < 2:
        raise ValueError("need r >= 2")
    ring, xs = _quotient_ring_xs(r, p)
    gens = [(f"s({i + 1},{j + 1})", _perm_hom(ring, xs, i, j))
            for i, j in itertools.combinations(range(r), 2)]
    return WeylAction(ring, gens, xs, label=f"S{r} on quotient mod {p}")


def _subset_product(action: WeylAction, subsets) -> Poly:
    out = action.ring.one()
    for I in subsets:
        factor = action.A
        for i in I:
            factor = factor - action.xs[i]
        out = out * factor
    return out


def eta(action: WeylAction, j: int) -> Poly:
    """eta_j = prod over all subsets I of {1..j} of (A - sum_I x_i);
    degree 2^j, invariant under eps_1..eps_j."""
    r = len(action.xs)
    if action.A is None:
        raise ValueError("eta needs the spin model with the A variable")
    if not 1 <= j <= r - 1:
        raise ValueError(f"eta index out of range: need 1 <= j <= {r - 1}, got {j}")
    return _subset_product(
        action, (I for k in range(j + 1) for I in itertools.combinations(range(j), k)))


def mu(action: WeylAction, j: int) -> Poly:
    """mu_j = prod over even-size subsets I of {1..j} of (A - sum_I x_i);
    degree 2^(j-1), mu_1 = A, invariant under the eps_1 eps_i."""
    r = len(action.xs)
    if action.A is None:
        raise ValueError("mu needs the spin model with the A variable")
    if not 1 <= j <= r:
        raise ValueError(f"mu index out of range: need 1 <= j <= {r}, got {j}")
    return _subset_product(
        action, (I for k in range(0, j + 1, 2) for I in itertools.combinations(range(j), k)))


# -- brute-force invariant dimensions ---------------------------------

def _variable_permutation(hom: SubstHom) -> dict | None:
    """Index map if the hom permutes variables with coefficient 1."""
    perm = {}
    for name in hom.source.names:
        img = hom.images.get(name)
        if img is None or len(img.terms) != 1:
            return None
        ((mono, c),) = img.terms.items()
        if c != 1 or sum(mono) != 1:
            return None
        perm[hom.source.var_index(name)] = mono.index(1)
    return perm


def _orbit_classes(basis: list, perms: list[dict]) -> list[list[int]]:
    index = {m: i for i, m in enumerate(basis)}
    parent = list(range(len(basis)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for perm in perms:
        for i, mono in enumerate(basis):
            img = [0] * len(mono)
            for k, e in enumerate(mono):
                img[perm[k]] = e
            j = index[tuple(img)]
            ra, rb = find(i), find(j)
            if ra != rb:
                parent[ra] = rb
    classes: dict[int, list[int]] = {}
    for i in range(len(basis)):
        classes.setdefault(find(i), []).append(i)
    return list(classes.values())


def brute_invariant_dimension(action: WeylAction, d: int,
                              guard: int = MONOMIAL_GUARD) -> int:
    """dim of the joint kernel of (g - 1) on the weighted-degree-d
    component.  Variable permutations are folded into orbit sums first;
    the remaining generators are intersected by F_p elimination."""
    ring = action.ring
    basis = ring.monomials_of_degree(d)
    if len(basis) > guard:
        raise ValueError(
            f"degree {d} needs {len(basis)} monomials (> guard {guard}); lower the degree")
    if not basis:
        return 0
    perm_maps, linear_gens = [], []
    for name, hom in action.generators:
        perm = _variable_permutation(hom)
        if perm is not None:
            perm_maps.append(perm)
        else:
            linear_gens.append(hom)
    if ring.modulus == 2:
        return len(_invariant_vectors_f2(ring, basis, perm_maps, linear_gens, d))
    return len(_invariant_vectors_fp(ring, basis, perm_maps, linear_gens, d))


def _invariant_vectors_f2(ring, basis, perm_maps, linear_gens, d) -> list[int]:
    index = {m: i for i, m in enumerate(basis)}

    def to_mask(f: Poly) -> int:
        mask = 0
        for mono in f.terms:
            mask |= 1 << index[mono]
        return mask

    def to_poly(mask: int) -> Poly:
        terms = {}
        while mask:
            i = mask.bit_length() - 1
            terms[basis[i]] = 1
            mask ^= 1 << i
        return Poly(ring, terms)

    if perm_maps:
        vecs = []
        for cls in _orbit_classes(basis, perm_maps):
            m = 0
            for i in cls:
                m |= 1 << i
            vecs.append(m)
    else:
        vecs = [1 << i for i in range(len(basis))]

    for hom in linear_gens:
        polys = [to_poly(v) for v in vecs]
        rows: dict[int, int] = {}
        for col, (v, f) in enumerate(zip(vecs, polys)):
            w = to_mask(hom(f)) ^ v
            while w:
                j = w.bit_length() - 1
                rows[j] = rows.get(j, 0) | (1 << col)
                w ^= 1 << j
        kernel = f2_kernel_basis(list(rows.values()), len(vecs))
        new_vecs = []
        for combo in kernel:
            m = 0
            while combo:
                c = combo.bit_length() - 1
                m ^= vecs[c]
                combo ^= 1 << c
            new_vecs.append(m)
        vecs = new_vecs
        if not vecs:
            break
    return vecs


def _invariant_vectors_fp(ring, basis, perm_maps, linear_gens, d) -> list:
    p = ring.modulus
    index = {m: i for i, m in enumerate(basis)}
    n = len(basis)
    if perm_maps:
        vecs = []
        for cls in _orbit_classes(basis, perm_maps):
            v = [0] * n
            for i in cls:
                v[i] = 1
            vecs.append(v)
    else:
        vecs = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    for hom in linear_gens:
        rows = []
        for i in range(n):
            rows.append([0] * len(vecs))
        for col, v in enumerate(vecs):
            f = Poly(ring, {basis[i]: c for i, c in enumerate(v) if c})
            g = hom(f)
            w = [0] * n
            for mono, c in g.terms.items():
                w[index[mono]] = c
            for i in range(n):
                rows[i][col] = (w[i] - v[i]) % p
        kernel = FpMatrix(rows, len(vecs), p).kernel_basis()
        new_vecs = []
        for combo in kernel:
            v = [0] * n
            for c, vec in zip(combo, vecs):
                if c:
                    for i in range(n):
                        v[i] = (v[i] + c * vec[i]) % p
            new_vecs.append(v)
        vecs = new_vecs
        if not vecs:
            break
    return vecs


def brute_invariant_dimension_stacked(action: WeylAction, d: int,
                                      guard: int = MONOMIAL_GUARD) -> int:
    """Reference implementation: stack the (g - 1) matrices for every
    generator and take one kernel.  Used to cross-check the incremental
    path at small sizes."""
    ring = action.ring
    basis = ring.monomials_of_degree(d)
    if len(basis) > guard:
        raise ValueError(f"degree {d} exceeds the monomial guard {guard}")
    if not basis:
        return 0
    index = {m: i for i, m in enumerate(basis)}
    p = ring.modulus
    n = len(basis)
    if p == 2:
        rows: dict[tuple[int, int], int] = {}
        for gi, (name, hom) in enumerate(action.generators):
            for col, mono in enumerate(basis):
                g = hom(Poly(ring, {mono: 1}))
                w = 0
                for m in g.terms:
                    w |= 1 << index[m]
                w ^= 1 << col
                while w:
                    j = w.bit_length() - 1
                    rows[(gi, j)] = rows.get((gi, j), 0) | (1 << col)
                    w ^= 1 << j
        return F2Matrix(list(rows.values()), n).kernel_dimension()
    stacked = []
    for name, hom in action.generators:
        block = [[0] * n for _ in range(n)]
        for col, mono in enumerate(basis):
            g = hom(Poly(ring, {mono: 1}))
            for m, c in g.terms.items():
                block[index[m]][col] = (block[index[m]][col] + c) % p
            block[col][col] = (block[col][col] - 1) % p
        stacked.extend(block)
    return FpMatrix(stacked, n, p).kernel_dimension()


# -- claimed presentations and verification ---------------------------

@dataclass
class ClaimedPresentation:
    """Named generators with degrees and their values inside an action's
    ring; relations stay empty for the polynomial-ring claims in scope."""

    names: list[str]
    values: list[Poly]
    relations: list[Poly] = field(default_factory=list)

    def __post_init__(self):
        self.degrees = []
        for name, v in zip(self.names, self.values):
            if v.is_zero() or not v.is_homogeneous():
                raise ValueError(f"generator {name} must be homogeneous and nonzero")
            self.degrees.append(v.degree())


def presentation_hilbert(cp: ClaimedPresentation) -> Series:
    """Hilbert series of the claimed ring; polynomial-ring claims only."""
    if cp.relations:
        raise ValueError("relations present: certify the quotient with charclass.dim_degree")
    return Series([1], tuple(cp.degrees))


def spin_claimed(action: WeylAction, n: int) -> ClaimedPresentation:
    """The claimed invariant ring for Spin(n): k[c_2..c_r, eta_{r-1}] for
    odd n, k[c_2..c_r, mu_{r-1}] (r even) or k[c_2..c_r, mu_r] (r odd)."""
    r = len(action.xs)
    names = [f"c{i}" for i in range(2, r + 1)]
    values = [_e_of_xs(action, i) for i in range(2, r + 1)]
    if n % 2:
        names.append(f"eta{r - 1}")
        values.append(eta(action, r - 1))
    elif r % 2 == 0:
        names.append(f"mu{r - 1}")
        values.append(mu(action, r - 1))
    else:
        names.append(f"mu{r}")
        values.append(mu(action, r))
    return ClaimedPresentation(names, values)


def _e_of_xs(action: WeylAction, i: int) -> Poly:
    out = action.ring.zero()
    for comb in itertools.combinations(action.xs, i):
        term = action.ring.one()
        for v in comb:
            term = term * v
        out = out + term
    return out


def nakajima_claimed(action: WeylAction) -> ClaimedPresentation:
    """S_r invariants of the quotient ring: k[c_2..c_r] for r >= 3 but
    k[x_1] for r = 2."""
    r = len(action.xs)
    if r == 2:
        return ClaimedPresentation(["x1"], [action.ring.var("x1")])
    names = [f"c{i}" for i in range(2, r + 1)]
    return ClaimedPresentation(names, [_e_of_xs(action, i) for i in range(2, r + 1)])


def classical_claimed(action: WeylAction, family: str, rank: int, p: int) -> ClaimedPresentation:
    """Symmetric functions k[c_1..c_r] when p = 2 (sign part trivial);
    for odd p the B/C invariants are symmetric functions of the squares,
    and D keeps e_r(x) itself."""
    if p == 2:
        names = [f"c{i}" for i in range(1, rank + 1)]
        return ClaimedPresentation(names, [_e_of_xs(action, i) for i in range(1, rank + 1)])
    square = SubstHom(action.ring, action.ring,
                      {n: action.ring.var(n) * action.ring.var(n) for n in action.ring.names})
    names, values = [], []
    top = rank if family in ("B", "C") else rank - 1
    for i in range(1, top + 1):
        names.append(f"d{2 * i}")
        values.append(square(_e_of_xs(action, i)))
    if family == "D":
        names.append(f"e{rank}")
        values.append(_e_of_xs(action, rank))
    return ClaimedPresentation(names, values)


@dataclass
class DegreeRow:
    degree: int
    invariant_dim: int
    span_rank: int
    series_coeff: int

    @property
    def ok(self) -> bool:
        return self.invariant_dim == self.span_rank == self.series_coeff


@dataclass
class VerifyReport:
    label: str
    claimed: list[str]
    rows: list[DegreeRow]
    failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None and all(r.ok for r in self.rows)


def _degree_products(degrees: list[int], d: int):
    """Exponent vectors e >= 0 with sum e_i * degrees_i = d."""
    out = []
    e = [0] * len(degrees)

    def rec(i, rem):
        if i == len(degrees):
            if rem == 0:
                out.append(tuple(e))
            return
        step = degrees[i]
        for k in range(rem // step, -1, -1):
            e[i] = k
            rec(i + 1, rem - k * step)
        e[i] = 0

    rec(0, d)
    return out


def verify_presentation(action: WeylAction, cp: ClaimedPresentation, dmax: int,
                        guard: int = MONOMIAL_GUARD) -> VerifyReport:
    """Per degree d <= dmax, compare three integers: the brute-force
    invariant dimension, the rank of the span of all degree-d products of
    the claimed generators, and the claimed Hilbert series coefficient."""
    label = action.label
    for gname, value in zip(cp.names, cp.values):
        for hname, hom in action.generators:
            if hom(value) != value:
                return VerifyReport(label, cp.names, [],
                                    failure=f"generator {gname} is not invariant under {hname}")
    series = presentation_hilbert(cp)
    coeffs = series.coefficients(dmax)
    ring = action.ring
    p = ring.modulus
    powers = [[ring.one(), v] for v in cp.values]

    def value_power(i, k):
        while len(powers[i]) <= k:
            powers[i].append(powers[i][-1] * cp.values[i])
        return powers[i][k]

    rows = []
    for d in range(1, dmax + 1):
        basis = ring.monomials_of_degree(d)
        if len(basis) > guard:
            raise ValueError(f"degree {d} exceeds the monomial guard {guard}")
        index = {m: i for i, m in enumerate(basis)}
        vectors = []
        for expo in _degree_products(cp.degrees, d):
            f = ring.one()
            for i, k in enumerate(expo):
                if k:
                    f = f * value_power(i, k)
            vectors.append(f)
        if p == 2:
            masks = []
            for f in vectors:
                m = 0
                for mono in f.terms:
                    m |= 1 << index[mono]
                masks.append(m)
            span_rank = len(_f2_pivot_rows(masks))
        else:
            dense = []
            for f in vectors:
                row = [0] * len(basis)
                for mono, c in f.terms.items():
                    row[index[mono]] = c
                dense.append(row)
            span_rank = FpMatrix(dense, len(basis), p).rank() if dense else 0
        rows.append(DegreeRow(d, brute_invariant_dimension(action, d, guard),
                              span_rank, coeffs[d]))
    return VerifyReport(label, cp.names, rows)


def lemma_inv2_check(ring: PolyRing, a: Poly, x: str, dmax: int) -> VerifyReport:
    """Check degreewise that the invariants of x -> x + a on R[x] are
    exactly the R-span of powers of u = x(x + a)."""
    ring.check_same(a.ring)
    xi = ring.var_index(x)
    if a.is_zero():
        raise ValueError("a = 0 makes the action trivial; lemma hypothesis violated")
    if any(mono[xi] for mono in a.terms):
        raise ValueError(f"a must lie in the base ring (no {x})")
    if not a.is_homogeneous() or a.degree() != ring.weights[xi]:
        raise ValueError(f"a must be homogeneous of the weight of {x}")
    xvar = ring.var(x)
    hom = SubstHom(ring, ring, {n: (xvar + a if n == x else ring.var(n))
                                for n in ring.names})
    action = WeylAction(ring, [("sigma", hom)], [], label=f"Z/2 on {ring}")
    u = xvar * (xvar + a)
    if hom(u) != u:
        return VerifyReport(action.label, ["u"], [], failure="u = x(x+a) is not invariant")
    w = ring.weights[xi]
    rows = []
    for d in range(1, dmax + 1):
        basis = ring.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(basis)}
        masks = []
        count = 0
        for k in range(0, d // (2 * w) + 1):
            uk = u ** k
            for mono in ring.monomials_of_degree(d - 2 * w * k, skip=frozenset({x})):
                f = Poly(ring, {mono: 1}) * uk
                count += 1
                m = 0
                for mm in f.terms:
                    m |= 1 << index[mm]
                masks.append(m)
        span_rank = len(_f2_pivot_rows(masks))
        rows.append(DegreeRow(d, brute_invariant_dimension(action, d), span_rank, count))
    return VerifyReport(action.label, ["u"], rows)
