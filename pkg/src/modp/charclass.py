"""Graded presentations of the characteristic-2 cohomology rings of the
classifying stacks in scope (BSO, BO, B mu_p, B Z/2 and their products),
u-class Whitney calculus, restriction homomorphisms to diagonal
subgroups, the Bockstein derivation, and Jacobian injectivity
certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exactalg import (
    F2Matrix,
    FpMatrix,
    Poly,
    PolyRing,
    SubstHom,
    determinant,
    elementary_symmetric,
    partial_derivative,
)
from .groupdata import Series, _conv, one_minus_q_power

DIM_GUARD = 200_000


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    bidegree: tuple[int, int] | None = None
    square_zero: bool = False

    def __post_init__(self):
        if self.degree <= 0:
            raise ValueError(f"generator {self.name} needs positive degree")
        if self.bidegree is not None and sum(self.bidegree) != self.degree:
            raise ValueError(
                f"bidegree {self.bidegree} of {self.name} must add up to {self.degree}")


class GradedPresentation:
    """Generators with degrees (optionally Hodge bidegrees and exterior
    square-zero flags) plus homogeneous relation polynomials."""

    def __init__(self, generators: list[Generator], relations: list[Poly] | None = None,
                 modulus: int = 2, renamed: list[tuple[str, str]] | None = None):
        self.generators = list(generators)
        self.modulus = modulus
        self.ring = PolyRing([g.name for g in self.generators],
                             [g.degree for g in self.generators], modulus)
        self.relations = []
        for rel in (relations or []):
            self.ring.check_same(rel.ring)
            if not rel.is_homogeneous():
                raise ValueError(f"relation {rel} is not homogeneous")
            self.relations.append(rel)
        self.renamed = renamed or []

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def relation(self, text: str) -> Poly:
        return self.ring.poly(text)

    def with_relations(self, *texts: str) -> "GradedPresentation":
        """Parse and install homogeneous relations; returns self."""
        for text in texts:
            rel = self.ring.poly(text)
            if not rel.is_homogeneous():
                raise ValueError(f"relation {text!r} is not homogeneous")
            self.relations.append(rel)
        return self

    # -- series and exact degreewise dimensions ------------------------

    def series(self, truncation: int = 40) -> Series:
        """Hilbert series under the complete-intersection reading: each
        relation and each exterior square contributes a (1-q^e) factor.
        dim_degree is the exact cross-check."""
        num = [1]
        for rel in self.relations:
            num = _conv(num, one_minus_q_power(rel.degree()))
        for g in self.generators:
            if g.square_zero:
                num = _conv(num, one_minus_q_power(2 * g.degree))
        return Series(num, tuple(g.degree for g in self.generators), truncation)

    def _all_relations(self) -> list[Poly]:
        rels = list(self.relations)
        for g in self.generators:
            if g.square_zero:
                rels.append(self.ring.var(g.name) ** 2)
        return rels

    def monomial_basis(self, d: int) -> list[Poly]:
        """Monomials of degree d with square-zero exponents capped at 1
        (a basis only when the relations are monomial; see dim_degree)."""
        caps = {g.name for g in self.generators if g.square_zero}
        out = []
        for mono in self.ring.monomials_of_degree(d):
            if all(e <= 1 for e, g in zip(mono, self.generators) if g.name in caps):
                out.append(Poly(self.ring, {mono: 1}))
        return out

    def dim_degree(self, d: int, guard: int = DIM_GUARD) -> int:
        """Exact dimension of the degree-d component of the quotient:
        count of ambient monomials minus the rank of all relation
        multiples in that degree."""
        if d < 0:
            return 0
        basis = self.ring.monomials_of_degree(d)
        if len(basis) > guard:
            raise ValueError(f"degree {d} needs {len(basis)} monomials (> guard {guard})")
        rels = self._all_relations()
        if not rels:
            return len(basis)
        index = {m: i for i, m in enumerate(basis)}
        if self.modulus == 2:
            rows = []
            for rel in rels:
                e = rel.degree()
                for mono in self.ring.monomials_of_degree(d - e):
                    mask = 0
                    for m in rel.terms:
                        mask |= 1 << index[tuple(a + b for a, b in zip(m, mono))]
                    rows.append(mask)
            rank = F2Matrix(rows, len(basis)).rank()
        else:
            rows = []
            for rel in rels:
                e = rel.degree()
                for mono in self.ring.monomials_of_degree(d - e):
                    row = [0] * len(basis)
                    for m, c in rel.terms.items():
                        row[index[tuple(a + b for a, b in zip(m, mono))]] = c
                    rows.append(row)
            rank = FpMatrix(rows, len(basis), self.modulus).rank() if rows else 0
        return len(basis) - rank

    def to_json(self) -> dict:
        gens = []
        for g in self.generators:
            entry: dict = {"name": g.name, "degree": g.degree}
            if g.bidegree is not None:
                entry["bidegree"] = list(g.bidegree)
            if g.square_zero:
                entry["square_zero"] = True
            gens.append(entry)
        return {"generators": gens, "relations": [str(r) for r in self.relations]}

    def __repr__(self):
        gens = ",".join(g.name for g in self.generators)
        rels = "; ".join(str(r) for r in self.relations) or "0"
        return f"GradedPresentation(k[{gens}]/({rels}))"


# -- the cataloged rings ----------------------------------------------

def bso_presentation(n: int) -> GradedPresentation:
    """k[u_2, ..., u_n] with u_2a in Hodge bidegree (a, a) and u_2a+1 in
    (a+1, a)."""
    if n < 2:
        raise ValueError("need n >= 2")
    gens = []
    for m in range(2, n + 1):
        a = m // 2
        bide = (a, a) if m % 2 == 0 else (a + 1, a)
        gens.append(Generator(f"u{m}", m, bide))
    return GradedPresentation(gens)


def bo_presentation(n: int) -> GradedPresentation:
    """k[u_1, ..., u_2r] for even n; k[v_1, c_1, u_2, ..., u_2r+1]/(v_1^2)
    for odd n (O(2r+1) = SO(2r+1) x mu_2)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n % 2 == 0:
        gens = [Generator("u1", 1, (1, 0))]
        for m in range(2, n + 1):
            a = m // 2
            bide = (a, a) if m % 2 == 0 else (a + 1, a)
            gens.append(Generator(f"u{m}", m, bide))
        return GradedPresentation(gens)
    gens = [Generator("v1", 1, (0, 1), square_zero=True), Generator("c1", 2, (1, 1))]
    for m in range(2, n + 1):
        a = m // 2
        bide = (a, a) if m % 2 == 0 else (a + 1, a)
        gens.append(Generator(f"u{m}", m, bide))
    return GradedPresentation(gens)


def bmu_p_presentation(c_name: str = "c1", v_name: str = "v1",
                       modulus: int = 2) -> GradedPresentation:
    """k[c_1]<v_1>: a polynomial class in bidegree (1,1) and an exterior
    class in bidegree (0,1)."""
    return GradedPresentation(
        [Generator(v_name, 1, (0, 1), square_zero=True), Generator(c_name, 2, (1, 1))],
        modulus=modulus)


def bz2_presentation(name: str = "s") -> GradedPresentation:
    """k[s] with s of degree 1 (group cohomology of Z/2)."""
    return GradedPresentation([Generator(name, 1, (1, 0))])


def point_presentation() -> GradedPresentation:
    return GradedPresentation([])


def kunneth(a: GradedPresentation, b: GradedPresentation) -> GradedPresentation:
    """Tensor product: disjoint union of generators and relations.  Name
    collisions in the second factor get a _b suffix, recorded in
    `renamed`."""
    if a.modulus != b.modulus:
        raise ValueError("coefficient fields differ")
    taken = {g.name for g in a.generators}
    renamed = []
    mapping = {}
    for g in b.generators:
        new = g.name
        while new in taken:
            new = new + "_b"
        if new != g.name:
            renamed.append((g.name, new))
        mapping[g.name] = new
        taken.add(new)
    gens = list(a.generators) + [
        Generator(mapping[g.name], g.degree, g.bidegree, g.square_zero)
        for g in b.generators]
    out = GradedPresentation(gens, modulus=a.modulus, renamed=renamed)
    relations = []
    for rel in a.relations:
        relations.append(_transport(rel, out.ring))
    for rel in b.relations:
        relations.append(_transport(rel, out.ring, mapping))
    out.relations = relations
    return out


def _transport(f: Poly, target: PolyRing, mapping: dict | None = None) -> Poly:
    terms = {}
    for mono, c in f.terms.items():
        e = [0] * len(target.names)
        for i, k in enumerate(mono):
            if k:
                name = f.ring.names[i]
                if mapping:
                    name = mapping[name]
                e[target.var_index(name)] = k
        terms[tuple(e)] = c
    return target.from_terms(terms)


# -- u-class Whitney calculus ------------------------------------------

class UClass:
    """A truncated total class: components[m] is homogeneous of degree m
    and components[0] = 1."""

    def __init__(self, presentation: GradedPresentation, components: list[Poly]):
        self.presentation = presentation
        ring = presentation.ring
        if not components or components[0] != ring.one():
            raise ValueError("u_0 must equal 1")
        for m, f in enumerate(components):
            ring.check_same(f.ring)
            if f and (not f.is_homogeneous() or f.degree() != m):
                raise ValueError(f"component {m} is not homogeneous of degree {m}")
        self.components = list(components)

    @property
    def truncation(self) -> int:
        return len(self.components) - 1

    def __getitem__(self, m: int) -> Poly:
        return self.components[m]

    def __eq__(self, other):
        return (isinstance(other, UClass)
                and self.presentation.ring == other.presentation.ring
                and self.components == other.components)

    def even_part(self) -> "UClass":
        ring = self.presentation.ring
        comps = [f if m % 2 == 0 else ring.zero()
                 for m, f in enumerate(self.components)]
        return UClass(self.presentation, comps)


def unit_uclass(presentation: GradedPresentation, truncation: int) -> UClass:
    ring = presentation.ring
    return UClass(presentation,
                  [ring.one()] + [ring.zero()] * truncation)


def whitney_sum(uE: UClass, uF: UClass) -> UClass:
    """The direct-sum formula: even classes convolve through even inputs
    only, odd classes through the full convolution."""
    if uE.presentation is not uF.presentation and \
            uE.presentation.ring != uF.presentation.ring:
        raise ValueError("classes live in different presentations")
    ring = uE.presentation.ring
    trunc = min(uE.truncation, uF.truncation)
    comps = [ring.one()]
    for m in range(1, trunc + 1):
        total = ring.zero()
        if m % 2 == 0:
            for j in range(0, m + 1, 2):
                total = total + uE[j] * uF[m - j]
        else:
            for l in range(m + 1):
                total = total + uE[l] * uF[m - l]
        comps.append(total)
    return UClass(uE.presentation, comps)


# -- restrictions to diagonal subgroups --------------------------------

def bo2_power_ring(r: int) -> PolyRing:
    """The Hodge cohomology of BO(2)^r mod radical: k[s_1..s_r, t_1..t_r]
    with |s_i| = 1, |t_i| = 2."""
    names = [f"s{i}" for i in range(1, r + 1)] + [f"t{i}" for i in range(1, r + 1)]
    return PolyRing(names, [1] * r + [2] * r, 2)


class RestrictionHom:
    """A degree-preserving SubstHom out of a presentation, checked to kill
    the source relations; `mod_radical` records that nilpotent classes of
    the target were dropped."""

    def __init__(self, source: GradedPresentation, hom: SubstHom,
                 mod_radical: bool = False):
        self.source = source
        self.hom = hom
        self.mod_radical = mod_radical
        for name, img in hom.images.items():
            d = source.generator(name).degree
            if img and (not img.is_homogeneous() or img.degree() != d):
                raise ValueError(f"image of {name} is not homogeneous of degree {d}")
        for rel in source.relations:
            if hom(rel):
                raise ValueError(f"relation {rel} does not map to zero")

    def __call__(self, f: Poly) -> Poly:
        return self.hom(f)

    def image_of(self, name: str) -> Poly:
        return self.hom(self.source.ring.var(name))


def restriction_bso_to_bo2r(n: int) -> RestrictionHom:
    """Restriction to the diagonal BO(2)^r, r = floor(n/2).  Even classes
    go to elementary symmetric functions of the t_i.  Odd classes carry
    the Bockstein term, plus the u_1-correction when the source is the
    full orthogonal group (even n)."""
    if n < 2:
        raise ValueError("need n >= 2")
    r = n // 2
    target = bo2_power_ring(r)
    ts = [f"t{i}" for i in range(1, r + 1)]
    svars = [target.var(f"s{i}") for i in range(1, r + 1)]
    tvars = [target.var(t) for t in ts]
    images = {}
    if n % 2 == 0:
        source = bo_presentation(n)
        s_total = target.zero()
        for s in svars:
            s_total = s_total + s
        images["u1"] = s_total
        for a in range(1, r + 1):
            images[f"u{2 * a}"] = elementary_symmetric(target, a, ts)
        for a in range(1, r):
            total = target.zero()
            for m in range(r):
                others = ts[:m] + ts[m + 1:]
                total = total + svars[m] * elementary_symmetric(target, a, others)
            images[f"u{2 * a + 1}"] = total
    else:
        source = bso_presentation(n)
        for a in range(1, r + 1):
            images[f"u{2 * a}"] = elementary_symmetric(target, a, ts)
            total = target.zero()
            for m in range(r):
                others = ts[:m] + ts[m + 1:]
                total = total + svars[m] * tvars[m] * elementary_symmetric(target, a - 1, others)
            images[f"u{2 * a + 1}"] = total
    return RestrictionHom(source, SubstHom(source.ring, target, images), mod_radical=True)


def k_target_ring(r: int) -> PolyRing:
    """H*(BK)/rad for K = (mu_2)^{r-1} x Z/2: k[s, t_1..t_{r-1}] with t_r
    eliminated through t_1 + ... + t_r = 0."""
    names = ["s"] + [f"t{i}" for i in range(1, r)]
    return PolyRing(names, [1] + [2] * (r - 1), 2)


def collapse_to_K(r: int) -> SubstHom:
    """BO(2)^r -> K: every s_i goes to the one class s and t_r is
    rewritten through the linear relation."""
    source = bo2_power_ring(r)
    target = k_target_ring(r)
    t_last = target.zero()
    for i in range(1, r):
        t_last = t_last + target.var(f"t{i}")
    images = {}
    for i in range(1, r + 1):
        images[f"s{i}"] = target.var("s")
        images[f"t{i}"] = target.var(f"t{i}") if i < r else t_last
    return SubstHom(source, target, images)


def restriction_to_K(n: int) -> RestrictionHom:
    """BSO(n) -> K for odd n: u_2a goes to e_a(t) in the quotient and
    u_2a+1 to a*s*e_a(t), i.e. s*e_a for odd a and zero for even a."""
    if n % 2 == 0 or n < 7:
        raise ValueError("need odd n >= 7")
    r = n // 2
    source = bso_presentation(n)
    target = k_target_ring(r)
    ts = [target.var(f"t{i}") for i in range(1, r)]
    t_last = target.zero()
    for t in ts:
        t_last = t_last + t
    all_t = ts + [t_last]
    s = target.var("s")
    images = {}
    for a in range(1, r + 1):
        e_a = target.zero()
        for comb in itertools.combinations(all_t, a):
            term = target.one()
            for t in comb:
                term = term * t
            e_a = e_a + term
        images[f"u{2 * a}"] = e_a
        images[f"u{2 * a + 1}"] = s * e_a if a % 2 else target.zero()
    return RestrictionHom(source, SubstHom(source.ring, target, images), mod_radical=True)


# -- the Bockstein -----------------------------------------------------

class Derivation:
    """A derivation given by its values on variables, extended by the
    Leibniz rule with exponent arithmetic in the coefficient field."""

    def __init__(self, ring: PolyRing, images: dict):
        self.ring = ring
        self.images = {}
        for name, img in images.items():
            ring.var_index(name)
            ring.check_same(img.ring)
            self.images[name] = img

    def __call__(self, f: Poly) -> Poly:
        self.ring.check_same(f.ring)
        out = self.ring.zero()
        for mono, c in f.terms.items():
            for i, e in enumerate(mono):
                if not e:
                    continue
                name = self.ring.names[i]
                lowered = list(mono)
                lowered[i] = e - 1
                out = out + self.ring.from_terms({tuple(lowered): c * e}) * self.images[name]
        return out


def bockstein(r: int) -> Derivation:
    """The Bockstein on k[s_1..s_r, t_1..t_r], pinned by beta(s_i) = s_i^2
    and beta(t_i) = s_i t_i."""
    ring = bo2_power_ring(r)
    images = {}
    for i in range(1, r + 1):
        s, t = ring.var(f"s{i}"), ring.var(f"t{i}")
        images[f"s{i}"] = s * s
        images[f"t{i}"] = s * t
    return Derivation(ring, images)


# -- Jacobian injectivity certificates ---------------------------------

@dataclass
class JacobianReport:
    variant: str
    r: int
    determinant: Poly
    expected: Poly
    row_factors: list[Poly] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.determinant == self.expected

    @property
    def difference(self) -> Poly:
        return self.determinant - self.expected


def _vandermonde(ring: PolyRing, ts: list[str]) -> Poly:
    out = ring.one()
    for a, b in itertools.combinations(ts, 2):
        out = out * (ring.var(a) + ring.var(b))
    return out


def jacobian_certificate(r: int, variant: str = "O") -> JacobianReport:
    """Certify generic etaleness of the odd-class restriction: the matrix
    of derivatives of the odd u-classes equals the char-2 Vandermonde
    product (O variant) or factors row by row through the rank-(r-1)
    Vandermonde (SO variant)."""
    if not 2 <= r <= 6:
        raise ValueError("desk-scale certificate: 2 <= r <= 6")
    if variant == "O":
        rest = restriction_bso_to_bo2r(2 * r)
        ring = rest.hom.target
        matrix = [[partial_derivative(rest.image_of(f"u{2 * a - 1}"), f"s{j}")
                   for a in range(1, r + 1)] for j in range(1, r + 1)]
        det = determinant(matrix)
        expected = _vandermonde(ring, [f"t{i}" for i in range(1, r + 1)])
        return JacobianReport("O", r, det, expected)
    if variant != "SO":
        raise ValueError("variant must be O or SO")
    # push the BO(2r) images into H*(BH)/rad: s_i -> x_i, s_r -> x_1+...+x_{r-1}
    rest = restriction_bso_to_bo2r(2 * r)
    mid = rest.hom.target
    ring = PolyRing([f"x{i}" for i in range(1, r)] + [f"t{i}" for i in range(1, r + 1)],
                    [1] * (r - 1) + [2] * r, 2)
    x_last = ring.zero()
    for i in range(1, r):
        x_last = x_last + ring.var(f"x{i}")
    to_bh = SubstHom(mid, ring, dict(
        {f"s{i}": ring.var(f"x{i}") for i in range(1, r)},
        **{f"s{r}": x_last},
        **{f"t{i}": ring.var(f"t{i}") for i in range(1, r + 1)}))
    matrix = [[partial_derivative(to_bh(rest.image_of(f"u{2 * a + 1}")), f"x{j}")
               for a in range(1, r)] for j in range(1, r)]
    det = determinant(matrix)
    # row j carries the factor (t_j + t_r); the cofactor is the smaller matrix E
    row_factors = [ring.var(f"t{j}") + ring.var(f"t{r}") for j in range(1, r)]
    e_matrix = []
    for j in range(1, r):
        others = [f"t{i}" for i in range(1, r) if i != j]
        e_matrix.append([elementary_symmetric(ring, a - 1, others) for a in range(1, r)])
    for j in range(r - 1):
        for a in range(r - 1):
            if matrix[j][a] != row_factors[j] * e_matrix[j][a]:
                return JacobianReport("SO", r, det, ring.zero(), row_factors)
    det_e = determinant(e_matrix)
    expected_e = _vandermonde(ring, [f"t{i}" for i in range(1, r)])
    if det_e != expected_e:
        return JacobianReport("SO", r, det_e, expected_e, row_factors)
    expected = det_e
    for f in row_factors:
        expected = expected * f
    return JacobianReport("SO", r, det, expected, row_factors)
