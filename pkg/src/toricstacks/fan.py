"""Rational polyhedral cones and fans over a lattice, with the operations a
toric intersection-theory pipeline needs: face enumeration, star
subdivision, primitive collections, refinement and preimage tests, star
quotients, and facet relation data for orbit closures.

Cones carry primitive ray generators in input order; a fan's rays are
indexed in first-seen order and every report downstream is keyed to that
order.  All geometry is exact: supporting hyperplanes are enumerated by
brute force over ray subsets, which is entirely adequate at the scale this
library targets (rank <= 6, around a dozen rays).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .intlinalg import (
    Matrix,
    Vector,
    cokernel,
    identity,
    kernel_basis,
    matvec,
    snf,
    solve_in_span,
    transpose,
)


class GeometryError(ValueError):
    """Input violates a geometric precondition (zero generator, cone not
    strongly convex, cone not in fan, ...)."""


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitivize(v) -> Vector:
    g = content(v)
    if g == 0:
        raise GeometryError("zero vector cannot generate a ray")
    return tuple(x // g for x in v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _rank(rows, width: int) -> int:
    if not rows:
        return 0
    return width - len(transpose(kernel_basis(rows)))


class Cone:
    """A strongly convex rational polyhedral cone, stored as its primitive
    extreme rays (deduplicated, input order).  Span/perp lattice bases, ray
    coordinates in the span, and inward facet normals are precomputed."""

    __slots__ = ("ambient_rank", "rays", "dim", "span_basis", "perp_rows",
                 "ray_coords", "facet_sets", "facet_normals", "_faces")

    def __init__(self, ambient_rank: int, generators):
        self.ambient_rank = n = int(ambient_rank)
        gens = []
        for v in generators:
            if len(v) != n:
                raise GeometryError("generator length %d, ambient rank %d"
                                    % (len(v), n))
            p = primitivize(v)
            if p not in gens:
                gens.append(p)

        if not gens:
            self.rays = ()
            self.dim = 0
            self.span_basis = tuple(() for _ in range(n))
            self.perp_rows = identity(n)
            self.ray_coords = ()
            self.facet_sets = ()
            self.facet_normals = ()
            self._faces = (frozenset(),)
            return

        # Saturated span lattice: perp of the rays, then perp of the perp.
        perp_rows = transpose(kernel_basis(gens))
        span = kernel_basis(perp_rows) if perp_rows else identity(n)
        d = len(transpose(span))
        coords = []
        for g in gens:
            c = solve_in_span(span, g)
            assert c is not None, "ray escapes its own saturated span"
            coords.append(c)

        facet_sets, span_normals, facet_normals = _facet_data(coords, d, span)
        # Strong convexity: the inward normals must span the dual of the
        # span, otherwise a line survives.
        if _rank(span_normals, d) != d:
            raise GeometryError(
                "cone is not strongly convex: generators %s contain a line"
                % (tuple(gens),))

        # A generator is extreme iff the facets through it cut out a ray:
        # the normals vanishing there must have rank d-1.
        keep = []
        for i in range(len(coords)):
            through = [w for s, w in zip(facet_sets, span_normals) if i in s]
            if _rank(through, d) == d - 1:
                keep.append(i)
        if len(keep) != len(gens):
            gens = [gens[i] for i in keep]
            coords = [coords[i] for i in keep]
            relabel = {old: new for new, old in enumerate(keep)}
            facet_sets = tuple(frozenset(relabel[i] for i in s if i in relabel)
                               for s in facet_sets)

        self.rays = tuple(gens)
        self.dim = d
        self.span_basis = span
        self.perp_rows = perp_rows
        self.ray_coords = tuple(coords)
        self.facet_sets = facet_sets
        self.facet_normals = facet_normals
        self._faces = None

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (self.ambient_rank == other.ambient_rank
                and frozenset(self.rays) == frozenset(other.rays))

    def __hash__(self):
        return hash((self.ambient_rank, frozenset(self.rays)))

    def __repr__(self):
        return "Cone(%d, %r)" % (self.ambient_rank, list(self.rays))

    @property
    def is_zero(self) -> bool:
        return not self.rays

    def contains(self, v) -> bool:
        if len(v) != self.ambient_rank:
            raise GeometryError("point has wrong ambient rank")
        if any(matvec(self.perp_rows, v)):
            return False
        return all(_dot(w, v) >= 0 for w in self.facet_normals)

    def contains_cone(self, other: "Cone") -> bool:
        if other.is_zero:
            return True
        return all(self.contains(r) for r in other.rays)

    def relint_contains(self, v) -> bool:
        if any(matvec(self.perp_rows, v)):
            return False
        return all(_dot(w, v) > 0 for w in self.facet_normals)

    def face_ray_sets(self) -> tuple[frozenset, ...]:
        """All faces as frozensets of local ray indices: the closure of the
        facet sets under intersection, plus the cone itself."""
        if self._faces is None:
            everything = frozenset(range(len(self.rays)))
            found = {everything}
            frontier = {everything}
            while frontier:
                nxt = set()
                for f in frontier:
                    for s in self.facet_sets:
                        g = f & s
                        if g not in found:
                            found.add(g)
                            nxt.add(g)
                frontier = nxt
            self._faces = tuple(sorted(found, key=lambda s: (len(s), sorted(s))))
        return self._faces

    def face_vector_sets(self) -> frozenset:
        return frozenset(frozenset(self.rays[i] for i in s)
                         for s in self.face_ray_sets())


def _facet_data(coords, d, span):
    """Inward facet normals of a full-dimensional cone given by ray
    coordinates in a rank-d lattice.  Brute force over (d-1)-subsets.
    Returns the annihilated ray sets, the normals in span coordinates, and
    their ambient lifts."""
    k = len(coords)
    seen: dict[frozenset, Vector] = {}
    for sub in combinations(range(k), d - 1):
        rows = [coords[i] for i in sub] or [tuple([0] * d)]
        ker = transpose(kernel_basis(rows))
        if len(ker) != 1:
            continue
        w = ker[0]
        pairings = [_dot(w, c) for c in coords]
        if all(p <= 0 for p in pairings):
            w = tuple(-x for x in w)
            pairings = [-p for p in pairings]
        elif not all(p >= 0 for p in pairings):
            continue
        zero_set = frozenset(i for i, p in enumerate(pairings) if p == 0)
        if zero_set in seen:
            continue
        through = [coords[i] for i in zero_set]
        if _rank(through, d) == d - 1:
            seen[zero_set] = w
    sets = tuple(sorted(seen, key=sorted))
    span_normals = tuple(seen[s] for s in sets)
    ambient = []
    span_t = transpose(span)
    for w in span_normals:
        # Lift the span functional to the ambient lattice; the span basis is
        # saturated, so its transpose is surjective and a lift exists.
        lifted = solve_in_span(span_t, w)
        assert lifted is not None
        ambient.append(lifted)
    return sets, span_normals, tuple(ambient)


def make_cone(ambient_rank: int, generators) -> Cone:
    """Cone from integer generators: primitivized, deduplicated, non-extreme
    generators dropped; raises GeometryError if a generator is zero or the
    cone contains a line."""
    return Cone(ambient_rank, generators)


def faces(c: Cone) -> list[Cone]:
    return [Cone(c.ambient_rank, [c.rays[i] for i in sorted(s)])
            for s in c.face_ray_sets()]


def facets(c: Cone) -> list[Cone]:
    if c.is_zero:
        return []
    if c.dim == 1:
        return [Cone(c.ambient_rank, ())]
    return [Cone(c.ambient_rank, [c.rays[i] for i in sorted(s)])
            for s in c.facet_sets]


def classify(c: Cone) -> str:
    """'smooth' (rays extend to a basis of the ambient lattice),
    'simplicial' (rays linearly independent), or 'general'."""
    if c.is_zero:
        return "smooth"
    if len(c.rays) != c.dim:
        return "general"
    diag, _, _ = snf(c.rays)
    if all(diag[i][i] == 1 for i in range(len(c.rays))):
        return "smooth"
    return "simplicial"


def star_vector(c: Cone) -> Vector:
    """Primitive generator of the ray through the sum of the rays."""
    if c.is_zero:
        raise GeometryError("the zero cone has no star vector")
    return primitivize(tuple(sum(col) for col in zip(*c.rays)))


class Fan:
    """A fan: rays in first-seen order plus all cones as frozensets of ray
    indices, closed under faces.  Construction does not check the
    intersection axiom; validate_fan does."""

    __slots__ = ("ambient_rank", "rays", "maximal_cones", "cones", "_cache")

    def __init__(self, ambient_rank: int, maximal, ray_hint=()):
        self.ambient_rank = n = int(ambient_rank)
        used = {r for c in maximal for r in c.rays}
        rays: list[Vector] = []
        index: dict[Vector, int] = {}
        for v in tuple(tuple(r) for r in ray_hint) \
                + tuple(r for c in maximal for r in c.rays):
            if v in used and v not in index:
                index[v] = len(rays)
                rays.append(v)
        self.rays = tuple(rays)

        self._cache: dict[frozenset, Cone] = {}
        sets = []
        for c in maximal:
            if c.ambient_rank != n:
                raise GeometryError("cone ambient rank mismatch")
            s = frozenset(index[r] for r in c.rays)
            sets.append(s)
            self._cache[s] = c
        # In a valid fan containment of cones is containment of ray sets, so
        # the maximal members are the inclusion-maximal sets.
        dedup: list[frozenset] = []
        for s in sets:
            if s not in dedup and not any(s < t for t in sets):
                dedup.append(s)
        self.maximal_cones = tuple(dedup) if dedup else (frozenset(),)

        all_cones = set()
        for s in self.maximal_cones:
            for face in self.cone(s).face_vector_sets():
                all_cones.add(frozenset(index[r] for r in face))
        self.cones = frozenset(all_cones)

    @classmethod
    def from_data(cls, rank: int, rays, max_cones) -> "Fan":
        """Build from the interchange form: a ray list plus 0-based index
        lists.  Rays must be primitive, distinct, each used by some cone,
        and exactly the extreme rays of their cones."""
        rank = int(rank)
        rays = [tuple(int(x) for x in r) for r in rays]
        for i, r in enumerate(rays):
            if len(r) != rank:
                raise GeometryError("ray %d has length %d, rank is %d"
                                    % (i, len(r), rank))
            if not any(r):
                raise GeometryError("ray %d is zero" % i)
            if content(r) != 1:
                raise GeometryError("ray %d = %s is not primitive"
                                    % (i, list(r)))
        if len(set(rays)) != len(rays):
            raise GeometryError("duplicate rays")
        used = set()
        cones = []
        for ci, idxs in enumerate(max_cones):
            idxs = [int(i) for i in idxs]
            for i in idxs:
                if not 0 <= i < len(rays):
                    raise GeometryError(
                        "cone %d uses ray index %d, out of range" % (ci, i))
            used.update(idxs)
            cone = Cone(rank, [rays[i] for i in idxs])
            if frozenset(cone.rays) != frozenset(rays[i] for i in idxs):
                raise GeometryError(
                    "cone %d lists a non-extreme generator" % ci)
            cones.append(cone)
        if rays and used != set(range(len(rays))):
            missing = sorted(set(range(len(rays))) - used)
            raise GeometryError("rays %s appear in no cone" % missing)
        return cls(rank, cones, ray_hint=rays)

    def to_data(self) -> dict:
        return {"rank": self.ambient_rank,
                "rays": [list(r) for r in self.rays],
                "max_cones": [sorted(s) for s in self.maximal_cones]}

    def cone(self, index_set) -> Cone:
        s = frozenset(index_set)
        if s not in self._cache:
            self._cache[s] = Cone(self.ambient_rank,
                                  [self.rays[i] for i in sorted(s)])
        return self._cache[s]

    def cones_of_dim(self, d: int) -> list[frozenset]:
        out = [s for s in self.cones if self.cone(s).dim == d]
        return sorted(out, key=sorted)

    def has_cone(self, c: Cone) -> bool:
        if c.ambient_rank != self.ambient_rank:
            return False
        try:
            s = frozenset(self.rays.index(r) for r in c.rays)
        except ValueError:
            return False
        return s in self.cones

    def index_set_of(self, c: Cone) -> frozenset:
        if not self.has_cone(c):
            raise GeometryError("cone %r is not a cone of the fan" % (c,))
        return frozenset(self.rays.index(r) for r in c.rays)

    def support_dim(self) -> int:
        return max((self.cone(s).dim for s in self.maximal_cones), default=0)


@dataclass(frozen=True)
class FanViolation:
    first: tuple[int, ...]
    second: tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class FanReport:
    ok: bool
    violations: tuple[FanViolation, ...]


def intersect_cones(a: Cone, b: Cone) -> Cone:
    """Exact intersection of two strongly convex cones (again strongly
    convex).  Equalities are the stacked perps, inequalities the stacked
    inward facet normals; extreme rays are enumerated by brute force over
    tight-constraint subsets."""
    n = a.ambient_rank
    eqs = list(a.perp_rows) + list(b.perp_rows)
    span = kernel_basis(eqs) if eqs else identity(n)
    e = len(transpose(span))
    if e == 0:
        return Cone(n, ())
    span_cols = transpose(span)
    ineqs = [tuple(_dot(w, col) for col in span_cols)
             for w in a.facet_normals + b.facet_normals]
    rays = []
    for sub in combinations(range(len(ineqs)), e - 1):
        rows = [ineqs[i] for i in sub] or [tuple([0] * e)]
        ker = transpose(kernel_basis(rows))
        if len(ker) != 1:
            continue
        for y in (ker[0], tuple(-x for x in ker[0])):
            if all(_dot(row, y) >= 0 for row in ineqs):
                v = primitivize(matvec(span, y))
                if v not in rays:
                    rays.append(v)
    return Cone(n, rays)


def validate_fan(f: Fan) -> FanReport:
    """Check the fan axioms.  Faces are present by construction; the
    substantive check is that every pairwise intersection of maximal cones
    is a face of each."""
    violations = []
    maximal = list(f.maximal_cones)
    for i in range(len(maximal)):
        for j in range(i + 1, len(maximal)):
            a, b = f.cone(maximal[i]), f.cone(maximal[j])
            cut = intersect_cones(a, b)
            cut_rays = frozenset(cut.rays)
            if (cut_rays not in a.face_vector_sets()
                    or cut_rays not in b.face_vector_sets()):
                violations.append(FanViolation(
                    first=tuple(sorted(maximal[i])),
                    second=tuple(sorted(maximal[j])),
                    reason="intersection with rays %s is not a common face"
                           % (sorted(cut.rays),)))
    return FanReport(ok=not violations, violations=tuple(violations))


def star_subdivision(f: Fan, c: Cone) -> Fan:
    """Refine f at the cone c: maximal cones not containing c survive; every
    maximal cone containing c is replaced by the joins of the star vector
    with the facets not containing it."""
    if not f.has_cone(c):
        raise GeometryError("subdivision cone is not a cone of the fan")
    if c.is_zero:
        raise GeometryError("cannot subdivide at the zero cone")
    v = star_vector(c)
    new_max: list[Cone] = []
    for s in f.maximal_cones:
        sigma = f.cone(s)
        if not sigma.contains_cone(c):
            new_max.append(sigma)
            continue
        for mu in facets(sigma):
            if mu.contains(v):
                continue
            new_max.append(Cone(f.ambient_rank, list(mu.rays) + [v]))
    return Fan(f.ambient_rank, new_max, ray_hint=f.rays)


def primitive_collections(f: Fan) -> list[frozenset]:
    """Minimal sets of ray indices not contained in any single cone, by
    subset enumeration over the maximal cones."""
    n = len(f.rays)
    maximal = f.maximal_cones
    collections: list[frozenset] = []

    def in_some_cone(s):
        return any(s <= m for m in maximal)

    for size in range(2, n + 1):
        for combo in combinations(range(n), size):
            s = frozenset(combo)
            if in_some_cone(s) or any(c <= s for c in collections):
                continue
            if all(in_some_cone(s - {i}) for i in s):
                collections.append(s)
    return sorted(collections, key=sorted)


def _tiles(sigma: Cone, pieces: list[Cone]) -> bool:
    # Do the pieces (distinct subcones of sigma of its dimension, hence with
    # pairwise disjoint interiors) cover sigma?  Wall criterion: every facet
    # of a piece lies in a facet of sigma or is a facet of exactly two
    # pieces.
    if sigma.is_zero:
        return bool(pieces)
    if not pieces:
        return False
    sigma_facets = facets(sigma)
    for t in pieces:
        for wall in facets(t):
            if wall.is_zero:
                continue  # sigma has dimension 1; the origin is boundary
            if any(fc.contains_cone(wall) for fc in sigma_facets):
                continue
            shared = sum(1 for t2 in pieces
                         if frozenset(wall.rays) in t2.face_vector_sets())
            if shared != 2:
                return False
    return True


def is_refinement(f2: Fan, f1: Fan) -> bool:
    """True iff every cone of f2 lies in a cone of f1 and the supports
    coincide."""
    if f2.ambient_rank != f1.ambient_rank:
        return False
    f1_max = [f1.cone(s) for s in f1.maximal_cones]
    for s in f2.maximal_cones:
        tau = f2.cone(s)
        if not any(big.contains_cone(tau) for big in f1_max):
            return False
    # Reverse inclusion of supports: each maximal cone of f1 must be tiled
    # by the equal-dimensional f2 cones it contains.
    for sigma in f1_max:
        pieces = [f2.cone(s) for s in f2.cones
                  if f2.cone(s).dim == sigma.dim
                  and sigma.contains_cone(f2.cone(s))]
        if not _tiles(sigma, pieces):
            return False
    return True


def minimal_containing_cone(f: Fan, c: Cone) -> frozenset | None:
    """Index set of the smallest-dimensional cone of f containing c (unique
    when it exists), or None."""
    best = None
    for s in f.cones:
        cone = f.cone(s)
        if cone.contains_cone(c):
            if best is None or cone.dim < f.cone(best).dim:
                best = s
    return best


def preimage_orbit_closure(f2: Fan, f1: Fan, c: Cone) -> list[Cone]:
    """The inclusion-minimal cones of the refinement f2 whose relative
    interior meets the relative interior of c, i.e. whose minimal containing
    f1-cone is c.  These index the components dominating the orbit closure
    of c."""
    if not is_refinement(f2, f1):
        raise GeometryError("first fan does not refine the second")
    if not f1.has_cone(c):
        raise GeometryError("cone is not a cone of the coarse fan")
    hits = []
    for s in f2.cones:
        tau = f2.cone(s)
        m = minimal_containing_cone(f1, tau)
        if m is not None and f1.cone(m) == c:
            hits.append(tau)
    minimal = [t for t in hits
               if not any(h is not t and t.contains_cone(h) for h in hits)]
    return sorted(minimal, key=lambda t: (t.dim, sorted(t.rays)))


@dataclass(frozen=True)
class StarQuotient:
    """Projection of the star of a ray to the quotient lattice.

    `projection` has quotient-rank many rows and kills exactly the ray.
    `pairs` maps surviving source ray indices to quotient ray indices
    together with the multiplicity of the projected generator over its
    primitive (1 means the projection is itself primitive); `dropped` lists
    source rays whose image is not extreme in the quotient."""
    fan: Fan
    projection: Matrix
    ray_index: int
    pairs: tuple[tuple[int, int, int], ...]
    dropped: tuple[int, ...]


def star_quotient_fan(f: Fan, ray) -> StarQuotient:
    """The fan of the orbit closure of a ray: every cone containing the ray,
    projected to the quotient of the ambient lattice by the ray's
    generator."""
    ray = tuple(int(x) for x in ray)
    if ray not in f.rays:
        raise GeometryError("%s is not a ray of the fan" % (ray,))
    ri = f.rays.index(ray)
    n = f.ambient_rank
    q = transpose(kernel_basis((ray,)))  # rows: saturated perp of the ray
    star_max = [s for s in f.maximal_cones if ri in s]
    cones = [Cone(n - 1, [matvec(q, f.rays[i]) for i in sorted(s) if i != ri])
             for s in star_max]
    quotient = Fan(n - 1, cones)

    pairs = []
    dropped = []
    for i in sorted({j for s in star_max for j in s if j != ri}):
        img = matvec(q, f.rays[i])
        mult = content(img)
        prim = primitivize(img)
        if prim in quotient.rays:
            pairs.append((i, quotient.rays.index(prim), mult))
        else:
            dropped.append(i)
    return StarQuotient(fan=quotient, projection=q, ray_index=ri,
                        pairs=tuple(pairs), dropped=tuple(dropped))


@dataclass(frozen=True)
class OrbitRelationDatum:
    """Facet pair (tau inside sigma) with the data entering divisor-of-
    character relations: a basis of the characters vanishing on tau, and a
    lattice point of the span of sigma generating the rank-one quotient of
    the span lattices, oriented into sigma."""
    tau_rays: tuple[Vector, ...]
    sigma_rays: tuple[Vector, ...]
    m_tau_basis: tuple[Vector, ...]
    n_gen: Vector


def orbit_relation_data(f: Fan, tau: Cone) -> list[OrbitRelationDatum]:
    """For every fan cone sigma having tau as a facet: the characters
    conormal to tau and the oriented generator transverse to tau in sigma."""
    if not f.has_cone(tau):
        raise GeometryError("cone is not a cone of the fan")
    n = f.ambient_rank
    m_basis = tuple(transpose(kernel_basis(tau.rays))) if tau.rays \
        else tuple(identity(n))
    out = []
    for s in f.cones_of_dim(tau.dim + 1):
        sigma = f.cone(s)
        if frozenset(tau.rays) not in sigma.face_vector_sets():
            continue
        # Generator of span(sigma)/span(tau): both span lattices are
        # saturated, so the quotient is Z and a preferred lift exists.
        coord_cols = []
        for col in transpose(tau.span_basis):
            c = solve_in_span(sigma.span_basis, col)
            assert c is not None
            coord_cols.append(c)
        rel = transpose(coord_cols) if coord_cols \
            else tuple(() for _ in range(sigma.dim))
        quot = cokernel(rel)
        assert quot.structure() == (1, ()), "span quotient is not Z"
        n_gen = matvec(sigma.span_basis, quot.lift_coords((1,)))
        # Orient into sigma using the inward normal of tau as a facet.
        w = None
        for fs, fn in zip(sigma.facet_sets, sigma.facet_normals):
            if frozenset(sigma.rays[i] for i in fs) == frozenset(tau.rays):
                w = fn
                break
        assert w is not None, "tau is a face but not a facet"
        pairing = _dot(w, n_gen)
        assert pairing != 0
        if pairing < 0:
            n_gen = tuple(-x for x in n_gen)
        out.append(OrbitRelationDatum(
            tau_rays=tau.rays, sigma_rays=sigma.rays,
            m_tau_basis=m_basis, n_gen=n_gen))
    return out
