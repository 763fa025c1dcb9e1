"""Intersection-theoretic verification pipeline.

Three layers: graded presentations of the quotient rings attached to a fan
(chow_ring_stack), cycle-class groups of the underlying variety assembled
from divisor-of-character relations (chow_groups), and the end-to-end
comparison that star-subdivides a full-dimensional cone, projects onto the
exceptional stratum, and certifies degreewise that the induced ring map is
an isomorphism of abelian groups with torsion-free pieces (verify_vanishing).

The verification covers the two computable legs the reduction needs: the
degreewise ring comparison and the torsion report.  The zero-dimensional
stratum contributes Z in degree 0; that fact is recorded as an assumption
in every report, not recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cox import chow_ideals, cox
from .fan import (
    Cone,
    Fan,
    orbit_relation_data,
    preimage_orbit_closure,
    star_quotient_fan,
    star_subdivision,
    star_vector,
)
from .graded import (
    GradedPresentation,
    RingMap,
    certify_well_defined,
    graded_piece,
    is_iso_up_to,
    make_presentation,
    ring_map,
)
from .intlinalg import AbelianGroup, Vector, cokernel, solve_in_span

POINT_CLASS = "Z"  # degree-0 group of the zero-dimensional stratum, assumed


class ComparisonError(ValueError):
    """The exceptional identification could not be built over Z.

    Raised when a projected ray has no surviving counterpart, the class of
    the subdivision ray has no integral expression in the surviving
    classes, or the substitution fails its well-definedness certificate.
    The condition is surfaced verbatim; nothing is rescaled rationally.
    """


def chow_ring_stack(f: Fan) -> GradedPresentation:
    """Quotient-ring presentation attached to a fan: one variable per ray,
    the kernel lattice as linear relations, one squarefree monomial per
    primitive collection."""
    ideal = chow_ideals(cox(f))
    homs = []
    for coll in ideal.monomial_gens:
        expt = tuple(1 if i in coll else 0 for i in range(ideal.variables))
        homs.append((len(coll), {expt: 1}))
    return make_presentation(ideal.variables, ideal.linear_gens, homs)


def chow_relation_data(f: Fan, k: int):
    """Generators and relation columns for the dimension-k class group.

    Generators are the dimension (rank - k) cones in canonical order;
    every dimension (rank - k - 1) cone tau contributes one column per
    basis vector u of its perp lattice, with entry <u, n_gen> at each cone
    having tau as a facet.
    """
    n = f.ambient_rank
    if not 0 <= k <= n:
        raise ValueError("class dimension %d out of range 0..%d" % (k, n))
    gens = [frozenset(s) for s in f.cones_of_dim(n - k)]
    gen_index = {s: i for i, s in enumerate(gens)}
    columns = []
    for tau_set in f.cones_of_dim(n - k - 1):
        data = orbit_relation_data(f, f.cone(tau_set))
        if not data:
            continue
        for u in data[0].m_tau_basis:
            col = [0] * len(gens)
            for datum in data:
                sigma_set = frozenset(f.rays.index(r)
                                      for r in datum.sigma_rays)
                col[gen_index[sigma_set]] += sum(
                    a * b for a, b in zip(u, datum.n_gen))
            columns.append(tuple(col))
    return tuple(tuple(sorted(s)) for s in gens), tuple(columns)


def chow_groups(f: Fan, k: int) -> AbelianGroup:
    """The dimension-k cycle class group of the fan's variety."""
    gens, cols = chow_relation_data(f, k)
    if cols:
        matrix = tuple(zip(*cols))
    else:
        matrix = tuple(() for _ in gens)
    return cokernel(matrix)


@dataclass(frozen=True)
class Comparison:
    """Everything the exceptional comparison of one cone produced."""

    cone: Cone
    subdivision: Fan
    exceptional: Fan
    star_ray: Vector
    source: GradedPresentation
    target: GradedPresentation
    map: RingMap
    extra_row: Vector  # image form of the subdivision-ray variable
    verdicts: tuple  # ((degree, bool), ...) for 0..max_deg


def _require_full_dim(sigma: Cone) -> None:
    if sigma.dim != sigma.ambient_rank:
        raise ValueError("cone has dimension %d in rank %d; the comparison "
                         "needs a full-dimensional cone"
                         % (sigma.dim, sigma.ambient_rank))


def exceptional_comparison(sigma: Cone, max_deg: int = 4) -> Comparison:
    """Compare the subdivided cone's ring with the exceptional stratum's.

    Builds the star subdivision and the quotient fan of the new ray, maps
    each surviving variable to its projected counterpart, and sends the
    new ray's variable to the integral expression of its class in the
    surviving classes (solved in the character group, torsion included).
    The substitution is certified well-defined before any verdicts are
    computed; see ComparisonError for the failure modes.
    """
    _require_full_dim(sigma)
    f1 = Fan(sigma.ambient_rank, [sigma])
    f2 = star_subdivision(f1, sigma)
    v = star_vector(sigma)
    v_idx = f2.rays.index(v)
    quotient = star_quotient_fan(f2, v)
    if quotient.dropped:
        raise ComparisonError(
            "projected rays %s are not extreme in the quotient; no "
            "variable correspondence exists" % (sorted(quotient.dropped),))
    dst = {src: d for src, d, _mult in quotient.pairs}
    surviving = [i for i in range(len(f2.rays)) if i != v_idx]
    missing = [i for i in surviving if i not in dst]
    if missing:
        raise ComparisonError("rays %s have no image ray in the quotient"
                              % (missing,))

    source = chow_ring_stack(f2)
    target = chow_ring_stack(quotient.fan)
    cd = cox(f2)
    group = cd.char_group
    cols = [tuple(cd.weights[i]) for i in surviving]
    for t, d in enumerate(group.torsion):
        cols.append(tuple(d if j == t else 0
                          for j in range(group.coord_rank)))
    matrix = tuple(zip(*cols)) if cols else \
        tuple(() for _ in range(group.coord_rank))
    sol = solve_in_span(matrix, cd.weights[v_idx])
    if sol is None:
        raise ComparisonError(
            "the class of the subdivision ray has no integral expression "
            "in the surviving ray classes")

    n_target = len(quotient.fan.rays)
    extra = [0] * n_target
    for pos, i in enumerate(surviving):
        extra[dst[i]] += sol[pos]
    substitution = []
    for i in range(len(f2.rays)):
        if i == v_idx:
            substitution.append(tuple(extra))
        else:
            substitution.append(tuple(1 if j == dst[i] else 0
                                      for j in range(n_target)))
    rm = ring_map(source, target, substitution)
    cert = certify_well_defined(rm, max_deg)
    if not cert.ok:
        raise ComparisonError("substitution does not map relations into "
                              "relations; witness %r" % (cert.witness,))
    verdicts = is_iso_up_to(rm, max_deg)
    return Comparison(cone=sigma, subdivision=f2, exceptional=quotient.fan,
                      star_ray=v, source=source, target=target, map=rm,
                      extra_row=tuple(extra),
                      verdicts=tuple(sorted(verdicts.items())))


@dataclass(frozen=True)
class VanishingReport:
    """Outcome of the vanishing verification for one cone.

    pieces lists (degree, free_rank, torsion) of the subdivided stack's
    graded components up to max_deg; degrees above max_deg are unchecked.
    point_class records the assumed degree-0 group of the zero-dimensional
    stratum.  conclusion is True only when the identification was built,
    every degree 1..max_deg compares isomorphically, and every checked
    piece is torsion-free.
    """

    cone_rays: tuple
    star_ray: Vector
    max_deg: int
    identified: bool
    failure: str | None
    extra_row: Vector | None
    verdicts: tuple  # ((degree, bool), ...), empty if not identified
    pieces: tuple  # ((degree, free_rank, torsion), ...)
    point_class: str
    conclusion: bool


def verify_vanishing(sigma: Cone, max_deg: int = 4) -> VanishingReport:
    """Run the exceptional comparison and the torsion report for a cone."""
    _require_full_dim(sigma)
    failure = None
    comparison = None
    try:
        comparison = exceptional_comparison(sigma, max_deg)
    except ComparisonError as exc:
        failure = str(exc)

    if comparison is not None:
        f2 = comparison.subdivision
        star_ray = comparison.star_ray
        source = comparison.source
        verdicts = comparison.verdicts
        extra_row = comparison.extra_row
    else:
        f1 = Fan(sigma.ambient_rank, [sigma])
        f2 = star_subdivision(f1, sigma)
        star_ray = star_vector(sigma)
        source = chow_ring_stack(f2)
        verdicts = ()
        extra_row = None

    pieces = []
    for k in range(max_deg + 1):
        group = graded_piece(source, k).group
        pieces.append((k, group.free_rank, group.torsion))

    identified = comparison is not None
    verdict_map = dict(verdicts)
    conclusion = identified \
        and all(verdict_map.get(k, False) for k in range(1, max_deg + 1)) \
        and all(not torsion for deg, _rank, torsion in pieces if deg >= 1)
    return VanishingReport(cone_rays=sigma.rays, star_ray=star_ray,
                           max_deg=max_deg, identified=identified,
                           failure=failure, extra_row=extra_row,
                           verdicts=verdicts, pieces=tuple(pieces),
                           point_class=POINT_CLASS, conclusion=conclusion)


@dataclass(frozen=True)
class PreimageReport:
    star_ray: Vector
    preimage: tuple  # ray tuples of the cones over the interior
    ok: bool


def preimage_check(sigma: Cone) -> PreimageReport:
    """Check that the subdivision ray's orbit closure is the full preimage
    of the cone's closed stratum: the minimal subdivision cones meeting the
    cone's interior must be exactly the one spanned by the star ray."""
    _require_full_dim(sigma)
    f1 = Fan(sigma.ambient_rank, [sigma])
    f2 = star_subdivision(f1, sigma)
    v = star_vector(sigma)
    hits = preimage_orbit_closure(f2, f1, sigma)
    preimage = tuple(c.rays for c in hits)
    ok = preimage == ((v,),)
    return PreimageReport(star_ray=v, preimage=preimage, ok=ok)
