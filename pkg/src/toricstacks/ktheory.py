"""Multiplicative (group-algebra) analogue of the verification pipeline.

The ring attached to a fan is the group algebra of the character group
X(G), cut by one relation per primitive collection; the infinitely many
exponent-lattice relations are eliminated exactly by working in X(G)
coordinates from the start.  Laurent quotients are evaluated on finite
exponent boxes: free coordinates range over [-B, B], torsion coordinates
are enumerated completely, and every report is window-level only - an
inner-window structure is labeled stabilized when it agrees with the next
radius, and anything non-stabilized is inconclusive, never asserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cox import cox, k_ideals
from .fan import Cone, Fan, star_quotient_fan, star_subdivision, star_vector
from .intlinalg import (
    AbelianGroup,
    Vector,
    cokernel,
    hnf,
    identity,
    kernel_basis,
    matmul,
    solve_in_span,
    transpose,
)


@dataclass(frozen=True)
class GroupAlgebraPresentation:
    """Group algebra of X(G) with one relation per primitive collection.

    generator_images[i] is the class of the i-th ray's character in X(G)
    normal-form coordinates.  Each ideal generator is a formal integer
    combination of group elements, stored as sorted (coords, coeff) pairs;
    the collection {i_1..i_k} contributes 1 - e^{-(w_{i_1}+...+w_{i_k})}.
    """

    group: AbelianGroup
    generator_images: tuple[Vector, ...]
    ideal_gens: tuple


def _group_add(group: AbelianGroup, a: Vector, b: Vector) -> Vector:
    return group.reduce(tuple(x + y for x, y in zip(a, b)))


def k_ring_stack(f: Fan) -> GroupAlgebraPresentation:
    """Group-algebra presentation of a fan's multiplicative invariant ring."""
    cd = cox(f)
    group = cd.char_group
    zero = group.reduce((0,) * group.coord_rank)
    for row in cd.kernel:
        assert not any(group.project(row)), \
            "exponent-lattice relation does not vanish in X(G)"
    gens = []
    for coll in k_ideals(cd).monomial_gens:
        total = zero
        for i in sorted(coll):
            total = _group_add(group, total, cd.weights[i])
        neg = group.reduce(tuple(-x for x in total))
        term = {zero: 1}
        term[neg] = term.get(neg, 0) - 1
        gens.append(tuple(sorted((c, v) for c, v in term.items() if v)))
    return GroupAlgebraPresentation(group=group,
                                    generator_images=cd.weights,
                                    ideal_gens=tuple(gens))


def _box_monomials(group: AbelianGroup, radius: int) -> tuple:
    ranges = [range(d) for d in group.torsion] \
        + [range(-radius, radius + 1) for _ in range(group.free_rank)]
    return tuple(itertools.product(*ranges))


def _in_box(group: AbelianGroup, coords: Vector, radius: int) -> bool:
    free = coords[len(group.torsion):]
    return all(-radius <= x <= radius for x in free)


def _relation_columns(p: GroupAlgebraPresentation, radius: int,
                      monomials: tuple) -> tuple:
    group = p.group
    index = {m: i for i, m in enumerate(monomials)}
    for gen in p.ideal_gens:
        for coords, _coeff in gen:
            if not _in_box(group, coords, radius):
                raise ValueError(
                    "box radius %d is smaller than a generator exponent %s"
                    % (radius, list(coords)))
    columns = []
    for gen in p.ideal_gens:
        if not gen:
            continue
        for m in monomials:
            shifted = [(_group_add(group, coords, m), coeff)
                       for coords, coeff in gen]
            if all(_in_box(group, c, radius) for c, _ in shifted):
                col = [0] * len(monomials)
                for c, coeff in shifted:
                    col[index[c]] += coeff
                columns.append(tuple(col))
    return tuple(columns)


def window_lattice(p: GroupAlgebraPresentation, box_radius: int,
                   window_radius: int):
    """Window monomials plus the canonical (HNF-row) basis of the boxed
    relation lattice intersected with the window coordinate subspace.

    The box at radius B only certifies relations some distance from the
    boundary, so the window must be strictly inside; radius B pairs with
    window B-1 everywhere in this module."""
    group = p.group
    box = _box_monomials(group, box_radius)
    columns = _relation_columns(p, box_radius, box)
    window = tuple(m for m in box if _in_box(group, m, window_radius))
    if not columns:
        return window, ()
    window_pos = [i for i, m in enumerate(box)
                  if _in_box(group, m, window_radius)]
    outside_pos = [i for i, m in enumerate(box)
                   if not _in_box(group, m, window_radius)]
    matrix_rows = tuple(zip(*columns))  # len(box) rows
    if outside_pos:
        outside = tuple(matrix_rows[i] for i in outside_pos)
        combos = kernel_basis(outside)  # columns
    else:
        combos = identity(len(columns))
    inside = tuple(matrix_rows[i] for i in window_pos)
    lattice_cols = matmul(inside, combos) if combos and combos[0] else \
        tuple(() for _ in window_pos)
    rows = [r for r in hnf(transpose(lattice_cols))[0] if any(r)] \
        if lattice_cols and len(lattice_cols[0]) else []
    return window, tuple(rows)


def _window_structure(p: GroupAlgebraPresentation, box_radius: int,
                      window_radius: int):
    window, lattice_rows = window_lattice(p, box_radius, window_radius)
    matrix = transpose(lattice_rows) if lattice_rows else \
        tuple(() for _ in window)
    return cokernel(matrix).structure()


@dataclass(frozen=True)
class BoxedQuotient:
    """Finite truncation of a group-algebra quotient.

    group is the quotient of the full box; window_group the quotient of
    the inner window [-B+1, B-1] by the lattice the box certifies there.
    stabilized means the inner-window structure agrees with the one the
    next radius certifies (window scales with the box: radius B certifies
    window B-1).  The window lattice rows are canonical (HNF), so equal
    windows compare equal.
    """

    box_radius: int
    monomials: tuple
    relation_columns: tuple
    group: AbelianGroup
    window_radius: int
    window_monomials: tuple
    window_lattice: tuple
    window_group: AbelianGroup
    stabilized: bool

    def contains(self, element: dict) -> bool:
        """Is a formal combination (coords -> coeff) in the boxed relation
        lattice?  Raises if a term falls outside the box."""
        index = {m: i for i, m in enumerate(self.monomials)}
        vec = [0] * len(self.monomials)
        for coords, coeff in element.items():
            coords = tuple(coords)
            if coords not in index:
                raise ValueError("term %s falls outside the box"
                                 % (list(coords),))
            vec[index[coords]] += coeff
        if not self.relation_columns:
            return not any(vec)
        matrix = tuple(zip(*self.relation_columns))
        return solve_in_span(matrix, tuple(vec)) is not None


def boxed_quotient(p: GroupAlgebraPresentation, box_radius: int) \
        -> BoxedQuotient:
    """Quotient of the exponent box [-B, B]^free x (all torsion) by every
    generator shift staying inside the box."""
    if box_radius < 1:
        raise ValueError("box radius must be at least 1")
    group = p.group
    box = _box_monomials(group, box_radius)
    columns = _relation_columns(p, box_radius, box)
    matrix = tuple(zip(*columns)) if columns else tuple(() for _ in box)
    full = cokernel(matrix)
    window_radius = box_radius - 1
    window, lattice_rows = window_lattice(p, box_radius, window_radius)
    wmatrix = transpose(lattice_rows) if lattice_rows else \
        tuple(() for _ in window)
    wgroup = cokernel(wmatrix)
    stabilized = wgroup.structure() == _window_structure(
        p, box_radius + 1, window_radius + 1)
    return BoxedQuotient(box_radius=box_radius, monomials=box,
                         relation_columns=columns, group=full,
                         window_radius=window_radius,
                         window_monomials=window,
                         window_lattice=lattice_rows,
                         window_group=wgroup, stabilized=stabilized)


class KComparisonError(ValueError):
    """The character-group identification between the subdivided fan and
    its exceptional stratum could not be built over Z.

    Raised when a projected ray is dropped or unmatched, when the
    stratum's exponent lattice survives in X(G), or when the ray classes
    fail to generate the group."""


def _transport(src_group: AbelianGroup, tgt_group: AbelianGroup,
               images: tuple, coords: Vector) -> Vector:
    """Image of a target group element under the identification that sends
    the j-th target ray class to images[j]."""
    amb = tgt_group.lift_coords(coords)
    total = src_group.reduce((0,) * src_group.coord_rank)
    for j, a in enumerate(amb):
        if a:
            scaled = tuple(a * x for x in images[j])
            total = _group_add(src_group, total, src_group.reduce(scaled))
    return total


@dataclass(frozen=True)
class KComparison:
    """Everything the boxed comparison of one cone produced."""

    cone: Cone
    star_ray: Vector
    box_radius: int
    source: GroupAlgebraPresentation
    target: GroupAlgebraPresentation
    boxed_source: BoxedQuotient
    boxed_target: BoxedQuotient
    window_rank: int
    torsion: tuple
    stabilized: bool
    matched: bool
    iso_on_window: bool


def k_exceptional_comparison(sigma: Cone, box_radius: int = 3) -> KComparison:
    """Compare the subdivided cone's boxed quotient with the exceptional
    stratum's, identified over the subdivided character group.

    The identification sends each quotient ray class to the class of its
    source ray; it must be well defined (the quotient's exponent lattice
    maps to zero) and an isomorphism before the quotients are compared.
    matched means the two certified window lattices coincide, which pins
    rank, torsion, and all generator-class images at once.  A
    non-stabilized window makes the verdict inconclusive, never a failure.
    """
    if sigma.dim != sigma.ambient_rank:
        raise ValueError("cone has dimension %d in rank %d; the comparison "
                         "needs a full-dimensional cone"
                         % (sigma.dim, sigma.ambient_rank))
    f1 = Fan(sigma.ambient_rank, [sigma])
    f2 = star_subdivision(f1, sigma)
    v = star_vector(sigma)
    v_idx = f2.rays.index(v)
    quotient = star_quotient_fan(f2, v)

    if quotient.dropped:
        raise KComparisonError("projected rays %s are not extreme in the "
                               "quotient" % (sorted(quotient.dropped),))
    dst = {src: d for src, d, _mult in quotient.pairs}
    surviving = [i for i in range(len(f2.rays)) if i != v_idx]
    missing = [i for i in surviving if i not in dst]
    if missing:
        raise KComparisonError("rays %s have no image ray in the quotient"
                               % (missing,))
    src_of = {d: s for s, d, _mult in quotient.pairs}

    p_src = k_ring_stack(f2)
    p_tgt = k_ring_stack(quotient.fan)
    src_group, tgt_group = p_src.group, p_tgt.group

    # Identification: j-th quotient ray class -> class of its source ray.
    images = tuple(p_src.generator_images[src_of[j]]
                   for j in range(len(quotient.fan.rays)))
    for row in cox(quotient.fan).kernel:
        total = src_group.reduce((0,) * src_group.coord_rank)
        for j, a in enumerate(row):
            if a:
                total = _group_add(src_group, total,
                                   src_group.reduce(tuple(a * x
                                                          for x in images[j])))
        if any(total):
            raise KComparisonError(
                "the stratum's exponent lattice does not map to zero; the "
                "character groups are not identified over Z")
    if src_group.structure() != tgt_group.structure():
        raise KComparisonError("character groups differ: %s vs %s"
                               % (src_group.describe(), tgt_group.describe()))
    cols = [tuple(w) for w in images]
    for t, d in enumerate(src_group.torsion):
        cols.append(tuple(d if j == t else 0
                          for j in range(src_group.coord_rank)))
    gen_matrix = tuple(zip(*cols)) if cols else \
        tuple(() for _ in range(src_group.coord_rank))
    if not cokernel(gen_matrix).is_trivial:
        raise KComparisonError("stratum ray classes do not generate the "
                               "character group")

    transported_gens = []
    for gen in p_tgt.ideal_gens:
        term: dict = {}
        for coords, coeff in gen:
            c = _transport(src_group, tgt_group, images, coords)
            term[c] = term.get(c, 0) + coeff
        transported_gens.append(tuple(sorted((c, vv)
                                             for c, vv in term.items() if vv)))
    p_tgt_ident = GroupAlgebraPresentation(
        group=src_group, generator_images=images,
        ideal_gens=tuple(transported_gens))

    bq_src = boxed_quotient(p_src, box_radius)
    bq_tgt = boxed_quotient(p_tgt_ident, box_radius)
    stabilized = bq_src.stabilized and bq_tgt.stabilized
    matched = bq_src.window_lattice == bq_tgt.window_lattice
    return KComparison(cone=sigma, star_ray=v, box_radius=box_radius,
                       source=p_src, target=p_tgt,
                       boxed_source=bq_src, boxed_target=bq_tgt,
                       window_rank=bq_src.window_group.free_rank,
                       torsion=bq_src.window_group.torsion,
                       stabilized=stabilized, matched=matched,
                       iso_on_window=stabilized and matched)


@dataclass(frozen=True)
class KVanishingReport:
    """Outcome of the window-level verification for one cone.

    conclusion is true only when the identification exists, both boxed
    windows are stabilized and coincide, and the certified window carries
    no torsion.  A failed identification is recorded in failure; a
    non-stabilized window leaves matched unsettled (None)."""

    cone_rays: tuple
    star_ray: Vector
    box_radius: int
    identified: bool
    failure: str | None
    window_rank: int | None
    torsion: tuple | None
    stabilized: bool
    matched: bool | None
    conclusion: bool


def verify_k_vanishing(sigma: Cone, box_radius: int = 3) -> KVanishingReport:
    """Run the boxed comparison and the torsion check for a cone."""
    if sigma.dim != sigma.ambient_rank:
        raise ValueError("cone has dimension %d in rank %d; the verification "
                         "needs a full-dimensional cone"
                         % (sigma.dim, sigma.ambient_rank))
    failure = None
    comp = None
    try:
        comp = k_exceptional_comparison(sigma, box_radius)
    except KComparisonError as exc:
        failure = str(exc)

    star_ray = star_vector(sigma)
    if comp is None:
        return KVanishingReport(cone_rays=sigma.rays, star_ray=star_ray,
                                box_radius=box_radius, identified=False,
                                failure=failure, window_rank=None,
                                torsion=None, stabilized=False, matched=None,
                                conclusion=False)
    matched = comp.matched if comp.stabilized else None
    conclusion = comp.iso_on_window and comp.torsion == ()
    return KVanishingReport(cone_rays=sigma.rays, star_ray=comp.star_ray,
                            box_radius=box_radius, identified=True,
                            failure=None, window_rank=comp.window_rank,
                            torsion=comp.torsion, stabilized=comp.stabilized,
                            matched=matched, conclusion=conclusion)
