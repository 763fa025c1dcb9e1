"""Degreewise evaluation of graded quotients Z[t_1..t_n]/(linear forms +
homogeneous generators) as exact abelian groups.

No Groebner machinery: the degree-k component is the cokernel of an explicit
integer matrix (generator multiples expanded over the degree-k monomial
basis), so ranks, torsion, and induced maps are all Smith-normal-form facts.
Monomials of a fixed degree are ordered descending-lex in the variable
order, which makes every normal form reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .intlinalg import AbelianGroup, Matrix, Vector, cokernel, freeze, matvec

Poly = dict  # exponent tuple -> nonzero integer coefficient


@dataclass(frozen=True)
class GradedPresentation:
    """Generators of a graded ideal in Z[t_1..t_n].

    linear_gens rows are degree-1 forms; homogeneous_gens are (degree,
    poly) pairs with poly stored as a sorted tuple of (exponent, coeff).
    Built via make_presentation, which validates homogeneity.
    """

    n_vars: int
    linear_gens: Matrix
    homogeneous_gens: tuple


def _normalize_poly(element, n_vars: int) -> Poly:
    items = element.items() if isinstance(element, dict) else element
    out: Poly = {}
    for expt, coeff in items:
        expt = tuple(int(x) for x in expt)
        if len(expt) != n_vars:
            raise ValueError("exponent %r has length %d, expected %d"
                             % (expt, len(expt), n_vars))
        if any(x < 0 for x in expt):
            raise ValueError("negative exponent in %r" % (expt,))
        coeff = int(coeff)
        if coeff:
            out[expt] = out.get(expt, 0) + coeff
            if not out[expt]:
                del out[expt]
    return out


def _poly_degree(poly: Poly) -> int | None:
    """Degree of a homogeneous poly, None for the zero poly."""
    degrees = {sum(e) for e in poly}
    if not degrees:
        return None
    if len(degrees) > 1:
        raise ValueError("element is not homogeneous: degrees %s"
                         % sorted(degrees))
    return degrees.pop()


def make_presentation(n_vars: int, linear_gens=(),
                      homogeneous_gens=()) -> GradedPresentation:
    n_vars = int(n_vars)
    lin = freeze(linear_gens)
    for row in lin:
        if len(row) != n_vars:
            raise ValueError("linear generator %r has length %d, expected %d"
                             % (list(row), len(row), n_vars))
    homs = []
    for degree, element in homogeneous_gens:
        poly = _normalize_poly(element, n_vars)
        actual = _poly_degree(poly)
        if actual is not None and actual != degree:
            raise ValueError("generator labeled degree %d has degree %d"
                             % (degree, actual))
        if degree < 1:
            raise ValueError("homogeneous generators must have degree >= 1")
        homs.append((int(degree), tuple(sorted(poly.items(), reverse=True))))
    return GradedPresentation(n_vars=n_vars, linear_gens=lin,
                              homogeneous_gens=tuple(homs))


@lru_cache(maxsize=None)
def monomials(n_vars: int, degree: int) -> tuple:
    """All degree-k exponent tuples in n variables, descending lex."""
    if degree < 0:
        return ()
    if n_vars == 0:
        return ((),) if degree == 0 else ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, n_vars)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(n_vars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(monomials(n_vars, degree))}


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
            if not out[e]:
                del out[e]
    return out


def _shifted_column(poly: Poly, shift, n_vars: int, degree: int) -> Vector:
    index = _monomial_index(n_vars, degree)
    col = [0] * len(index)
    for expt, coeff in poly.items():
        e = tuple(x + y for x, y in zip(expt, shift))
        col[index[e]] += coeff
    return tuple(col)


@dataclass(frozen=True)
class GradedPiece:
    degree: int
    n_vars: int
    monomial_basis: tuple
    group: AbelianGroup

    def coords(self, element) -> Vector:
        """Normal-form coordinates of a homogeneous element of this degree."""
        poly = _normalize_poly(element, self.n_vars)
        vec = [0] * len(self.monomial_basis)
        index = {m: i for i, m in enumerate(self.monomial_basis)}
        for expt, coeff in poly.items():
            if expt not in index:
                raise ValueError("element has degree-%s term %r, piece has "
                                 "degree %d" % (sum(expt), expt, self.degree))
            vec[index[expt]] = coeff
        return self.group.project(tuple(vec))


@lru_cache(maxsize=None)
def graded_piece(p: GradedPresentation, k: int) -> GradedPiece:
    """The degree-k component of the quotient, as an exact abelian group.

    The relation lattice is spanned by g*m over generators g of degree d
    and monomials m of degree k-d; the group is its cokernel over the
    degree-k monomial basis.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    basis = monomials(p.n_vars, k)
    columns = []
    for row in p.linear_gens:
        gen = {tuple(1 if j == i else 0 for j in range(p.n_vars)): c
               for i, c in enumerate(row) if c}
        for m in monomials(p.n_vars, k - 1):
            columns.append(_shifted_column(gen, m, p.n_vars, k))
    for degree, items in p.homogeneous_gens:
        gen = dict(items)
        for m in monomials(p.n_vars, k - degree):
            columns.append(_shifted_column(gen, m, p.n_vars, k))
    if columns:
        matrix = tuple(zip(*columns))
    else:
        matrix = tuple(() for _ in basis)
    group = cokernel(matrix)
    return GradedPiece(degree=k, n_vars=p.n_vars, monomial_basis=basis,
                       group=group)


def normal_form(p: GradedPresentation, k: int, element) -> Vector:
    """Quotient coordinates of a homogeneous degree-k element; all zero iff
    the element lies in the relation lattice."""
    poly = _normalize_poly(element, p.n_vars)
    actual = _poly_degree(poly)
    if actual is not None and actual != k:
        raise ValueError("element has degree %d, expected %d" % (actual, k))
    return graded_piece(p, k).coords(poly)


def _canonical_rep(p: GradedPresentation, k: int, coords) -> Poly:
    piece = graded_piece(p, k)
    amb = piece.group.lift_coords(coords)
    return {m: c for m, c in zip(piece.monomial_basis, amb) if c}


def multiply(p: GradedPresentation, a, b) -> Poly:
    """Product of two homogeneous elements, reduced to the canonical
    representative of its class (lift of the normal form)."""
    pa = _normalize_poly(a, p.n_vars)
    pb = _normalize_poly(b, p.n_vars)
    da, db = _poly_degree(pa), _poly_degree(pb)
    if da is None or db is None:
        return {}
    prod = _poly_mul(pa, pb)
    coords = normal_form(p, da + db, prod)
    return _canonical_rep(p, da + db, coords)


@dataclass(frozen=True)
class RingMap:
    """A substitution t_i -> linear form between two presentations."""

    source: GradedPresentation
    target: GradedPresentation
    substitution: Matrix  # one row per source variable, over target variables


def ring_map(source: GradedPresentation, target: GradedPresentation,
             substitution) -> RingMap:
    sub = freeze(substitution)
    if len(sub) != source.n_vars:
        raise ValueError("substitution has %d rows, source has %d variables"
                         % (len(sub), source.n_vars))
    for row in sub:
        if len(row) != target.n_vars:
            raise ValueError("substitution row %r has length %d, target has "
                             "%d variables"
                             % (list(row), len(row), target.n_vars))
    return RingMap(source=source, target=target, substitution=sub)


def _substitute(rm: RingMap, poly: Poly) -> Poly:
    forms = [{tuple(1 if j == i else 0 for j in range(rm.target.n_vars)): c
              for i, c in enumerate(row) if c}
             for row in rm.substitution]
    out: Poly = {}
    for expt, coeff in poly.items():
        term = {tuple([0] * rm.target.n_vars): coeff}
        for i, e in enumerate(expt):
            for _ in range(e):
                term = _poly_mul(term, forms[i])
        for m, c in term.items():
            out[m] = out.get(m, 0) + c
            if not out[m]:
                del out[m]
    return out


@dataclass(frozen=True)
class Certification:
    ok: bool
    witness: tuple | None  # (degree, source generator as sorted item tuple)


def certify_well_defined(rm: RingMap, max_deg: int = 6) -> Certification:
    """Check that the substitution maps every source generator into the
    target's relation lattice.

    Generator images pin down the whole map (relation lattices are spanned
    by generator multiples and substitution is a ring map), so every
    generator is checked outright; max_deg only records the working bound
    callers report against.
    """
    del max_deg
    n = rm.source.n_vars
    gens = [(1, {tuple(1 if j == i else 0 for j in range(n)): c
                 for i, c in enumerate(row) if c})
            for row in rm.source.linear_gens]
    gens += [(d, dict(items)) for d, items in rm.source.homogeneous_gens]
    for degree, gen in gens:
        image = _substitute(rm, gen)
        if any(normal_form(rm.target, degree, image)):
            witness = (degree, tuple(sorted(gen.items(), reverse=True)))
            return Certification(ok=False, witness=witness)
    return Certification(ok=True, witness=None)


def induced_map(rm: RingMap, k: int) -> Matrix:
    """Matrix of the degree-k induced map on normal-form coordinates
    (target coordinates by source coordinates)."""
    src = graded_piece(rm.source, k)
    tgt = graded_piece(rm.target, k)
    cols = []
    for i in range(src.group.coord_rank):
        unit = tuple(1 if j == i else 0 for j in range(src.group.coord_rank))
        rep = _canonical_rep(rm.source, k, unit)
        image = _substitute(rm, rep)
        cols.append(tgt.coords(image))
    if not cols:
        return tuple(() for _ in range(tgt.group.coord_rank))
    return tuple(zip(*cols))


def _surjective_onto(group: AbelianGroup, matrix: Matrix) -> bool:
    """Do the columns of a coordinate matrix generate the whole group?"""
    torsion_cols = []
    for i, d in enumerate(group.torsion):
        torsion_cols.append(tuple(d if j == i else 0
                                  for j in range(group.coord_rank)))
    cols = [tuple(col) for col in zip(*matrix)] if matrix and matrix[0] \
        else []
    stacked = cols + torsion_cols
    if not stacked:
        return group.is_trivial
    matrix = tuple(zip(*stacked))
    return cokernel(matrix).is_trivial


def is_iso_up_to(rm: RingMap, max_deg: int) -> dict:
    """Per-degree verdicts (degree -> bool) for 0..max_deg: the induced map
    is an isomorphism of abelian groups.

    A surjective map between groups of identical normal form is injective
    too (finitely generated groups are Hopfian), so the verdict is: equal
    structures and the image columns generate the target.
    """
    verdicts = {}
    for k in range(max_deg + 1):
        src = graded_piece(rm.source, k).group
        tgt = graded_piece(rm.target, k).group
        if src.structure() != tgt.structure():
            verdicts[k] = False
            continue
        matrix = induced_map(rm, k)
        verdicts[k] = _surjective_onto(tgt, matrix)
    return verdicts
