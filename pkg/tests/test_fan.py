import random
from itertools import combinations

import pytest

from toricstacks.fan import (
    Cone,
    Fan,
    GeometryError,
    classify,
    faces,
    facets,
    intersect_cones,
    is_refinement,
    make_cone,
    minimal_containing_cone,
    orbit_relation_data,
    preimage_orbit_closure,
    primitive_collections,
    star_quotient_fan,
    star_subdivision,
    star_vector,
    validate_fan,
)

SQUARE_RAYS = [(1, 0, 1), (0, -1, 1), (-1, 0, 1), (0, 1, 1)]


def square_fan():
    return Fan.from_data(3, SQUARE_RAYS, [[0, 1, 2, 3]])


def quadrant_fan():
    return Fan.from_data(2, [[1, 0], [0, 1]], [[0, 1]])


def p2_fan():
    return Fan.from_data(2, [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [0, 2]])


def oracle_primitive_collections(f):
    # Independent brute force: a collection is a ray set contained in no
    # cone all of whose proper subsets are contained in some cone.
    n = len(f.rays)
    contained = {s: any(set(s) <= m for m in f.maximal_cones)
                 for size in range(n + 1)
                 for s in combinations(range(n), size)}
    out = []
    for s, inside in contained.items():
        if inside or not s:
            continue
        if all(contained[t] for r in s
               for t in [tuple(x for x in s if x != r)]):
            out.append(frozenset(s))
    return sorted(out, key=sorted)


def test_make_cone_normalizes():
    c = make_cone(2, [(2, 0), (3, 3), (0, 5), (1, 1)])
    # (3,3) primitivizes to the duplicate (1,1), which is not extreme
    assert c.rays == ((1, 0), (0, 1))


def test_make_cone_errors():
    with pytest.raises(GeometryError):
        make_cone(2, [(0, 0), (1, 0)])
    with pytest.raises(GeometryError):
        make_cone(2, [(1, 0), (-1, 0)])
    with pytest.raises(GeometryError):
        make_cone(2, [(1, 0), (-1, 1), (0, -1)])
    with pytest.raises(GeometryError):
        make_cone(3, [(1, 0)])


def test_square_cone_frozen():
    c = make_cone(3, SQUARE_RAYS)
    assert c.rays == tuple(SQUARE_RAYS)
    assert c.dim == 3
    assert classify(c) == "general"
    assert c.facet_sets == (frozenset({0, 1}), frozenset({0, 3}),
                            frozenset({1, 2}), frozenset({2, 3}))
    assert c.facet_normals == ((-1, 1, 1), (-1, -1, 1), (1, 1, 1), (1, -1, 1))
    assert star_vector(c) == (0, 0, 1)
    assert [sorted(s) for s in c.face_ray_sets()] == [
        [], [0], [1], [2], [3], [0, 1], [0, 3], [1, 2], [2, 3], [0, 1, 2, 3]]


def test_faces_and_facets_small():
    quad = make_cone(2, [(1, 0), (0, 1)])
    assert sorted(len(f.rays) for f in faces(quad)) == [0, 1, 1, 2]
    assert [f.rays for f in facets(quad)] == [((1, 0),), ((0, 1),)]
    ray = make_cone(3, [(2, 4, 6)])
    assert ray.rays == ((1, 2, 3),)
    assert [f.rays for f in facets(ray)] == [()]
    zero = make_cone(3, [])
    assert facets(zero) == []
    assert faces(zero) == [zero]


def test_classify():
    assert classify(make_cone(2, [(1, 0), (0, 1)])) == "smooth"
    assert classify(make_cone(2, [(1, 0), (1, 2)])) == "simplicial"
    assert classify(make_cone(3, SQUARE_RAYS)) == "general"
    assert classify(make_cone(3, [(1, 0, 0), (0, 1, 0)])) == "smooth"
    # (1,0,2),(0,1,2) extends to a basis by (0,0,1), so it is still smooth
    assert classify(make_cone(3, [(1, 0, 2), (0, 1, 2)])) == "smooth"
    # rays of a flat cone generating an index-2 sublattice of its span
    assert classify(make_cone(3, [(1, 0, 1), (1, 0, -1)])) == "simplicial"
    assert classify(make_cone(3, [])) == "smooth"
    assert classify(make_cone(4, [(0, 3, 1, 2)])) == "smooth"


def test_containment_random():
    rng = random.Random(7)
    tried = 0
    while tried < 60:
        n = rng.randint(2, 4)
        gens = [tuple(rng.randint(-3, 3) for _ in range(n))
                for _ in range(rng.randint(1, n + 1))]
        try:
            c = make_cone(n, gens)
        except GeometryError:
            continue
        tried += 1
        coeffs = [rng.randint(0, 4) for _ in c.rays]
        pt = tuple(sum(a * r[i] for a, r in zip(coeffs, c.rays))
                   for i in range(n))
        assert c.contains(pt)
        interior = tuple(sum(r[i] for r in c.rays) for i in range(n))
        assert c.relint_contains(interior)
        # strong convexity: the negated interior point never lies in c
        assert not c.contains(tuple(-x for x in interior))
        if c.dim >= 2:
            assert not c.relint_contains(c.rays[0])


def test_intersect_cones_frozen():
    a = make_cone(2, [(1, 0), (0, 1)])
    b = make_cone(2, [(1, 1), (1, -1)])
    assert frozenset(intersect_cones(a, b).rays) == frozenset({(1, 0), (1, 1)})
    c = make_cone(2, [(0, 1), (-1, 0)])
    assert intersect_cones(a, c).rays == ((0, 1),)
    assert intersect_cones(b, c).is_zero


def test_fan_from_data_rejects_bad_input():
    with pytest.raises(GeometryError):
        Fan.from_data(2, [[2, 0], [0, 1]], [[0, 1]])
    with pytest.raises(GeometryError):
        Fan.from_data(2, [[0, 0], [0, 1]], [[0, 1]])
    with pytest.raises(GeometryError):
        Fan.from_data(2, [[1, 0], [1, 0]], [[0, 1]])
    with pytest.raises(GeometryError):
        Fan.from_data(2, [[1, 0], [0, 1]], [[0, 2]])
    with pytest.raises(GeometryError):
        # middle ray is not extreme in its cone
        Fan.from_data(2, [[1, 0], [1, 1], [0, 1]], [[0, 1, 2]])
    with pytest.raises(GeometryError):
        Fan.from_data(2, [[1, 0], [0, 1]], [[0]])


def test_validate_fan():
    assert validate_fan(square_fan()).ok
    assert validate_fan(quadrant_fan()).ok
    assert validate_fan(p2_fan()).ok
    assert validate_fan(Fan.from_data(2, [], [[]])).ok
    bad = Fan.from_data(2, [[1, 0], [0, 1], [1, 1], [1, -1]], [[0, 1], [2, 3]])
    rep = validate_fan(bad)
    assert not rep.ok
    assert rep.violations[0].first == (0, 1)
    assert rep.violations[0].second == (2, 3)


def test_star_subdivision_square():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    assert f2.rays == tuple(SQUARE_RAYS) + ((0, 0, 1),)
    assert sorted(sorted(s) for s in f2.maximal_cones) == [
        [0, 1, 4], [0, 3, 4], [1, 2, 4], [2, 3, 4]]
    assert validate_fan(f2).ok
    assert is_refinement(f2, f)
    assert not is_refinement(f, f2)
    assert all(classify(f2.cone(s)) == "smooth" for s in f2.maximal_cones)


def test_star_subdivision_at_ray_is_identity_on_smooth_fans():
    for f in (quadrant_fan(), p2_fan()):
        for i in range(len(f.rays)):
            g = star_subdivision(f, f.cone({i}))
            assert g.to_data() == f.to_data()


def test_star_subdivision_at_edge():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    g = star_subdivision(f2, f2.cone({0, 4}))
    assert len(g.rays) == 6
    assert g.rays[5] == (1, 0, 2)
    assert validate_fan(g).ok
    assert is_refinement(g, f2) and is_refinement(g, f)


def test_star_subdivision_requires_fan_cone():
    f = quadrant_fan()
    with pytest.raises(GeometryError):
        star_subdivision(f, make_cone(2, [(1, 1)]))
    with pytest.raises(GeometryError):
        star_subdivision(f, make_cone(2, []))


def test_primitive_collections():
    f = square_fan()
    assert primitive_collections(f) == []
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    assert primitive_collections(f2) == [frozenset({0, 2}), frozenset({1, 3})]
    assert primitive_collections(p2_fan()) == [frozenset({0, 1, 2})]
    for fan in (f, f2, p2_fan(), quadrant_fan()):
        assert primitive_collections(fan) == oracle_primitive_collections(fan)


def test_is_refinement_negative():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    assert is_refinement(f, f)
    assert is_refinement(f2, f2)
    # half of the subdivision does not cover the support
    half = Fan(3, [f2.cone({0, 1, 4}), f2.cone({1, 2, 4})], ray_hint=f2.rays)
    assert not is_refinement(half, f)
    # same rank, unrelated support
    assert not is_refinement(quadrant_fan(), p2_fan())


def test_preimage_orbit_closure():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    big = f.cone({0, 1, 2, 3})
    assert [t.rays for t in preimage_orbit_closure(f2, f, big)] == [((0, 0, 1),)]
    edge = f.cone({0, 1})
    assert [t.rays for t in preimage_orbit_closure(f2, f, edge)] == [
        ((1, 0, 1), (0, -1, 1))]
    zero = make_cone(3, [])
    assert [t.rays for t in preimage_orbit_closure(f2, f, zero)] == [()]
    with pytest.raises(GeometryError):
        preimage_orbit_closure(f, f2, zero)


def test_minimal_containing_cone():
    f = square_fan()
    v = make_cone(3, [(0, 0, 1)])
    assert minimal_containing_cone(f, v) == frozenset({0, 1, 2, 3})
    assert minimal_containing_cone(f, f.cone({0, 1})) == frozenset({0, 1})
    assert minimal_containing_cone(f, make_cone(3, [(1, 0, 0)])) is None


def test_star_quotient_square():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    sq = star_quotient_fan(f2, (0, 0, 1))
    assert sq.projection == ((1, 0, 0), (0, 1, 0))
    assert sq.fan.rays == ((1, 0), (0, -1), (0, 1), (-1, 0))
    assert sorted(sorted(s) for s in sq.fan.maximal_cones) == [
        [0, 1], [0, 2], [1, 3], [2, 3]]
    assert sq.pairs == ((0, 0, 1), (1, 1, 1), (2, 3, 1), (3, 2, 1))
    assert sq.dropped == ()
    assert validate_fan(sq.fan).ok


def test_star_quotient_multiplicities():
    # the projected generators need not stay primitive
    f = Fan.from_data(2, [[1, 0], [1, 4]], [[0, 1]])
    f2 = star_subdivision(f, f.cone({0, 1}))
    assert f2.rays == ((1, 0), (1, 4), (1, 2))
    sq = star_quotient_fan(f2, (1, 2))
    assert sq.fan.rays == ((1,), (-1,))
    assert sq.pairs == ((0, 0, 2), (1, 1, 2))
    with pytest.raises(GeometryError):
        star_quotient_fan(f2, (5, 5))


def test_star_quotient_isolated_ray():
    f = Fan.from_data(2, [[1, 0]], [[0]])
    sq = star_quotient_fan(f, (1, 0))
    assert sq.fan.rays == ()
    assert sq.fan.maximal_cones == (frozenset(),)
    assert sq.pairs == () and sq.dropped == ()


def test_orbit_relation_data_zero_cone():
    data = orbit_relation_data(quadrant_fan(), make_cone(2, []))
    assert [(d.sigma_rays, d.n_gen) for d in data] == [
        (((1, 0),), (1, 0)), (((0, 1),), (0, 1))]
    assert all(d.m_tau_basis == ((1, 0), (0, 1)) for d in data)


def test_orbit_relation_data_ray():
    f = square_fan()
    data = orbit_relation_data(f, f.cone({0}))
    assert [(d.sigma_rays, d.n_gen) for d in data] == [
        (((1, 0, 1), (0, -1, 1)), (0, -1, 1)),
        (((1, 0, 1), (0, 1, 1)), (0, 1, 1))]
    assert all(d.m_tau_basis == ((1, 0, -1), (0, 1, 0)) for d in data)
    with pytest.raises(GeometryError):
        orbit_relation_data(f, make_cone(3, [(1, 1, 1)]))


def test_orbit_relation_orientation_random():
    # the transverse generator always pairs positively with the facet normal
    # and is primitive modulo the span of tau
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    for fan in (f, f2, p2_fan(), quadrant_fan()):
        for s in fan.cones:
            tau = fan.cone(s)
            for d in orbit_relation_data(fan, tau):
                sigma = make_cone(fan.ambient_rank, d.sigma_rays)
                assert not tau.contains(d.n_gen)
                # n_gen plus a deep interior point of tau lands in sigma
                if tau.rays:
                    depth = tuple(1000 * sum(r[i] for r in tau.rays)
                                  for i in range(fan.ambient_rank))
                    shifted = tuple(a + b for a, b in zip(d.n_gen, depth))
                    assert sigma.contains(shifted)
                else:
                    assert sigma.contains(d.n_gen)


def test_fan_data_roundtrip():
    for f in (square_fan(), quadrant_fan(), p2_fan()):
        d = f.to_data()
        g = Fan.from_data(d["rank"], d["rays"], d["max_cones"])
        assert g.to_data() == d


def test_cone_counts_of_subdivided_square():
    f = square_fan()
    f2 = star_subdivision(f, f.cone({0, 1, 2, 3}))
    assert [len(f2.cones_of_dim(d)) for d in range(4)] == [1, 5, 8, 4]
