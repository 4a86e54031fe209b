import pytest
from sklearn.exceptions import NotFittedError

from divgraph import (
    KappaTooSmall,
    NotInHull,
    ParameterOutOfRange,
    RDivisor,
    SignedDivisor,
    TConvexHull,
    TropicalProjection,
    TSegment,
    ZeroDegreeInput,
    canonical_project,
    contraction_sample,
    retraction_sample,
    rho,
    same_divisor,
)
from helpers import at, random_divisor, random_graph


def test_project_examples(G_PATH):
    seg = TSegment(G_PATH, at(G_PATH, "v0"), at(G_PATH, "e:0.4"))
    inside = at(G_PATH, "e:0.1")
    assert same_divisor(G_PATH, canonical_project(G_PATH, seg, inside), inside)
    projected = canonical_project(G_PATH, seg, at(G_PATH, "v1", 2.0))
    assert same_divisor(G_PATH, projected, at(G_PATH, "e:0.4"))
    hull = TConvexHull.from_segment(seg)
    assert same_divisor(G_PATH, canonical_project(G_PATH, hull, at(G_PATH, "v1", 0.5)), at(G_PATH, "e:0.4"))


def test_project_rejects_zero_degree(G_PATH):
    seg = TSegment(G_PATH, at(G_PATH, "v0"), at(G_PATH, "v1"))
    with pytest.raises(ZeroDegreeInput):
        canonical_project(G_PATH, seg, SignedDivisor(G_PATH, []))
    zero = SignedDivisor(G_PATH, [(G_PATH.vertex("v0"), 1.0), (G_PATH.vertex("v1"), -1.0)])
    with pytest.raises(ZeroDegreeInput):
        canonical_project(G_PATH, seg, zero)


def test_retraction_examples(G_PATH):
    target = TConvexHull(G_PATH, [at(G_PATH, "e:0.4")])
    d = at(G_PATH, "v1")
    assert same_divisor(G_PATH, retraction_sample(G_PATH, target, d, 0.0, 0.6), d)
    assert same_divisor(G_PATH, retraction_sample(G_PATH, target, d, 1.0, 0.6), at(G_PATH, "e:0.4"))
    half = retraction_sample(G_PATH, target, d, 0.5, 0.6)
    assert same_divisor(G_PATH, half, at(G_PATH, "e:0.7"))
    inside = at(G_PATH, "e:0.4")
    for t in (0.0, 0.3, 1.0):
        assert same_divisor(G_PATH, retraction_sample(G_PATH, target, inside, t, 0.6), inside)


def test_retraction_errors(G_PATH):
    target = TConvexHull(G_PATH, [at(G_PATH, "e:0.4")])
    with pytest.raises(KappaTooSmall):
        retraction_sample(G_PATH, target, at(G_PATH, "v1"), 0.5, 0.5)
    with pytest.raises(ParameterOutOfRange):
        retraction_sample(G_PATH, target, at(G_PATH, "v1"), 1.2, 0.6)


def test_contraction_examples(G_PATH):
    hull = TConvexHull(G_PATH, [at(G_PATH, "v0"), at(G_PATH, "v1")])
    base, d = at(G_PATH, "v0"), at(G_PATH, "v1")
    assert contraction_sample(G_PATH, hull, base, d, 0.0, 1.0) is d
    assert same_divisor(G_PATH, contraction_sample(G_PATH, hull, base, d, 1.0, 1.0), base)
    quarter = contraction_sample(G_PATH, hull, base, d, 0.25, 1.0)
    assert same_divisor(G_PATH, quarter, at(G_PATH, "e:0.75"))


def test_contraction_errors(G_CIRCLE):
    hull = TConvexHull(G_CIRCLE, [at(G_CIRCLE, "v0"), at(G_CIRCLE, "v1")])
    with pytest.raises(NotInHull):
        contraction_sample(G_CIRCLE, hull, at(G_CIRCLE, "v0"), at(G_CIRCLE, "e0:0.25"), 0.5, 1.0)
    with pytest.raises(KappaTooSmall):
        contraction_sample(G_CIRCLE, hull, at(G_CIRCLE, "v0"), at(G_CIRCLE, "v1"), 0.5, 0.1)


def test_projection_is_idempotent_and_nonexpanding(rng):
    for _ in range(4):
        g = random_graph(rng)
        seg = TSegment(g, random_divisor(rng, g, 1.0), random_divisor(rng, g, 1.0))
        e1, e2 = random_divisor(rng, g, 1.0), random_divisor(rng, g, 1.0)
        p1, p2 = canonical_project(g, seg, e1), canonical_project(g, seg, e2)
        assert rho(g, canonical_project(g, seg, p1), p1) <= 1e-8
        assert rho(g, p1, p2) <= rho(g, e1, e2) + 1e-8


def test_estimator_api(G_PATH):
    est = TropicalProjection(segment_method="exact")
    assert est.get_params() == {"graph": None, "segment_method": "exact", "strict": False}
    with pytest.raises(NotFittedError):
        est.transform([at(G_PATH, "v1")])
    est.fit([at(G_PATH, "v0"), at(G_PATH, "e:0.4")])
    assert est.n_generators_ == 2 and est.degree_ == pytest.approx(1.0)
    out = est.transform([at(G_PATH, "v1", 2.0), at(G_PATH, "e:0.2")])
    assert same_divisor(G_PATH, out[0], at(G_PATH, "e:0.4"))
    assert same_divisor(G_PATH, out[1], at(G_PATH, "e:0.2"))
    assert est.distance([at(G_PATH, "v1")]) == [pytest.approx(0.6)]
    assert est.contains([at(G_PATH, "e:0.2"), at(G_PATH, "v1")]) == [True, False]
    fitted = TropicalProjection().fit_transform([at(G_PATH, "v0"), at(G_PATH, "e:0.4")])
    assert len(fitted) == 2


def test_estimator_validation(G_PATH, G_CIRCLE):
    with pytest.raises(ValueError):
        TropicalProjection(segment_method="bogus").fit([at(G_PATH, "v0")])
    with pytest.raises(ValueError):
        TropicalProjection().fit([])
    with pytest.raises(Exception):
        TropicalProjection(graph=G_PATH).fit([at(G_CIRCLE, "v0")])
    est = TropicalProjection().fit([at(G_PATH, "v0"), at(G_PATH, "v1"), at(G_PATH, "e:0.5")])
    assert isinstance(est.transform([RDivisor(G_PATH, [(G_PATH.vertex("v1"), 3.0)])])[0], RDivisor)
