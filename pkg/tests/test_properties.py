"""Algebraic laws under randomized inputs."""

import json
from fractions import Fraction
from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from qrob import ExtElement, build, multiply, parse_manifold, wedge


def ext_elements(max_n=5):
    @st.composite
    def build_elem(draw):
        n = draw(st.integers(min_value=2, max_value=max_n))
        degree = draw(st.integers(min_value=0, max_value=n))
        basis = list(combinations(range(1, n + 1), degree))
        count = draw(st.integers(min_value=0, max_value=min(3, len(basis))))
        terms = {}
        for _ in range(count):
            axes = draw(st.sampled_from(basis))
            coeff = draw(st.integers(min_value=-5, max_value=5))
            terms[axes] = terms.get(axes, 0) + coeff
        return ExtElement(n, {a: c for a, c in terms.items() if c})

    return build_elem()


@st.composite
def ext_pairs(draw):
    a = draw(ext_elements())
    n = a.ambient_n
    degree = draw(st.integers(min_value=0, max_value=n))
    basis = list(combinations(range(1, n + 1), degree))
    terms = {
        draw(st.sampled_from(basis)): draw(st.integers(min_value=-5, max_value=5))
        for _ in range(draw(st.integers(min_value=0, max_value=3)))
    }
    b = ExtElement(n, {k: v for k, v in terms.items() if v})
    return a, b


@settings(max_examples=150, deadline=None)
@given(ext_pairs())
def test_wedge_graded_commutativity(pair):
    a, b = pair
    if a.is_zero() or b.is_zero():
        return
    p, q = a.degree(), b.degree()
    sign = -1 if (p * q) % 2 else 1
    assert wedge(a, b) == wedge(b, a).scale(sign)


@settings(max_examples=100, deadline=None)
@given(ext_elements(), st.data())
def test_wedge_bilinear(a, data):
    n = a.ambient_n
    basis = list(combinations(range(1, n + 1), min(1, n)))
    b = ExtElement(n, {basis[0]: 2})
    c = ExtElement(n, {basis[-1]: -3})
    assert wedge(a, b + c) == wedge(a, b) + wedge(a, c)
    assert wedge(a.scale(Fraction(5, 3)), b) == wedge(a, b).scale(Fraction(5, 3))


@settings(max_examples=100, deadline=None)
@given(ext_elements(max_n=4), ext_elements(max_n=4), ext_elements(max_n=4))
def test_wedge_associative_when_compatible(a, b, c):
    n = max(a.ambient_n, b.ambient_n, c.ambient_n)
    if not (a.ambient_n == b.ambient_n == c.ambient_n == n):
        return
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@settings(max_examples=80, deadline=None)
@given(ext_elements())
def test_ext_serialization_round_trip(a):
    blob = json.dumps(a.to_obj(), sort_keys=True)
    assert ExtElement.from_obj(json.loads(blob)) == a


_RINGS = [
    parse_manifold("surface(2) * cp(2)"),
    parse_manifold("connsum(s2xs2,2)"),
    parse_manifold("torus(3)"),
]


@st.composite
def ring_elements(draw):
    ring = build(draw(st.sampled_from(_RINGS)))
    coords = {}
    for _ in range(draw(st.integers(min_value=0, max_value=3))):
        k = draw(st.integers(min_value=0, max_value=ring.top_degree))
        if ring.dims[k] == 0:
            continue
        vec = coords.setdefault(k, [Fraction(0)] * ring.dims[k])
        i = draw(st.integers(min_value=0, max_value=ring.dims[k] - 1))
        vec[i] += draw(st.integers(min_value=-3, max_value=3))
    from qrob.ring import RingElement

    return RingElement(ring, coords)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_ring_multiplication_laws(data):
    expr = data.draw(st.sampled_from(_RINGS))
    ring = build(expr)

    def element():
        coords = {}
        k = data.draw(st.integers(min_value=0, max_value=ring.top_degree))
        if ring.dims[k]:
            vec = [
                Fraction(data.draw(st.integers(min_value=-2, max_value=2)))
                for _ in range(ring.dims[k])
            ]
            coords[k] = vec
        from qrob.ring import RingElement

        return RingElement(ring, coords)

    x, y, z = element(), element(), element()
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
    assert multiply(x, y + z) == multiply(x, y) + multiply(x, z)
    if not x.is_zero() and not y.is_zero():
        p, q = x.degree(), y.degree()
        sign = -1 if (p * q) % 2 else 1
        assert multiply(x, y) == multiply(y, x).scale(sign)
