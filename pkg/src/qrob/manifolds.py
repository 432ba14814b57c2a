"""Ring constructors for the built-in manifold expressions.

The expression AST covers spheres, tori, orientable surfaces, complex
projective spaces, S2xS2, binary products (via the tensor-product basis with
the Koszul sign rule) and connected sums. Connected sums identify the top
classes, take direct sums in middle degrees, and set cross-summand products
of positive degree to zero; the duality check in `GradedRing.validate` guards
that rule after every build.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import RingValidationError
from .exterior import merge_axes
from .linalg import Matrix
from .ring import Generator, GradedRing, Presentation, RingElement, SparseVec


@dataclass(frozen=True)
class Sphere:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sphere dimension must be >= 1")


@dataclass(frozen=True)
class Torus:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("torus dimension must be >= 1")


@dataclass(frozen=True)
class Surface:
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("surface genus must be >= 1 (the sphere is excluded)")


@dataclass(frozen=True)
class CPm:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("projective space needs m >= 1")


@dataclass(frozen=True)
class S2xS2:
    pass


@dataclass(frozen=True)
class Product:
    left: "ManifoldExpr"
    right: "ManifoldExpr"


@dataclass(frozen=True)
class ConnSum:
    left: "ManifoldExpr"
    right: "ManifoldExpr"


ManifoldExpr = Sphere | Torus | Surface | CPm | S2xS2 | Product | ConnSum


def connsum_power(expr: ManifoldExpr, nu: int) -> ManifoldExpr:
    if nu < 1:
        raise ValueError("connected-sum multiplicity must be >= 1")
    out: ManifoldExpr = expr
    for _ in range(nu - 1):
        out = ConnSum(out, expr)
    return out


def factor_list(expr: ManifoldExpr) -> list[ManifoldExpr]:
    """Flatten nested products left-to-right into the factor sequence."""
    if isinstance(expr, Product):
        return factor_list(expr.left) + factor_list(expr.right)
    return [expr]


# -- atomic constructors ----------------------------------------------------


def _sphere_ring(n: int) -> GradedRing:
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    dims = [1] + [0] * (n - 1) + [1]
    labels = [["1"]] + [[] for _ in range(n - 1)] + [["vol"]]
    words: list[tuple[tuple[int, ...], ...]] = []
    for k in range(n + 1):
        if k == 0:
            words.append(((),))
        elif k == n:
            words.append(((0,),))
        else:
            words.append(())
    pres = Presentation((Generator(n, 0, "vol"),), tuple(words))
    return GradedRing(n, dims, labels, {}, 0, pres)


def _torus_ring(n: int) -> GradedRing:
    if n < 1:
        raise ValueError("torus dimension must be >= 1")
    axes_by_degree = [list(combinations(range(1, n + 1), k)) for k in range(n + 1)]
    index = [{axes: i for i, axes in enumerate(per)} for per in axes_by_degree]
    dims = [len(per) for per in axes_by_degree]
    labels = []
    for k, per in enumerate(axes_by_degree):
        if k == 0:
            labels.append(["1"])
        elif k == n:
            labels.append(["vol"])
        else:
            labels.append(["^".join(f"t{a}" for a in axes) for axes in per])
    structure = {}
    for p in range(1, n):
        for q in range(1, n - p + 1):
            table = {}
            for i, a in enumerate(axes_by_degree[p]):
                for j, b in enumerate(axes_by_degree[q]):
                    merged = merge_axes(a, b)
                    if merged is None:
                        continue
                    sign, axes = merged
                    table[(i, j)] = {index[p + q][axes]: Fraction(sign)}
            structure[(p, q)] = table
    gens = tuple(Generator(1, i, f"t{i + 1}") for i in range(n))
    words = tuple(
        tuple(tuple(a - 1 for a in axes) for axes in per) for per in axes_by_degree
    )
    return GradedRing(n, dims, labels, structure, 0, Presentation(gens, words))


def _cpm_ring(m: int) -> GradedRing:
    if m < 1:
        raise ValueError("projective space needs m >= 1")
    d = 2 * m
    dims = [1 if k % 2 == 0 else 0 for k in range(d + 1)]
    labels = []
    for k in range(d + 1):
        if k % 2:
            labels.append([])
        elif k == 0:
            labels.append(["1"])
        elif k == 2:
            labels.append(["s"])
        else:
            labels.append([f"s^{k // 2}"])
    structure = {}
    for p in range(2, d, 2):
        for q in range(2, d - p + 1, 2):
            structure[(p, q)] = {(0, 0): {0: Fraction(1)}}
    gens = (Generator(2, 0, "s"),)
    words = tuple(
        ((0,) * (k // 2),) if k % 2 == 0 else () for k in range(d + 1)
    )
    return GradedRing(d, dims, labels, structure, 0, Presentation(gens, words))


def _s2xs2_ring() -> GradedRing:
    dims = [1, 0, 2, 0, 1]
    labels = [["1"], [], ["c1", "c2"], [], ["vol"]]
    structure = {(2, 2): {(0, 1): {0: Fraction(1)}, (1, 0): {0: Fraction(1)}}}
    gens = (Generator(2, 0, "c1"), Generator(2, 1, "c2"))
    words = ((() ,), (), ((0,), (1,)), (), ((0, 1),))
    return GradedRing(4, dims, labels, structure, 0, Presentation(gens, words))


# -- product (tensor basis with Koszul signs) --------------------------------


def kunneth_layout(
    left: GradedRing, right: GradedRing
) -> tuple[list[list[tuple[int, int, int, int]]], dict]:
    """Basis layout of the product ring.

    Degree-k basis elements are the pairs (p, i, q, j) with p + q = k,
    ordered by (p, i, j); the returned dict maps each tuple to its index.
    """
    d = left.top_degree + right.top_degree
    layout: list[list[tuple[int, int, int, int]]] = []
    index: dict[tuple[int, int, int, int], int] = {}
    for k in range(d + 1):
        per = []
        for p in range(0, min(k, left.top_degree) + 1):
            q = k - p
            if q > right.top_degree:
                continue
            for i in range(left.dims[p]):
                for j in range(right.dims[q]):
                    index[(p, i, q, j)] = len(per)
                    per.append((p, i, q, j))
        layout.append(per)
    return layout, index


def _product_ring(left: GradedRing, right: GradedRing) -> GradedRing:
    d = left.top_degree + right.top_degree
    layout, index = kunneth_layout(left, right)
    dims = [len(per) for per in layout]
    labels = [
        [f"{left.labels[p][i]}⊗{right.labels[q][j]}" for (p, i, q, j) in per]
        for per in layout
    ]
    structure = {}
    for a in range(1, d):
        for b in range(1, d - a + 1):
            table = {}
            for x, (p, i, q, j) in enumerate(layout[a]):
                for y, (r, s, t, u) in enumerate(layout[b]):
                    if p + r > left.top_degree or q + t > right.top_degree:
                        continue
                    lvec = left.product_vec(p, i, r, s)
                    if not lvec:
                        continue
                    rvec = right.product_vec(q, j, t, u)
                    if not rvec:
                        continue
                    sign = -1 if (q * r) % 2 else 1
                    vec: SparseVec = {}
                    for li, lc in lvec.items():
                        for ri, rc in rvec.items():
                            pos = index[(p + r, li, q + t, ri)]
                            vec[pos] = vec.get(pos, Fraction(0)) + sign * lc * rc
                    vec = {t2: c for t2, c in vec.items() if c}
                    if vec:
                        table[(x, y)] = vec
            if table:
                structure[(a, b)] = table
    fund = index[
        (left.top_degree, left.fundamental_index, right.top_degree,
         right.fundamental_index)
    ]
    pres = None
    if left.presentation and right.presentation:
        lg = left.presentation.generators
        rg = right.presentation.generators
        gens = tuple(
            Generator(g.degree, index[(g.degree, g.index, 0, 0)], f"{g.name}⊗1")
            for g in lg
        ) + tuple(
            Generator(g.degree, index[(0, 0, g.degree, g.index)], f"1⊗{g.name}")
            for g in rg
        )
        shift = len(lg)
        words = tuple(
            tuple(
                tuple(left.presentation.words[p][i])
                + tuple(w + shift for w in right.presentation.words[q][j])
                for (p, i, q, j) in per
            )
            for per in layout
        )
        pres = Presentation(gens, words)
    return GradedRing(d, dims, labels, structure, fund, pres)


def pull_left(
    product_ring: GradedRing, left: GradedRing, right: GradedRing, x: RingElement
) -> RingElement:
    """Image of a left-factor class under the projection pull-back."""
    _, index = kunneth_layout(left, right)
    out: dict[int, list[Fraction]] = {}
    for k, vec in x.coords().items():
        dense = [Fraction(0)] * product_ring.dims[k]
        for i, c in enumerate(vec):
            dense[index[(k, i, 0, 0)]] = c
        out[k] = dense
    return RingElement(product_ring, out)


def pull_right(
    product_ring: GradedRing, left: GradedRing, right: GradedRing, x: RingElement
) -> RingElement:
    """Image of a right-factor class under the projection pull-back."""
    _, index = kunneth_layout(left, right)
    out: dict[int, list[Fraction]] = {}
    for k, vec in x.coords().items():
        dense = [Fraction(0)] * product_ring.dims[k]
        for j, c in enumerate(vec):
            dense[index[(0, 0, k, j)]] = c
        out[k] = dense
    return RingElement(product_ring, out)


def slice_restriction(left: GradedRing, right: GradedRing) -> list[Matrix]:
    """Restriction matrices for the slice inclusion of the left factor.

    Basis classes (p, i, q, j) of the product map to basis_p[i] when q = 0
    and to zero otherwise; the result is one matrix per product degree with
    shape dims_left[k] x dims_product[k].
    """
    layout, _ = kunneth_layout(left, right)
    d = left.top_degree + right.top_degree
    mats: list[Matrix] = []
    for k in range(d + 1):
        rows = left.dims[k] if k <= left.top_degree else 0
        mat = [[Fraction(0)] * len(layout[k]) for _ in range(rows)]
        for col, (p, i, q, j) in enumerate(layout[k]):
            if q == 0 and p == k and rows:
                mat[i][col] = Fraction(1)
        mats.append(mat)
    return mats


# -- connected sum ------------------------------------------------------------

def _connsum_ring(a: GradedRing, b: GradedRing) -> GradedRing:
    d = a.top_degree
    if b.top_degree != d:
        raise RingValidationError(
            f"connected sum needs equal top degrees, got {d} and {b.top_degree}"
        )
    if d < 2:
        raise RingValidationError("connected sum needs top degree >= 2")
    dims = [1] + [a.dims[k] + b.dims[k] for k in range(1, d)] + [1]
    labels: list[list[str]] = [["1"]]
    for k in range(1, d):
        labels.append([f"c{i + 1}" for i in range(dims[k])])
    labels.append(["vol"])

    structure = {}
    for p in range(1, d):
        for q in range(1, d - p + 1):
            table: dict[tuple[int, int], SparseVec] = {}
            k = p + q
            for (i, j), vec in a._table(p, q).items():
                if k == d:
                    c = vec.get(a.fundamental_index, Fraction(0))
                    if c:
                        table[(i, j)] = {0: c}
                else:
                    table[(i, j)] = dict(vec)
            off_p, off_q, off_k = a.dims[p], a.dims[q], a.dims[k] if k < d else 0
            for (i, j), vec in b._table(p, q).items():
                if k == d:
                    c = vec.get(b.fundamental_index, Fraction(0))
                    if c:
                        table[(i + off_p, j + off_q)] = {0: c}
                else:
                    table[(i + off_p, j + off_q)] = {
                        t + off_k: c for t, c in vec.items()
                    }
            if table:
                structure[(p, q)] = table

    pres = None
    if a.presentation and b.presentation:
        gens: list[Generator] = list(a.presentation.generators)
        remap: dict[int, int] = {}
        for gid, g in enumerate(b.presentation.generators):
            if g.degree >= d:
                continue  # the right summand's top class is identified away
            remap[gid] = len(gens)
            gens.append(Generator(g.degree, g.index + a.dims[g.degree], g.name))
        words: list[tuple[tuple[int, ...], ...]] = [((),)]
        for k in range(1, d):
            per = list(a.presentation.words[k])
            for w in b.presentation.words[k]:
                per.append(tuple(remap[gid] for gid in w))
            words.append(tuple(per))
        words.append((tuple(a.presentation.words[d][a.fundamental_index]),))
        gens = [
            Generator(g.degree, g.index, labels[g.degree][g.index]) for g in gens
        ]
        pres = Presentation(tuple(gens), tuple(words))
    return GradedRing(d, dims, labels, structure, 0, pres)


def _relabel_middle(ring: GradedRing) -> GradedRing:
    """Rename middle-degree classes to the canonical c1..cN convention."""
    d = ring.top_degree
    labels = [["1"]]
    for k in range(1, d):
        labels.append([f"c{i + 1}" for i in range(ring.dims[k])])
    labels.append(["vol"])
    pres = ring.presentation
    if pres:
        gens = tuple(
            Generator(g.degree, g.index, labels[g.degree][g.index])
            for g in pres.generators
        )
        pres = Presentation(gens, pres.words)
    return GradedRing(d, ring.dims, labels, ring.structure, ring.fundamental_index, pres)


# -- build --------------------------------------------------------------------

FactorClasses = dict[str, RingElement | None]

_BUILD_CACHE: dict[ManifoldExpr, tuple[GradedRing, tuple[FactorClasses, ...]]] = {}


def _construct(expr: ManifoldExpr) -> tuple[GradedRing, tuple[FactorClasses, ...]]:
    if isinstance(expr, Sphere):
        ring = _sphere_ring(expr.n)
    elif isinstance(expr, Torus):
        ring = _torus_ring(expr.n)
    elif isinstance(expr, CPm):
        ring = _cpm_ring(expr.m)
    elif isinstance(expr, S2xS2):
        ring = _s2xs2_ring()
    elif isinstance(expr, Surface):
        ring = _torus_ring(2)
        for _ in range(expr.g - 1):
            ring = _connsum_ring(ring, _torus_ring(2))
        ring = _relabel_middle(ring)
    elif isinstance(expr, ConnSum):
        left, _ = _construct(expr.left)
        right, _ = _construct(expr.right)
        ring = _connsum_ring(left, right)
    elif isinstance(expr, Product):
        lring, lclasses = _construct(expr.left)
        rring, rclasses = _construct(expr.right)
        ring = _product_ring(lring, rring)
        classes = tuple(
            {
                name: pull_left(ring, lring, rring, x) if x is not None else None
                for name, x in fc.items()
            }
            for fc in lclasses
        ) + tuple(
            {
                name: pull_right(ring, lring, rring, x) if x is not None else None
                for name, x in fc.items()
            }
            for fc in rclasses
        )
        return ring, classes
    else:
        raise TypeError(f"not a manifold expression: {expr!r}")
    classes: FactorClasses = {"vol": ring.fundamental_class(), "sym": None}
    if isinstance(expr, CPm):
        classes["sym"] = ring.basis_element(2, 0)
    return ring, (classes,)


def build_with_classes(
    expr: ManifoldExpr,
) -> tuple[GradedRing, tuple[FactorClasses, ...]]:
    """Build and validate the ring, with the named class of each factor."""
    if expr not in _BUILD_CACHE:
        ring, classes = _construct(expr)
        ring.validate()
        _BUILD_CACHE[expr] = (ring, classes)
    return _BUILD_CACHE[expr]


def build(expr: ManifoldExpr) -> GradedRing:
    """Build and validate the ring for a manifold expression."""
    return build_with_classes(expr)[0]
