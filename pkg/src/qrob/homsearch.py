"""Construction and exact verification of graded homomorphism witnesses.

A witness maps each basis class of degree 1..min(top, n) to an element of
the exterior algebra on n generators; degrees above n go to zero. Searchers
(template catalog, bounded enumeration) only propose candidates - every
returned witness has passed `verify_hom`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import MissingPresentationError, ShapeMismatchError
from .exterior import ExtElement, blades, wedge
from .manifolds import (
    ConnSum,
    CPm,
    ManifoldExpr,
    S2xS2,
    Sphere,
    Surface,
    Torus,
    build,
    factor_list,
)
from .ring import GradedRing, RingElement, multiply


@dataclass
class HomWitness:
    """Per-degree images of the basis classes under a graded linear map."""

    ring: GradedRing
    ambient_n: int
    images: dict[int, list[ExtElement]]

    def check_shape(self) -> None:
        expected = set(range(1, min(self.ring.top_degree, self.ambient_n) + 1))
        if set(self.images) != expected:
            raise ShapeMismatchError(
                f"witness must cover degrees {sorted(expected)}, "
                f"got {sorted(self.images)}"
            )
        for k, per in self.images.items():
            if len(per) != self.ring.dims[k]:
                raise ShapeMismatchError(f"wrong image count in degree {k}")
            for i, img in enumerate(per):
                if img.ambient_n != self.ambient_n:
                    raise ShapeMismatchError(
                        f"image ({k},{i}) has wrong ambient dimension"
                    )
                if not img.is_zero() and (
                    not img.is_homogeneous() or img.degree() != k
                ):
                    raise ShapeMismatchError(
                        f"image ({k},{i}) is not homogeneous of degree {k}"
                    )

    def apply(self, x: RingElement) -> ExtElement:
        out = ExtElement.zero(self.ambient_n)
        for k, vec in x.coords().items():
            if k == 0:
                out = out + ExtElement.scalar(self.ambient_n, vec[0])
            elif k <= self.ambient_n and k <= self.ring.top_degree:
                per = self.images[k]
                for i, c in enumerate(vec):
                    if c:
                        out = out + per[i].scale(c)
        return out

    def to_obj(self) -> dict:
        return {
            "ring_hash": self.ring.hash_hex(),
            "ambient_n": self.ambient_n,
            "images": {
                str(k): [img.to_obj() for img in per]
                for k, per in sorted(self.images.items())
            },
        }

    @classmethod
    def from_obj(cls, ring: GradedRing, obj: dict) -> "HomWitness":
        n = int(obj["ambient_n"])
        images = {
            int(k): [ExtElement.from_obj(o) for o in per]
            for k, per in obj["images"].items()
        }
        return cls(ring, n, images)


def verify_hom(witness: HomWitness, omega: RingElement) -> bool:
    """Exact check: multiplicativity on all basis pairs and omega mapped nonzero.

    Pairs whose degree sum exceeds the ambient dimension are checked too; they
    must land on zero, which the exterior algebra forces on the wedge side.
    """
    witness.check_shape()
    ring = witness.ring
    d = ring.top_degree
    zero = ExtElement.zero(witness.ambient_n)
    for p in range(1, d):
        per_p = witness.images.get(p)
        for q in range(1, d - p + 1):
            per_q = witness.images.get(q)
            for i in range(ring.dims[p]):
                img_i = per_p[i] if per_p else zero
                for j in range(ring.dims[q]):
                    img_j = per_q[j] if per_q else zero
                    prod = multiply(
                        ring.basis_element(p, i), ring.basis_element(q, j)
                    )
                    if witness.apply(prod) != wedge(img_i, img_j):
                        return False
    return not witness.apply(omega).is_zero()


def witness_from_generators(
    ring: GradedRing, gen_images: list[ExtElement], n: int
) -> HomWitness:
    """Induce basis images from generator images via the monomial words."""
    pres = ring.presentation
    if pres is None:
        raise MissingPresentationError("ring carries no monomial presentation")
    if len(gen_images) != len(pres.generators):
        raise ShapeMismatchError("one image per generator required")
    images: dict[int, list[ExtElement]] = {}
    for k in range(1, min(ring.top_degree, n) + 1):
        per = []
        for word in pres.words[k]:
            acc = ExtElement.scalar(n, 1)
            for gid in word:
                acc = wedge(acc, gen_images[gid])
                if acc.is_zero():
                    break
            per.append(acc)
        images[k] = per
    return HomWitness(ring, n, images)


# -- template catalog ---------------------------------------------------------


def _compositions(total: int, maxima: list[int]):
    """All tuples with given bounds summing to total, lexicographically."""
    if not maxima:
        if total == 0:
            yield ()
        return
    for first in range(0, min(total, maxima[0]) + 1):
        for rest in _compositions(total - first, maxima[1:]):
            yield (first,) + rest


def _connsum_summands(expr: ManifoldExpr) -> list[ManifoldExpr]:
    if isinstance(expr, ConnSum):
        return _connsum_summands(expr.left) + _connsum_summands(expr.right)
    return [expr]


def _factor_gen_images(
    expr: ManifoldExpr, axes: tuple[int, ...], n: int
) -> list[ExtElement] | None:
    """Generator images for one factor on a block of axes; None if no template.

    Catalog: torus generators to distinct axes, the projective-space generator
    to a sum of disjoint 2-blades, sphere and S2xS2 classes to full blocks,
    connected sums to a template on the first summand with zeros elsewhere.
    """
    zero = ExtElement.zero(n)
    if isinstance(expr, Torus):
        if len(axes) > expr.n:
            return None
        images = [
            ExtElement.basis(n, (axes[i],)) if i < len(axes) else zero
            for i in range(expr.n)
        ]
        return images
    if isinstance(expr, Sphere):
        if not axes:
            return [zero]
        if len(axes) == expr.n:
            return [ExtElement.basis(n, axes)]
        return None
    if isinstance(expr, CPm):
        if len(axes) % 2 or len(axes) > 2 * expr.m:
            return None
        pairs = [
            (axes[2 * i], axes[2 * i + 1]) for i in range(len(axes) // 2)
        ]
        image = zero
        for pair in pairs:
            image = image + ExtElement.basis(n, pair)
        return [image]
    if isinstance(expr, S2xS2):
        if not axes:
            return [zero, zero]
        if len(axes) == 4:
            return [
                ExtElement.basis(n, (axes[0], axes[1])),
                ExtElement.basis(n, (axes[2], axes[3])),
            ]
        return None
    if isinstance(expr, Surface):
        if not axes:
            return [zero] * (2 * expr.g)
        if len(axes) == 2:
            return [
                ExtElement.basis(n, (axes[0],)),
                ExtElement.basis(n, (axes[1],)),
            ] + [zero] * (2 * expr.g - 2)
        return None
    if isinstance(expr, ConnSum):
        # The merged ring keeps all generators of the first summand but only
        # the middle-degree generators of the rest; the template puts the whole
        # block on the first summand and zero everywhere else.
        summands = _connsum_summands(expr)
        parts: list[ExtElement] = []
        for pos, summand in enumerate(summands):
            ring = build(summand)
            if ring.presentation is None:
                return None
            if pos == 0:
                block = _factor_gen_images(summand, axes, n)
                if block is None:
                    return None
                parts.extend(block)
            else:
                middle = sum(
                    1
                    for g in ring.presentation.generators
                    if g.degree < ring.top_degree
                )
                parts.extend([zero] * middle)
        return parts
    return None


def witness_template(
    expr: ManifoldExpr, omega: RingElement, n: int
) -> HomWitness | None:
    """Try the template catalog over axis-block allocations; verified only."""
    ring = build(expr)
    if ring.presentation is None:
        return None
    factors = factor_list(expr)
    factor_rings = [build(f) for f in factors]
    if any(r.presentation is None for r in factor_rings):
        return None
    maxima = [min(n, r.top_degree) for r in factor_rings]
    for sizes in _compositions(n, maxima):
        start = 1
        gen_images: list[ExtElement] = []
        ok = True
        for f_expr, size in zip(factors, sizes):
            axes = tuple(range(start, start + size))
            start += size
            block = _factor_gen_images(f_expr, axes, n)
            if block is None:
                ok = False
                break
            gen_images.extend(block)
        if not ok or len(gen_images) != len(ring.presentation.generators):
            continue
        witness = witness_from_generators(ring, gen_images, n)
        if verify_hom(witness, omega):
            return witness
    return None


# -- bounded enumeration --------------------------------------------------------


@dataclass(frozen=True)
class EnumBudget:
    """Coefficient set and assignment cap for the enumeration search."""

    coefficients: tuple[Fraction, ...] = (Fraction(-1), Fraction(0), Fraction(1))
    max_nodes: int = 50_000

    def nonzero(self) -> list[Fraction]:
        # Positive before negative at each magnitude, smallest magnitude first.
        return sorted(
            (Fraction(c) for c in set(self.coefficients) if c != 0),
            key=lambda c: (abs(c), c < 0),
        )


def _image_stream(n: int, k: int, coeffs: list[Fraction]):
    """Candidate images of one degree-k generator, by support size then blades."""
    yield ExtElement.zero(n)
    base = list(blades(n, k))
    for size in range(1, len(base) + 1):
        for support in combinations(base, size):
            patterns: list[list[Fraction]] = [[]]
            for _ in range(size):
                patterns = [p + [c] for p in patterns for c in coeffs]
            for pattern in patterns:
                yield ExtElement(n, dict(zip(support, pattern)))


class _LazySeq:
    """Lazily materialized image sequence with random access by index."""

    def __init__(self, stream):
        self._stream = stream
        self._pool: list[ExtElement] = []
        self.exhausted = False

    def get(self, idx: int) -> ExtElement | None:
        while len(self._pool) <= idx and not self.exhausted:
            try:
                self._pool.append(next(self._stream))
            except StopIteration:
                self.exhausted = True
        return self._pool[idx] if idx < len(self._pool) else None

    def cap(self, stage: int) -> int:
        """Largest usable index at this stage (indices never exceed the stage)."""
        self.get(stage)
        return min(stage, len(self._pool) - 1)


def _index_tuples(total: int, caps: list[int]):
    """Index tuples with the given caps summing to total, lexicographically."""
    if not caps:
        if total == 0:
            yield ()
        return
    for first in range(0, min(total, caps[0]) + 1):
        for rest in _index_tuples(total - first, caps[1:]):
            yield (first,) + rest


@dataclass
class EnumerationOutcome:
    witness: HomWitness | None
    nodes: int
    space_exhausted: bool


def enumerate_hom_detailed(
    ring: GradedRing,
    omega: RingElement,
    n: int,
    budget: EnumBudget = EnumBudget(),
) -> EnumerationOutcome:
    """Staged deterministic enumeration of generator-image assignments.

    Assignments are ordered by the total of the per-generator sequence
    indices, then lexicographically, so simple witnesses on any generator are
    found early. The first assignment passing `verify_hom` wins; the image of
    omega is checked first as a cheap filter.
    """
    pres = ring.presentation
    if pres is None:
        raise MissingPresentationError("enumeration needs a monomial presentation")
    coeffs = budget.nonzero()
    sequences = [
        _LazySeq(_image_stream(n, g.degree, coeffs)) if g.degree <= n
        else _LazySeq(iter([ExtElement.zero(n)]))
        for g in pres.generators
    ]
    omega_words = _support_words(ring, omega)
    nodes = 0
    total = 0
    while True:
        caps = [seq.cap(total) for seq in sequences]
        if all(seq.exhausted for seq in sequences) and total > sum(caps):
            return EnumerationOutcome(None, nodes, True)
        for combo in _index_tuples(total, caps):
            if nodes >= budget.max_nodes:
                return EnumerationOutcome(None, nodes, False)
            nodes += 1
            gen_images = [sequences[g].get(idx) for g, idx in enumerate(combo)]
            if _phi_omega(gen_images, omega_words, n).is_zero():
                continue
            witness = witness_from_generators(ring, gen_images, n)
            if verify_hom(witness, omega):
                return EnumerationOutcome(witness, nodes, False)
        total += 1


def enumerate_hom(
    ring: GradedRing,
    omega: RingElement,
    n: int,
    budget: EnumBudget = EnumBudget(),
) -> HomWitness | None:
    return enumerate_hom_detailed(ring, omega, n, budget).witness


def _support_words(ring: GradedRing, omega: RingElement):
    """(coefficient, generator word) pairs spanning omega's support."""
    words = []
    for k, vec in omega.coords().items():
        for i, c in enumerate(vec):
            if c:
                words.append((c, ring.presentation.words[k][i], k))
    return words


def _phi_omega(gen_images, words, n: int) -> ExtElement:
    out = ExtElement.zero(n)
    for coeff, word, degree in words:
        if degree > n:
            continue
        acc = ExtElement.scalar(n, coeff)
        for gid in word:
            acc = wedge(acc, gen_images[gid])
            if acc.is_zero():
                break
        out = out + acc
    return out
