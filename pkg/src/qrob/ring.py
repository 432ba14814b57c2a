"""Finite-dimensional graded commutative algebras over the rationals.

A ring is given by per-degree dimensions, basis labels, and sparse structure
constants; products of total degree above the top degree vanish (the ring
models the full cohomology of a closed oriented manifold of that dimension).
All coefficients are exact rationals. Rings and their elements are immutable
after construction and every query here is a pure function, so values are
safe to share across threads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    IdealUndefinedError,
    NonHomogeneousError,
    RingMismatchError,
    RingValidationError,
)
from .linalg import (
    Matrix,
    fraction_from_str,
    fraction_to_str,
    rank,
    row_space_basis,
    solve,
)

SparseVec = dict[int, Fraction]
# structure[(p, q)][(i, j)] = sparse coordinate vector of basis_p[i] * basis_q[j]
# in degree p+q; only degrees p, q >= 1 with p+q <= top_degree are stored, and
# missing entries mean the product is zero.
Structure = dict[tuple[int, int], dict[tuple[int, int], SparseVec]]


@dataclass(frozen=True)
class Generator:
    degree: int
    index: int
    name: str


@dataclass(frozen=True)
class Presentation:
    """Each basis element written as an exact ordered product of generators."""

    generators: tuple[Generator, ...]
    words: tuple[tuple[tuple[int, ...], ...], ...]  # words[degree][index] -> gen ids

    def to_obj(self) -> dict:
        return {
            "generators": [
                {"degree": g.degree, "index": g.index, "name": g.name}
                for g in self.generators
            ],
            "words": [[list(w) for w in per_degree] for per_degree in self.words],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Presentation":
        gens = tuple(
            Generator(int(g["degree"]), int(g["index"]), str(g["name"]))
            for g in obj["generators"]
        )
        words = tuple(
            tuple(tuple(int(i) for i in w) for w in per_degree)
            for per_degree in obj["words"]
        )
        return cls(gens, words)


class GradedRing:
    __slots__ = (
        "top_degree",
        "dims",
        "labels",
        "structure",
        "fundamental_index",
        "presentation",
        "_hash_hex",
    )

    def __init__(
        self,
        top_degree: int,
        dims,
        labels,
        structure: Structure,
        fundamental_index: int = 0,
        presentation: Presentation | None = None,
    ):
        self.top_degree = int(top_degree)
        self.dims = tuple(int(d) for d in dims)
        self.labels = tuple(tuple(str(s) for s in per_degree) for per_degree in labels)
        self.structure = {
            pq: {ij: dict(vec) for ij, vec in table.items() if vec}
            for pq, table in structure.items()
        }
        self.fundamental_index = int(fundamental_index)
        self.presentation = presentation
        self._hash_hex = None

    # -- elements ---------------------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def unit(self) -> "RingElement":
        return self.basis_element(0, 0)

    def fundamental_class(self) -> "RingElement":
        return self.basis_element(self.top_degree, self.fundamental_index)

    def basis_element(self, k: int, i: int) -> "RingElement":
        if not (0 <= k <= self.top_degree) or not (0 <= i < self.dims[k]):
            raise ValueError(f"no basis element ({k}, {i})")
        vec = [Fraction(0)] * self.dims[k]
        vec[i] = Fraction(1)
        return RingElement(self, {k: vec})

    def basis(self, k: int) -> list["RingElement"]:
        return [self.basis_element(k, i) for i in range(self.dims[k])]

    def element(self, k: int, coords) -> "RingElement":
        return RingElement(self, {k: [Fraction(c) for c in coords]})

    # -- product ----------------------------------------------------------

    def _table(self, p: int, q: int) -> dict[tuple[int, int], SparseVec]:
        return self.structure.get((p, q), {})

    def product_vec(self, p: int, i: int, q: int, j: int) -> SparseVec:
        """Sparse coordinates of basis_p[i] * basis_q[j] in degree p+q."""
        if p + q > self.top_degree:
            return {}
        if p == 0:
            return {j: Fraction(1)}
        if q == 0:
            return {i: Fraction(1)}
        return self._table(p, q).get((i, j), {})

    # -- serialization ------------------------------------------------------

    def to_obj(self) -> dict:
        tables = []
        for (p, q) in sorted(self.structure):
            table = self.structure[(p, q)]
            products = []
            for (i, j) in sorted(table):
                vec = table[(i, j)]
                dense = [Fraction(0)] * self.dims[p + q]
                for t, c in vec.items():
                    dense[t] = c
                products.append([i, j, [fraction_to_str(c) for c in dense]])
            if products:
                tables.append({"p": p, "q": q, "products": products})
        return {
            "top_degree": self.top_degree,
            "dims": list(self.dims),
            "labels": [list(per_degree) for per_degree in self.labels],
            "structure": tables,
            "fundamental_index": self.fundamental_index,
            "monomial_presentation": (
                self.presentation.to_obj() if self.presentation else None
            ),
        }

    @classmethod
    def from_obj(cls, obj: dict, validate: bool = True) -> "GradedRing":
        structure: Structure = {}
        for entry in obj.get("structure", []):
            p, q = int(entry["p"]), int(entry["q"])
            if p < 1 or q < 1:
                raise RingValidationError("structure tables exist only for p, q >= 1")
            table: dict[tuple[int, int], SparseVec] = {}
            for i, j, dense in entry["products"]:
                vec = {
                    t: fraction_from_str(c)
                    for t, c in enumerate(dense)
                    if fraction_from_str(c)
                }
                if vec:
                    table[(int(i), int(j))] = vec
            structure[(p, q)] = table
        pres_obj = obj.get("monomial_presentation")
        ring = cls(
            obj["top_degree"],
            obj["dims"],
            obj["labels"],
            structure,
            obj.get("fundamental_index", 0),
            Presentation.from_obj(pres_obj) if pres_obj else None,
        )
        if validate:
            ring.validate()
        return ring

    def canonical_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))

    def hash_hex(self) -> str:
        if self._hash_hex is None:
            self._hash_hex = hashlib.sha256(
                self.canonical_json().encode("utf-8")
            ).hexdigest()
        return self._hash_hex

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedRing) and self.hash_hex() == other.hash_hex()

    def __hash__(self) -> int:
        return hash(self.hash_hex())

    def __repr__(self) -> str:
        return f"GradedRing(top_degree={self.top_degree}, dims={list(self.dims)})"

    # -- invariants ---------------------------------------------------------

    def validate(self) -> None:
        """Check every structural invariant; raise RingValidationError."""
        d = self.top_degree
        if d < 1:
            raise RingValidationError("top degree must be >= 1")
        if len(self.dims) != d + 1 or len(self.labels) != d + 1:
            raise RingValidationError("dims/labels must cover degrees 0..top")
        if self.dims[0] != 1:
            raise RingValidationError("degree 0 must be one-dimensional (the unit)")
        if any(dim < 0 for dim in self.dims):
            raise RingValidationError("negative dimension")
        if any(len(self.labels[k]) != self.dims[k] for k in range(d + 1)):
            raise RingValidationError("label count must match dimension")
        if not (0 <= self.fundamental_index < self.dims[d]):
            raise RingValidationError("fundamental class index out of range")
        self._validate_tables()
        self._validate_commutativity()
        self._validate_associativity()
        self._validate_pairing()
        self._validate_presentation()

    def _validate_tables(self) -> None:
        d = self.top_degree
        for (p, q), table in self.structure.items():
            if p < 1 or q < 1 or p + q > d:
                raise RingValidationError(f"illegal structure table ({p}, {q})")
            for (i, j), vec in table.items():
                if not (0 <= i < self.dims[p] and 0 <= j < self.dims[q]):
                    raise RingValidationError(f"index out of range in table ({p},{q})")
                if any(not (0 <= t < self.dims[p + q]) for t in vec):
                    raise RingValidationError(
                        f"product coordinate out of range in table ({p},{q})"
                    )

    def _validate_commutativity(self) -> None:
        d = self.top_degree
        for p in range(1, d):
            for q in range(1, d - p + 1):
                sign = -1 if (p * q) % 2 else 1
                for i in range(self.dims[p]):
                    for j in range(self.dims[q]):
                        ab = self.product_vec(p, i, q, j)
                        ba = self.product_vec(q, j, p, i)
                        flipped = {t: sign * c for t, c in ba.items()}
                        if ab != flipped:
                            raise RingValidationError(
                                f"graded commutativity fails at ({p},{i})*({q},{j})"
                            )

    def _validate_associativity(self) -> None:
        d = self.top_degree
        for p in range(1, d + 1):
            for q in range(1, d - p + 1):
                for r in range(1, d - p - q + 1):
                    for i in range(self.dims[p]):
                        for j in range(self.dims[q]):
                            left_pq = self.product_vec(p, i, q, j)
                            for k in range(self.dims[r]):
                                lhs: SparseVec = {}
                                for t, c in left_pq.items():
                                    for u, c2 in self.product_vec(
                                        p + q, t, r, k
                                    ).items():
                                        lhs[u] = lhs.get(u, Fraction(0)) + c * c2
                                rhs: SparseVec = {}
                                for s, c in self.product_vec(q, j, r, k).items():
                                    for u, c2 in self.product_vec(
                                        p, i, q + r, s
                                    ).items():
                                        rhs[u] = rhs.get(u, Fraction(0)) + c * c2
                                lhs = {t: c for t, c in lhs.items() if c}
                                rhs = {t: c for t, c in rhs.items() if c}
                                if lhs != rhs:
                                    raise RingValidationError(
                                        "associativity fails at "
                                        f"({p},{i})*({q},{j})*({r},{k})"
                                    )

    def _validate_pairing(self) -> None:
        d = self.top_degree
        for k in range(d + 1):
            if self.dims[k] != self.dims[d - k]:
                raise RingValidationError(
                    f"duality dimension mismatch: dims[{k}] != dims[{d - k}]"
                )
            mat = poincare_pairing(self, k)
            if self.dims[k] and rank(mat) != self.dims[k]:
                raise RingValidationError(f"degenerate duality pairing in degree {k}")

    def _validate_presentation(self) -> None:
        pres = self.presentation
        if pres is None:
            return
        d = self.top_degree
        if len(pres.words) != d + 1:
            raise RingValidationError("presentation must cover degrees 0..top")
        for g in pres.generators:
            if not (1 <= g.degree <= d and 0 <= g.index < self.dims[g.degree]):
                raise RingValidationError(f"generator out of range: {g}")
        for k in range(d + 1):
            if len(pres.words[k]) != self.dims[k]:
                raise RingValidationError(f"presentation incomplete in degree {k}")
            for i, word in enumerate(pres.words[k]):
                acc = self.unit()
                for gid in word:
                    g = pres.generators[gid]
                    acc = acc * self.basis_element(g.degree, g.index)
                if acc != self.basis_element(k, i):
                    raise RingValidationError(
                        f"presentation word for ({k},{i}) does not multiply out"
                    )


class RingElement:
    """A ring element as exact coordinates per degree; zero parts dropped."""

    __slots__ = ("ring", "_coords")

    def __init__(self, ring: GradedRing, coords: dict[int, list[Fraction]]):
        self.ring = ring
        clean: dict[int, tuple[Fraction, ...]] = {}
        for k, vec in coords.items():
            if not (0 <= k <= ring.top_degree):
                raise ValueError(f"degree {k} out of range")
            if len(vec) != ring.dims[k]:
                raise ValueError(f"coordinate length mismatch in degree {k}")
            tup = tuple(Fraction(c) for c in vec)
            if any(tup):
                clean[k] = tup
        self._coords = clean

    def coords(self) -> dict[int, tuple[Fraction, ...]]:
        return dict(self._coords)

    def vector(self, k: int) -> list[Fraction]:
        return list(self._coords.get(k, (Fraction(0),) * self.ring.dims[k]))

    def is_zero(self) -> bool:
        return not self._coords

    def degrees(self) -> set[int]:
        return set(self._coords)

    def is_homogeneous(self) -> bool:
        return len(self._coords) <= 1

    def degree(self) -> int:
        if len(self._coords) != 1:
            raise NonHomogeneousError(
                f"element has degrees {sorted(self._coords)}"
            )
        return next(iter(self._coords))

    def coefficient(self, k: int, i: int) -> Fraction:
        vec = self._coords.get(k)
        return vec[i] if vec else Fraction(0)

    def scale(self, factor) -> "RingElement":
        f = Fraction(factor)
        if not f:
            return self.ring.zero()
        return RingElement(
            self.ring, {k: [f * c for c in vec] for k, vec in self._coords.items()}
        )

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_ring(other)
        out: dict[int, list[Fraction]] = {
            k: list(vec) for k, vec in self._coords.items()
        }
        for k, vec in other._coords.items():
            if k in out:
                out[k] = [a + b for a, b in zip(out[k], vec)]
            else:
                out[k] = list(vec)
        return RingElement(self.ring, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(-1)

    def __neg__(self) -> "RingElement":
        return self.scale(-1)

    def __rmul__(self, factor) -> "RingElement":
        return self.scale(factor)

    def __mul__(self, other) -> "RingElement":
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._check_ring(other)
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElement)
            and self.ring == other.ring
            and self._coords == other._coords
        )

    def __hash__(self) -> int:
        return hash((self.ring.hash_hex(), frozenset(self._coords.items())))

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in sorted(self._coords):
            for i, c in enumerate(self._coords[k]):
                if not c:
                    continue
                label = self.ring.labels[k][i]
                if c == 1:
                    parts.append(label)
                elif c == -1:
                    parts.append(f"-{label}")
                else:
                    parts.append(f"{c}*{label}")
        return " + ".join(parts).replace("+ -", "- ")

    def _check_ring(self, other: "RingElement") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingMismatchError("elements belong to different rings")

    def to_obj(self) -> dict:
        return {
            "coords": {
                str(k): [fraction_to_str(c) for c in vec]
                for k, vec in sorted(self._coords.items())
            }
        }

    @classmethod
    def from_obj(cls, ring: GradedRing, obj: dict) -> "RingElement":
        return cls(
            ring,
            {
                int(k): [fraction_from_str(c) for c in vec]
                for k, vec in obj["coords"].items()
            },
        )


def multiply(x: RingElement, y: RingElement) -> RingElement:
    """Bilinear extension of the structure tables; truncates above top degree."""
    x._check_ring(y)
    ring = x.ring
    d = ring.top_degree
    out: dict[int, list[Fraction]] = {}
    for p, xv in x._coords.items():
        for q, yv in y._coords.items():
            k = p + q
            if k > d:
                continue
            acc = out.setdefault(k, [Fraction(0)] * ring.dims[k])
            if p == 0:
                for j, c in enumerate(yv):
                    acc[j] += xv[0] * c
                continue
            if q == 0:
                for i, c in enumerate(xv):
                    acc[i] += c * yv[0]
                continue
            table = ring._table(p, q)
            for i, xi in enumerate(xv):
                if not xi:
                    continue
                for j, yj in enumerate(yv):
                    if not yj:
                        continue
                    vec = table.get((i, j))
                    if not vec:
                        continue
                    f = xi * yj
                    for t, c in vec.items():
                        acc[t] += f * c
    return RingElement(ring, out)


def poincare_pairing(ring: GradedRing, k: int) -> Matrix:
    """P[i][j] = fundamental-class coefficient of basis_k[i] * basis_{d-k}[j]."""
    d = ring.top_degree
    if not (0 <= k <= d):
        raise ValueError(f"degree {k} out of range 0..{d}")
    fi = ring.fundamental_index
    out: Matrix = []
    for i in range(ring.dims[k]):
        row = []
        for j in range(ring.dims[d - k]):
            row.append(ring.product_vec(k, i, d - k, j).get(fi, Fraction(0)))
        out.append(row)
    return out


def mult_matrix(ring: GradedRing, c: RingElement, q: int) -> Matrix:
    """Matrix of left multiplication by c from degree q, as dense columns."""
    k = c.degree()
    target = k + q
    if target > ring.top_degree:
        return []
    rows = ring.dims[target]
    cols = ring.dims[q]
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for j in range(cols):
        prod = c * ring.basis_element(q, j)
        vec = prod.vector(target)
        for t in range(rows):
            out[t][j] = vec[t]
    return out


_IDEAL_CACHE: dict[tuple[str, int], list[tuple[Fraction, ...]]] = {}


def kunneth_ideal_basis(ring: GradedRing, k: int) -> list[RingElement]:
    """Canonical basis of the span of positive-degree products in degree k."""
    if k < 2:
        raise IdealUndefinedError("the product ideal starts at degree 2")
    if k > ring.top_degree:
        raise ValueError(f"degree {k} exceeds top degree {ring.top_degree}")
    key = (ring.hash_hex(), k)
    if key not in _IDEAL_CACHE:
        rows: list[tuple[Fraction, ...]] = []
        seen = set()
        for ell in range(1, k):
            table = ring._table(ell, k - ell)
            for (i, j) in sorted(table):
                dense = [Fraction(0)] * ring.dims[k]
                for t, c in table[(i, j)].items():
                    dense[t] = c
                tup = tuple(dense)
                if any(tup) and tup not in seen:
                    seen.add(tup)
                    rows.append(tup)
        _IDEAL_CACHE[key] = [
            tuple(row) for row in row_space_basis([list(r) for r in rows])
        ]
    return [ring.element(k, list(row)) for row in _IDEAL_CACHE[key]]


def in_kunneth_ideal(ring: GradedRing, omega: RingElement) -> bool:
    """Exact membership of a homogeneous class in the product ideal."""
    if omega.is_zero():
        return True
    if not omega.is_homogeneous():
        raise NonHomogeneousError("ideal membership needs a homogeneous class")
    k = omega.degree()
    if k < 2:
        return False
    basis = kunneth_ideal_basis(ring, k)
    rows = [list(b.vector(k)) for b in basis]
    return rank(rows) == rank(rows + [list(omega.vector(k))]) if rows else False


def factorizations(
    ring: GradedRing, omega: RingElement, ell: int
) -> list[tuple[RingElement, RingElement]]:
    """All pairs (c, c') with c a degree-ell basis element and c * c' = omega.

    c' is the canonical exact solution of the linear system; an empty list is
    a valid answer.
    """
    if omega.is_zero():
        return []
    if not omega.is_homogeneous():
        raise NonHomogeneousError("factorization needs a homogeneous class")
    k = omega.degree()
    if not (1 <= ell <= k - 1):
        raise ValueError(f"cofactor degree must satisfy 1 <= {ell} <= {k - 1}")
    target = list(omega.vector(k))
    out = []
    for i in range(ring.dims[ell]):
        c = ring.basis_element(ell, i)
        system = mult_matrix(ring, c, k - ell)
        if not system:
            continue
        x = solve(system, target)
        if x is not None:
            out.append((c, ring.element(k - ell, x)))
    return out
