"""Shared test helpers: independent oracles and the ring catalog."""

from __future__ import annotations

import random
from fractions import Fraction

from qrob import ExtElement


def e(n: int, *axes) -> ExtElement:
    return ExtElement.basis(n, axes)


def permutation_sign(perm: list[int]) -> int:
    """Parity via cycle decomposition (independent of inversion counting)."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cursor = start
        while not seen[cursor]:
            seen[cursor] = True
            cursor = perm[cursor]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge_blades_oracle(a: tuple, b: tuple):
    """Sign and sorted axes of a blade product, or None when an axis repeats.

    Expands the concatenation into degree-1 factors and takes the sign of the
    permutation that sorts them.
    """
    concat = list(a) + list(b)
    if len(set(concat)) != len(concat):
        return None
    order = sorted(range(len(concat)), key=lambda i: concat[i])
    # perm maps target position -> source position; its sign is what moving
    # the factors into ascending order costs.
    return permutation_sign(order), tuple(sorted(concat))


def wedge_oracle(x: ExtElement, y: ExtElement) -> ExtElement:
    """Bilinear brute-force wedge built on the permutation-sign blade oracle."""
    acc: dict[tuple, Fraction] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            res = wedge_blades_oracle(a, b)
            if res is None:
                continue
            sign, axes = res
            acc[axes] = acc.get(axes, Fraction(0)) + sign * ca * cb
    return ExtElement(x.ambient_n, acc)


def convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def random_element(rng: random.Random, n: int, degree: int, terms: int = 3) -> ExtElement:
    from itertools import combinations

    basis = list(combinations(range(1, n + 1), degree))
    acc = {}
    for _ in range(terms):
        axes = rng.choice(basis)
        acc[axes] = acc.get(axes, 0) + rng.randint(-4, 4)
    return ExtElement(n, {a: c for a, c in acc.items() if c})


# (manifold text, omega text, n) for every catalog entry used by the
# soundness-exclusion and property suites.
CATALOG = (
    [(f"torus({n})", "vol(1)", n) for n in range(2, 6)]
    + [(f"surface({g}) * cp(2)", "vol(1)^sym(2)", 4) for g in range(1, 6)]
    + [(f"connsum(s2xs2,{v}) * cp(2)", "vol(1)^sym(2)", 6) for v in range(1, 11)]
    + [("cp(2)", "sym(1)^sym(1)", 4), ("cp(3)", "sym(1)^sym(1)^sym(1)", 6)]
)
