"""Query pipeline and re-verifiable JSON documents.

`run_query` wires build -> form-class evaluation -> ideal membership ->
obstruction search -> witness search and reports one of OBSTRUCTED, WITNESS,
or UNKNOWN together with a preconditions report. Every emitted document is
deterministic and re-checkable via `verify_document`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dsl import parse_manifold, parse_omega
from .errors import QrobError, VerificationFailure
from .homsearch import (
    EnumBudget,
    HomWitness,
    enumerate_hom_detailed,
    verify_hom,
    witness_template,
)
from .linalg import Matrix, fraction_from_str, fraction_to_str, rank
from .manifolds import ManifoldExpr, build_with_classes
from .obstruct import (
    Certificate,
    SubmanifoldReport,
    apply_linear,
    check_ring_map,
    search_obstruction,
)
from .ring import GradedRing, RingElement, in_kunneth_ideal, multiply

VERDICT_FORMAT = "qrob.verdict/1"
CERTIFICATE_FORMAT = "qrob.certificate/1"
WITNESS_FORMAT = "qrob.witness/1"
RING_FORMAT = "qrob.ring/1"

WITNESS = "WITNESS"
OBSTRUCTED = "OBSTRUCTED"
UNKNOWN = "UNKNOWN"

EXIT_BY_VERDICT = {WITNESS: 0, OBSTRUCTED: 1, UNKNOWN: 2}


@dataclass(frozen=True)
class Query:
    manifold: str
    omega: str
    n: int


@dataclass
class QueryResult:
    query: Query
    expr: ManifoldExpr
    ring: GradedRing
    omega: RingElement
    verdict: str
    preconditions: dict
    certificate: Certificate | None = None
    witness: HomWitness | None = None
    search_log: dict | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_BY_VERDICT[self.verdict]


def run_query(
    query: Query,
    budget: EnumBudget = EnumBudget(),
    jobs: int | None = None,
) -> QueryResult:
    expr = parse_manifold(query.manifold)
    ring, factors = build_with_classes(expr)
    omega = parse_omega(query.omega, ring, factors)
    if query.n < 2:
        raise QrobError(f"target dimension must be >= 2, got {query.n}")
    if query.n > ring.top_degree:
        raise QrobError(
            f"target dimension {query.n} exceeds the top degree {ring.top_degree}"
        )
    nonzero = not omega.is_zero()
    if nonzero and (not omega.is_homogeneous() or omega.degree() != query.n):
        raise QrobError(
            f"omega must be homogeneous of degree {query.n}; got degrees "
            f"{sorted(omega.degrees())}"
        )
    in_ideal = nonzero and in_kunneth_ideal(ring, omega)
    preconditions = {"omega_nonzero": nonzero, "omega_in_kunneth_ideal": in_ideal}
    if not (nonzero and in_ideal):
        return QueryResult(
            query,
            expr,
            ring,
            omega,
            UNKNOWN,
            preconditions,
            search_log={
                "stopped": "precondition",
                "detail": "the necessary-condition hypotheses fail; no search run",
            },
        )
    certificate = search_obstruction(ring, omega, query.n, jobs=jobs)
    if certificate is not None:
        return QueryResult(
            query, expr, ring, omega, OBSTRUCTED, preconditions,
            certificate=certificate,
        )
    witness = witness_template(expr, omega, query.n)
    if witness is not None:
        return QueryResult(
            query, expr, ring, omega, WITNESS, preconditions,
            witness=witness, search_log={"witness_method": "template"},
        )
    outcome = enumerate_hom_detailed(ring, omega, query.n, budget)
    if outcome.witness is not None:
        return QueryResult(
            query, expr, ring, omega, WITNESS, preconditions,
            witness=outcome.witness,
            search_log={"witness_method": "enumeration", "nodes": outcome.nodes},
        )
    return QueryResult(
        query, expr, ring, omega, UNKNOWN, preconditions,
        search_log={
            "obstruction": "no certificate found",
            "template": "no verified template",
            "enumeration": {
                "nodes": outcome.nodes,
                "max_nodes": budget.max_nodes,
                "space_exhausted": outcome.space_exhausted,
            },
        },
    )


# -- JSON documents -----------------------------------------------------------


def element_to_obj(x: RingElement) -> dict:
    return x.to_obj()


def element_from_obj(ring: GradedRing, obj: dict) -> RingElement:
    return RingElement.from_obj(ring, obj)


def certificate_to_obj(cert: Certificate, ring: GradedRing) -> dict:
    classes = {}
    products = []
    for role, value in cert.classes.items():
        if isinstance(value, RingElement):
            classes[role] = element_to_obj(value)
        elif isinstance(value, list):
            classes[role] = [element_to_obj(v) for v in value]
        else:
            classes[role] = value
    if cert.kind == "H1Annihilator":
        factor = cert.classes["factor"]
        for i, a in enumerate(cert.classes["annihilators"]):
            products.append(
                {
                    "left": "factor",
                    "right": f"annihilators[{i}]",
                    "product": element_to_obj(multiply(factor, a)),
                }
            )
        for i, a in enumerate(cert.classes["annihilators"]):
            for j, b in enumerate(cert.classes["duals"]):
                products.append(
                    {
                        "left": f"annihilators[{i}]",
                        "right": f"duals[{j}]",
                        "product": element_to_obj(multiply(a, b)),
                    }
                )
    elif cert.kind == "DualPair":
        for i, a in enumerate(cert.classes["left"]):
            for j, b in enumerate(cert.classes["right"]):
                products.append(
                    {
                        "left": f"left[{i}]",
                        "right": f"right[{j}]",
                        "product": element_to_obj(multiply(a, b)),
                    }
                )
    obj = {
        "format": CERTIFICATE_FORMAT,
        "kind": cert.kind,
        "ring_hash": cert.ring_hash,
        "n": cert.n,
        "classes": classes,
        "products_table": products,
        "inequality": cert.inequality.to_obj(),
        "conclusion": cert.conclusion,
    }
    if cert.degree is not None:
        obj["degree"] = cert.degree
    if cert.k_prime is not None:
        obj["k_prime"] = cert.k_prime
    if cert.omega is not None:
        obj["omega"] = element_to_obj(cert.omega)
    return obj


def _fail(message: str) -> None:
    raise VerificationFailure(message)


def verify_certificate_obj(
    obj: dict, ring: GradedRing, subring: GradedRing | None = None,
    iota_star: list[Matrix] | None = None,
) -> None:
    """Recompute a certificate's products and inequality; raise on mismatch."""
    kind = obj.get("kind")
    if obj.get("ring_hash") != ring.hash_hex():
        _fail("certificate ring hash does not match the ring")
    ineq = obj.get("inequality", {})
    lhs, rel, rhs = ineq.get("lhs"), ineq.get("rel"), ineq.get("rhs")
    if rel not in (">", ">="):
        _fail(f"unknown inequality relation {rel!r}")
    n = int(obj["n"])
    omega = (
        element_from_obj(ring, obj["omega"]) if obj.get("omega") is not None else None
    )

    if kind == "PrywesBound":
        k = int(obj["degree"])
        bound = math.comb(n, k) if k <= n else 0
        if ring.dims[k] != lhs:
            _fail(f"dim H^{k} is {ring.dims[k]}, certificate says {lhs}")
        if bound != rhs:
            _fail(f"C({n},{k}) is {bound}, certificate says {rhs}")
        if not (lhs > rhs):
            _fail("inequality does not hold")
        if omega is not None:
            if omega.is_zero() or omega.degree() != n or n != ring.top_degree:
                _fail("omega does not justify the dimension-bound obstruction")
        return

    if kind == "H1Annihilator":
        factor = element_from_obj(ring, obj["classes"]["factor"])
        cofactor = element_from_obj(ring, obj["classes"]["cofactor"])
        anns = [element_from_obj(ring, o) for o in obj["classes"]["annihilators"]]
        duals = [element_from_obj(ring, o) for o in obj["classes"]["duals"]]
        prod = multiply(factor, cofactor)
        if prod.is_zero():
            _fail("factor * cofactor is zero")
        if omega is not None and prod != omega:
            _fail("factor * cofactor does not equal omega")
        for i, a in enumerate(anns):
            if a.is_zero() or a.degree() != 1:
                _fail(f"annihilators[{i}] is not a degree-1 class")
            if not multiply(factor, a).is_zero():
                _fail(f"product of factor and annihilators[{i}] is nonzero")
        for i, a in enumerate(anns):
            for j, b in enumerate(duals):
                expected = factor if i == j else ring.zero()
                if multiply(a, b) != expected:
                    _fail(
                        f"product of annihilators[{i}] and duals[{j}] breaks the "
                        "Kronecker pattern"
                    )
        if len(anns) != lhs or len(duals) != lhs:
            _fail("family size does not match the inequality")
        if rhs != n or not (lhs >= rhs):
            _fail("inequality does not hold")
        _check_products_table(obj, ring, {"factor": factor,
                                          "annihilators": anns, "duals": duals})
        return

    if kind == "DualPair":
        target = element_from_obj(ring, obj["classes"]["target"])
        left = [element_from_obj(ring, o) for o in obj["classes"]["left"]]
        right = [element_from_obj(ring, o) for o in obj["classes"]["right"]]
        if target.is_zero():
            _fail("target class is zero")
        if omega is not None and "cofactor" in obj["classes"]:
            cofactor = element_from_obj(ring, obj["classes"]["cofactor"])
            if multiply(target, cofactor) != omega:
                _fail("target * cofactor does not equal omega")
        kp = int(obj["k_prime"])
        for i, a in enumerate(left):
            if a.is_zero() or a.degree() != kp:
                _fail(f"left[{i}] does not have degree {kp}")
        for i, a in enumerate(left):
            for j, b in enumerate(right):
                expected = target if i == j else ring.zero()
                if multiply(a, b) != expected:
                    _fail(
                        f"product of left[{i}] and right[{j}] breaks the "
                        "Kronecker pattern"
                    )
        bound = math.comb(n, kp) if kp <= n else 0
        if len(left) != lhs or len(right) != lhs or bound != rhs:
            _fail("inequality data does not match the families")
        if not (lhs > rhs):
            _fail("inequality does not hold")
        _check_products_table(obj, ring, {"left": left, "right": right})
        return

    if kind == "SubmanifoldBound":
        if subring is None or iota_star is None:
            _fail("submanifold certificate needs the subring and restriction map")
        if obj["classes"].get("subring_hash") != subring.hash_hex():
            _fail("subring hash does not match")
        check_ring_map(ring, subring, iota_star)
        if omega is None or apply_linear(iota_star, omega, subring).is_zero():
            _fail("omega does not restrict nontrivially")
        k = int(obj["degree"])
        image_dim = rank(iota_star[k]) if iota_star[k] else 0
        comp = n - k
        comp_dim = rank(iota_star[comp]) if iota_star[comp] else 0
        if comp_dim != subring.dims[comp]:
            _fail(f"restriction is not surjective in degree {comp}")
        if image_dim != lhs or math.comb(n, k) != rhs or not (lhs > rhs):
            _fail("inequality does not hold for the restricted image")
        return

    _fail(f"unknown certificate kind {kind!r}")


def _check_products_table(obj: dict, ring: GradedRing, elements: dict) -> None:
    for entry in obj.get("products_table", []):
        left = _resolve_role(entry["left"], elements)
        right = _resolve_role(entry["right"], elements)
        if element_to_obj(multiply(left, right)) != entry["product"]:
            _fail(
                f"recorded product of {entry['left']} and {entry['right']} does "
                "not recompute"
            )


def _resolve_role(ref: str, elements: dict):
    if "[" in ref:
        role, idx = ref[:-1].split("[")
        return elements[role][int(idx)]
    return elements[ref]


def witness_to_obj(witness: HomWitness, omega: RingElement | None = None) -> dict:
    obj = witness.to_obj()
    obj["format"] = WITNESS_FORMAT
    if omega is not None:
        obj["omega"] = element_to_obj(omega)
    return obj


def verify_witness_obj(
    obj: dict, ring: GradedRing, omega: RingElement | None = None
) -> None:
    if obj.get("ring_hash") != ring.hash_hex():
        _fail("witness ring hash does not match the ring")
    witness = HomWitness.from_obj(ring, obj)
    recorded = (
        element_from_obj(ring, obj["omega"]) if obj.get("omega") is not None else None
    )
    if omega is None:
        omega = recorded
    elif recorded is not None and recorded != omega:
        _fail("recorded omega does not match the query omega")
    if omega is None:
        _fail("no omega available to check nonvanishing against")
    if not verify_hom(witness, omega):
        _fail("witness fails multiplicativity or maps omega to zero")


def result_to_obj(result: QueryResult) -> dict:
    obj = {
        "format": VERDICT_FORMAT,
        "query": {
            "manifold": result.query.manifold,
            "omega": result.query.omega,
            "n": result.query.n,
        },
        "ring_hash": result.ring.hash_hex(),
        "ring": result.ring.to_obj(),
        "omega": element_to_obj(result.omega),
        "preconditions": result.preconditions,
        "verdict": result.verdict,
        "certificate": (
            certificate_to_obj(result.certificate, result.ring)
            if result.certificate
            else None
        ),
        "witness": (
            witness_to_obj(result.witness, result.omega) if result.witness else None
        ),
        "search_log": result.search_log,
    }
    return obj


def document_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def verify_document(
    obj: dict,
    ring: GradedRing | None = None,
    subring: GradedRing | None = None,
) -> str:
    """Re-check an emitted document; returns a summary line, raises on failure."""
    fmt = obj.get("format")
    if fmt == VERDICT_FORMAT:
        embedded = GradedRing.from_obj(obj["ring"])
        if embedded.hash_hex() != obj.get("ring_hash"):
            _fail("embedded ring does not match the recorded hash")
        rebuilt, factors = build_with_classes(parse_manifold(obj["query"]["manifold"]))
        if rebuilt.hash_hex() != embedded.hash_hex():
            _fail("query does not rebuild to the embedded ring")
        omega = parse_omega(obj["query"]["omega"], rebuilt, factors)
        if element_to_obj(omega) != obj["omega"]:
            _fail("query omega does not recompute to the recorded class")
        n = int(obj["query"]["n"])
        nonzero = not omega.is_zero()
        if nonzero and (not omega.is_homogeneous() or omega.degree() != n):
            _fail("query omega does not have the query degree")
        in_ideal = nonzero and in_kunneth_ideal(rebuilt, omega)
        if obj["preconditions"] != {
            "omega_nonzero": nonzero,
            "omega_in_kunneth_ideal": in_ideal,
        }:
            _fail("preconditions report does not recompute")
        verdict = obj.get("verdict")
        if verdict == OBSTRUCTED:
            if not obj.get("certificate"):
                _fail("obstructed verdict without a certificate")
            if int(obj["certificate"]["n"]) != n:
                _fail("certificate target dimension does not match the query")
            verify_certificate_obj(obj["certificate"], rebuilt)
            return f"certificate re-verified ({obj['certificate']['kind']})"
        if verdict == WITNESS:
            if not obj.get("witness"):
                _fail("witness verdict without a witness")
            if int(obj["witness"]["ambient_n"]) != n:
                _fail("witness ambient dimension does not match the query")
            verify_witness_obj(obj["witness"], rebuilt, omega)
            return "witness re-verified"
        if verdict == UNKNOWN:
            if obj.get("certificate") is not None or obj.get("witness") is not None:
                _fail("UNKNOWN verdict must not carry a certificate or witness")
            return "preconditions re-verified (verdict UNKNOWN carries no payload)"
        _fail(f"unknown verdict {verdict!r}")
    if fmt == CERTIFICATE_FORMAT:
        ring = _ring_for(obj, ring)
        sub = subring
        iota = None
        if obj.get("kind") == "SubmanifoldBound":
            if sub is None and obj.get("subring") is not None:
                sub = GradedRing.from_obj(obj["subring"])
            if obj.get("iota_star") is not None:
                iota = [
                    [[fraction_from_str(c) for c in row] for row in mat]
                    for mat in obj["iota_star"]
                ]
        verify_certificate_obj(obj, ring, subring=sub, iota_star=iota)
        return f"certificate re-verified ({obj.get('kind')})"
    if fmt == WITNESS_FORMAT:
        ring = _ring_for(obj, ring)
        verify_witness_obj(obj, ring)
        return "witness re-verified"
    if fmt == RING_FORMAT:
        embedded = GradedRing.from_obj(obj["ring"])
        if embedded.hash_hex() != obj.get("ring_hash"):
            _fail("ring does not match the recorded hash")
        return "ring re-validated"
    _fail(f"unrecognized document format {fmt!r}")
    return ""  # unreachable


def _ring_for(obj: dict, ring: GradedRing | None) -> GradedRing:
    if ring is not None:
        return ring
    if obj.get("ring") is not None:
        return GradedRing.from_obj(obj["ring"])
    _fail("no ring available: pass --ring or embed the ring in the document")
    raise AssertionError  # unreachable


def ring_document(ring: GradedRing) -> dict:
    return {
        "format": RING_FORMAT,
        "ring_hash": ring.hash_hex(),
        "ring": ring.to_obj(),
    }


def kunneth_ideal_basis_doc(
    ring: GradedRing, k: int, basis: list[RingElement]
) -> dict:
    return {
        "format": "qrob.kunneth-ideal/1",
        "ring_hash": ring.hash_hex(),
        "degree": k,
        "dim": len(basis),
        "basis": [element_to_obj(b) for b in basis],
    }


def submanifold_report_obj(
    report: SubmanifoldReport,
    ring_n: GradedRing,
    ring_m: GradedRing,
    iota_star: list[Matrix],
    omega: RingElement,
) -> dict:
    cert_obj = None
    if report.certificate is not None:
        cert_obj = certificate_to_obj(report.certificate, ring_n)
        cert_obj["subring"] = ring_m.to_obj()
        cert_obj["iota_star"] = [
            [[fraction_to_str(c) for c in row] for row in mat] for mat in iota_star
        ]
    return {
        "format": "qrob.submanifold-report/1",
        "ring_hash": ring_n.hash_hex(),
        "subring_hash": ring_m.hash_hex(),
        "omega": element_to_obj(omega),
        "degrees": [
            {
                "degree": r.degree,
                "image_dim": r.image_dim,
                "bound": r.bound,
                "surjective": r.surjective,
            }
            for r in report.degrees
        ],
        "certificate": cert_obj,
    }
