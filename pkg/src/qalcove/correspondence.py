"""Bijection between admissible subsets and quantum LS paths.

The forgetful map reads the relative heights of an admissible subset's
positions, groups them into break values, and emits a path whose directions
are coset projections of the prefix products of the subset's reflections.
The inverse rebuilds the subset from tilted minima and label-increasing
paths in the quantum Bruhat graph.  On top of the two maps sit machine
checks of the operator intertwining, the energy identity, and the crystal
isomorphism with a tensor product of fundamental-weight crystals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import alcove_model, qls_model
from .alcove_model import AdmissibleSubset, LambdaChain, lex_chain
from .lie_data import InputError, InternalError, RootDatum, Weight, WeylElement
from .qls_model import QLSPath, qls_path
from .quantum_bruhat import reflection_ordering, tilted_minimum

_ordering_cache: dict = {}


def _chain_ordering(chain: LambdaChain) -> tuple[int, ...]:
    key = (chain.datum, chain.lam, chain.entries)
    if key not in _ordering_cache:
        J = chain.datum.stabilizer(chain.lam)
        _ordering_cache[key] = reflection_ordering(chain.datum, J, chain)
    return _ordering_cache[key]


def _require_lex(chain: LambdaChain) -> None:
    if not chain.lex:
        raise InputError("the bijection is defined over lex chains only")


@dataclass(frozen=True)
class CorrespondenceRecord:
    """An admissible subset with both of its path images and the grouping data.

    breaks holds 0 = b_0 < b_1 < ... < b_p and elements the Weyl group
    elements w_0, ..., w_p read off at the group boundaries.
    """

    subset: AdmissibleSubset
    pi: QLSPath
    pi_star: QLSPath
    breaks: tuple[Fraction, ...]
    elements: tuple[WeylElement, ...]


def forgetful(A: AdmissibleSubset) -> CorrespondenceRecord:
    """Both path images of an admissible subset over a lex chain."""
    chain = A.chain
    _require_lex(chain)
    datum = chain.datum
    lam = chain.lam
    weyl = datum.weyl
    w0 = weyl.longest
    J = datum.stabilizer(lam)
    om_J = frozenset(weyl.omega[i - 1] for i in J)

    heights = [
        Fraction(chain.entries[p - 1].level, datum.pairing_index(chain.entries[p - 1].root, lam))
        for p in A.positions
    ]
    if any(a > b for a, b in zip(heights, heights[1:])):
        raise InternalError("relative heights must be weakly increasing on a lex chain")
    breaks = sorted({Fraction(0)} | set(heights))
    # w_k is the prefix product after the last position at relative height b_k
    elements = tuple(
        A.path[sum(1 for t in heights if t <= b)] for b in breaks
    )

    pi_dirs = tuple(weyl.min_coset_rep(w * w0, om_J) for w in elements)
    pi_breaks = tuple(breaks) + (Fraction(1),)
    star_dirs = tuple(weyl.min_coset_rep(w, J) for w in reversed(elements))
    star_breaks = (Fraction(0),) + tuple(1 - b for b in reversed(breaks[1:])) + (Fraction(1),)
    try:
        pi = qls_path(datum, -w0.act_weight(lam), pi_dirs, pi_breaks)
        pi_star = qls_path(datum, lam, star_dirs, star_breaks)
    except InputError as exc:
        raise InternalError(f"forgetful image failed validation: {exc}") from exc
    if pi_star != qls_model.dual(pi):
        raise InternalError("the two path images are not dual to each other")
    if pi_star.weight != A.weight:
        raise InternalError("forgetful map changed the weight")
    return CorrespondenceRecord(A, pi, pi_star, tuple(breaks), elements)


def inverse(eta: QLSPath, chain: LambdaChain | None = None) -> AdmissibleSubset:
    """The admissible subset mapping to a given path of shape -w0.lam."""
    datum = eta.datum
    weyl = datum.weyl
    w0 = weyl.longest
    lam = -w0.act_weight(eta.lam)
    if chain is None:
        chain = lex_chain(datum, lam)
    _require_lex(chain)
    if chain.lam != lam:
        raise InputError(
            f"chain weight {chain.lam.coords} does not match the path shape"
        )
    J = datum.stabilizer(lam)
    order = _chain_ordering(chain)
    graph = qls_model._parabolic_graph(datum, frozenset())
    position_of = {
        (e.root, e.level): n for n, e in enumerate(chain.entries, start=1)
    }

    sigmas = [weyl.min_coset_rep(x * w0, J) for x in eta.directions]
    positions: list[int] = []
    current = weyl.identity
    for sigma, b in zip(sigmas, eta.breaks):
        current, path = tilted_minimum(graph, current, sigma, J, order)
        for edge in path:
            level = b * datum.pairing_index(edge.label, lam)
            if level.denominator != 1:
                raise InternalError(
                    f"edge label pairs non-integrally at relative height {b}"
                )
            positions.append(position_of[(edge.label, int(level))])
    if any(a >= b for a, b in zip(positions, positions[1:])):
        raise InternalError("reconstructed positions are not increasing")
    return AdmissibleSubset(chain, tuple(positions))


# ----------------------------------------------------------- machine checks


def verify_intertwining(datum: RootDatum, lam: Weight, chain: LambdaChain | None = None) -> dict:
    """Check that lowering on subsets matches raising on their path images.

    A lowering arrow exists at a label exactly when the path image can be
    raised more often than the label-zero threshold; the images then agree.
    """
    if chain is None:
        chain = lex_chain(datum, lam)
    _require_lex(chain)
    subsets = alcove_model.enumerate_admissible(chain)
    violations: list[dict] = []
    checks = 0
    for A in subsets:
        pi = forgetful(A).pi
        for p in range(datum.rank + 1):
            checks += 1
            lowered = alcove_model.f_operator(A, p)
            threshold = 1 if p == 0 else 0
            if (lowered is not None) != (qls_model.epsilon(pi, p) > threshold):
                violations.append(
                    {"positions": list(A.positions), "label": p, "kind": "definedness"}
                )
                continue
            if lowered is not None and qls_model.e_operator(pi, p) != forgetful(lowered).pi:
                violations.append(
                    {"positions": list(A.positions), "label": p, "kind": "image"}
                )
    return {
        "lambda": list(lam.coords),
        "counts": {"subsets": len(subsets), "checks": checks},
        "violations": violations,
    }


def verify_energy(datum: RootDatum, lam: Weight, chain: LambdaChain | None = None) -> dict:
    """Check the four independent routes to the energy of each subset.

    height(A) must equal the break-weighted sum of graph distances along the
    path image, minus the degree of that image, and minus the degree of the
    reversed dual image.
    """
    if chain is None:
        chain = lex_chain(datum, lam)
    _require_lex(chain)
    weyl = datum.weyl
    w0 = weyl.longest
    J = datum.stabilizer(lam)
    parabolic = qls_model._parabolic_graph(datum, J)
    subsets = alcove_model.enumerate_admissible(chain)
    violations: list[dict] = []
    for A in subsets:
        rec = forgetful(A)
        sigmas = [weyl.min_coset_rep(x * w0, J) for x in rec.pi.directions]
        total = sum(
            (
                (1 - b) * parabolic.shortest_path_weight(prev, nxt, lam)
                for prev, nxt, b in zip(sigmas, sigmas[1:], rec.pi.breaks[1:])
            ),
            Fraction(0),
        )
        reversed_dual = qls_model.lusztig_S(rec.pi_star)
        values = {
            "height": A.height,
            "graph_sum": total,
            "deg_pi": -qls_model.deg(rec.pi),
            "deg_reversed_dual": -qls_model.deg(reversed_dual),
        }
        if reversed_dual != qls_model.omega(rec.pi):
            violations.append({"positions": list(A.positions), "kind": "reversal"})
        if len({Fraction(v) for v in values.values()}) != 1:
            violations.append(
                {"positions": list(A.positions), "kind": "energy", "values": {k: str(v) for k, v in values.items()}}
            )
    return {
        "lambda": list(lam.coords),
        "counts": {"subsets": len(subsets), "checks": len(subsets)},
        "violations": violations,
    }


def build_isomorphism_to_tensor(datum: RootDatum, lam: Weight) -> dict:
    """Vertex bijection from the crystal of lam onto the tensor product of
    one fundamental-weight crystal per unit of lam, anchored at the straight
    dominant paths and propagated along arrows."""
    if not datum.is_dominant(lam):
        raise InputError(f"weight {lam.coords} is not dominant")
    source = qls_model.build_crystal(datum, lam)
    factors = []
    for i, c in enumerate(lam.coords, start=1):
        if c:
            factor = qls_model.build_crystal(datum, datum.fundamental_weight(i))
            factors.extend([factor] * c)
    if not factors:
        raise InputError("the zero weight has no fundamental factors")
    if len(factors) == 1:
        return {v: v for v in source.vertices}
    target = qls_model.tensor(*factors)

    mapping = {source.distinguished: target.distinguished}
    queue = [source.distinguished]
    while queue:
        v = queue.pop()
        for table, image_table in (
            (source.e_arrows, target.e_arrows),
            (source.f_arrows, target.f_arrows),
        ):
            for j in source.labels:
                w = table.get((v, j))
                image = image_table.get((mapping[v], j))
                if (w is None) != (image is None):
                    raise InternalError(f"arrow mismatch at label {j}")
                if w is None:
                    continue
                if w in mapping:
                    if mapping[w] != image:
                        raise InternalError(f"propagation conflict at label {j}")
                else:
                    mapping[w] = image
                    queue.append(w)
    if len(mapping) != len(source.vertices):
        raise InternalError("isomorphism is not total")
    if len(set(mapping.values())) != len(target.vertices):
        raise InternalError("isomorphism is not onto")
    for v, image in mapping.items():
        if source.weights[v] != target.weights[image]:
            raise InternalError("isomorphism moved a weight")
    return mapping
