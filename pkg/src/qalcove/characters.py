"""Graded characters from both models, a multiplicity oracle, and the verdict.

The two model routes (folding heights over admissible subsets, degrees over
path crystals) produce the same graded character; the oracle route computes
irreducible characters by the multiplicity recursion on dominant weights and
shares no code with the model enumerations.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import alcove_model, qls_model
from .alcove_model import LambdaChain, lex_chain
from .lie_data import InputError, InternalError, RootDatum, Weight

Key = tuple[tuple[int, ...], int]


class GradedCharacter:
    """Finitely supported integer combination of monomials q^n x^weight."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict[Key, int] | None = None):
        self.rank = rank
        self.terms: dict[Key, int] = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, rank: int) -> GradedCharacter:
        return cls(rank, {((0,) * rank, 0): 1})

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedCharacter) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, weight: Weight, q: int = 0) -> int:
        return self.terms.get((weight.coords, q), 0)

    def __add__(self, other: GradedCharacter) -> GradedCharacter:
        out = Counter(self.terms)
        out.update(other.terms)
        return GradedCharacter(self.rank, out)

    def __sub__(self, other: GradedCharacter) -> GradedCharacter:
        out = Counter(self.terms)
        out.subtract(other.terms)
        return GradedCharacter(self.rank, out)

    def __mul__(self, other) -> GradedCharacter:
        if isinstance(other, int):
            return GradedCharacter(self.rank, {k: other * c for k, c in self.terms.items()})
        out: Counter = Counter()
        for (w1, q1), c1 in self.terms.items():
            for (w2, q2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(w1, w2)), q1 + q2)
                out[key] += c1 * c2
        return GradedCharacter(self.rank, out)

    __rmul__ = __mul__

    def q_layer(self, n: int) -> GradedCharacter:
        return GradedCharacter(self.rank, {(w, 0): c for (w, q), c in self.terms.items() if q == n})

    def q_exponents(self) -> tuple[int, ...]:
        return tuple(sorted({q for _, q in self.terms}))

    def specialize_q_one(self) -> GradedCharacter:
        out: Counter = Counter()
        for (w, _), c in self.terms.items():
            out[(w, 0)] += c
        return GradedCharacter(self.rank, out)

    def is_symmetric(self, datum: RootDatum) -> bool:
        for s in datum.weyl.simple:
            image = {
                (s.act_weight(Weight(w)).coords, q): c for (w, q), c in self.terms.items()
            }
            if image != self.terms:
                return False
        return True

    def _ordered(self) -> list[tuple[Key, int]]:
        return sorted(self.terms.items(), key=lambda t: (t[0][1], tuple(-x for x in t[0][0])))

    def to_json_list(self) -> list[dict]:
        return [
            {"weight": list(w), "q": q, "coeff": c} for (w, q), c in self._ordered()
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, q), c in self._ordered():
            factors = []
            if c != 1:
                factors.append(str(c))
            if q == 1:
                factors.append("q")
            elif q > 1:
                factors.append(f"q^{q}")
            factors.append("x^(" + ", ".join(str(x) for x in w) + ")")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def orbit_line(self, datum: RootDatum) -> str:
        """One-line form grouping each Weyl orbit into a single symbol."""
        grouped: dict[tuple[int, tuple[int, ...]], int] = {}
        for (w, q), c in self.terms.items():
            rep = dominant_representative(datum, Weight(w)).coords
            key = (q, rep)
            if key in grouped and grouped[key] != c:
                raise InputError("character is not constant on a Weyl orbit")
            grouped[key] = c
        for (q, rep), c in grouped.items():
            for w in datum.weyl.elements:
                if self.terms.get((w.act_weight(Weight(rep)).coords, q), 0) != c:
                    raise InputError("character is not constant on a Weyl orbit")
        parts = []
        for (q, rep), c in sorted(grouped.items(), key=lambda t: (t[0][0], tuple(-x for x in t[0][1]))):
            factors = []
            if c != 1:
                factors.append(str(c))
            if q == 1:
                factors.append("q")
            elif q > 1:
                factors.append(f"q^{q}")
            factors.append("m(" + ", ".join(str(x) for x in rep) + ")")
            parts.append("*".join(factors))
        return " + ".join(parts) if parts else "0"


# ------------------------------------------------------------- model routes


def character_from_alcove(chain: LambdaChain, jobs: int = 1) -> GradedCharacter:
    """Sum of q^height x^weight over all admissible subsets of the chain."""
    rank = chain.datum.rank
    if jobs <= 1 or len(chain) == 0:
        terms: Counter = Counter()
        for A in alcove_model.enumerate_admissible(chain):
            terms[(A.weight.coords, A.height)] += 1
        return GradedCharacter(rank, terms)

    def partial(first: int) -> Counter:
        out: Counter = Counter()
        for A in alcove_model.enumerate_admissible(chain, first_position=first):
            out[(A.weight.coords, A.height)] += 1
        return out

    merged: Counter = Counter()
    merged[(chain.lam.coords, 0)] += 1  # the empty subset keeps weight lam
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(partial, range(1, len(chain) + 1)):
            merged.update(part)
    return GradedCharacter(rank, merged)


def character_from_qls(datum: RootDatum, lam: Weight) -> GradedCharacter:
    """Sum of q^(-deg) x^weight over the path crystal of shape lam."""
    graph = qls_model.build_crystal(datum, lam)
    terms: Counter = Counter()
    for eta in graph.vertices:
        terms[(eta.weight.coords, -qls_model.deg(eta))] += 1
    return GradedCharacter(datum.rank, terms)


# ----------------------------------------------------------- oracle route


def _root_coords(datum: RootDatum, wt: Weight) -> tuple[Fraction, ...]:
    """Coordinates of a weight in the simple-root basis (exact)."""
    n = datum.rank
    rows = [
        [Fraction(datum.cartan[i][j]) for j in range(n)] + [Fraction(wt.coords[i])]
        for i in range(n)
    ]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        head = rows[col][col]
        rows[col] = [x / head for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def _inner(datum: RootDatum, wt: Weight, root_coords) -> Fraction:
    """Invariant pairing of a weight with an element given in root coordinates."""
    d = datum.symmetrizers
    return sum(
        (Fraction(d[j]) * wt.coords[j] * Fraction(root_coords[j]) for j in range(datum.rank)),
        Fraction(0),
    )


def _norm(datum: RootDatum, wt: Weight) -> Fraction:
    return _inner(datum, wt, _root_coords(datum, wt))


def dominant_representative(datum: RootDatum, wt: Weight) -> Weight:
    current = wt
    while True:
        for i in range(datum.rank):
            if current.coords[i] < 0:
                current = datum.weyl.simple[i].act_weight(current)
                break
        else:
            return current


def _dominant_multiplicities(datum: RootDatum, lam: Weight) -> dict[Weight, tuple[int, tuple[int, ...]]]:
    """Multiplicity and depth vector of every dominant weight of the module."""
    if not datum.is_dominant(lam):
        raise InputError(f"weight {lam.coords} is not dominant")
    n = datum.rank
    w0 = datum.weyl.longest
    span = lam - w0.act_weight(lam)
    box = _root_coords(datum, span)
    if any(b.denominator != 1 or b < 0 for b in box):
        raise InternalError("weight span is not a nonnegative root combination")
    box = tuple(int(b) for b in box)
    alphas = [datum.root_as_weight(datum.simple_root_index[j]) for j in range(n)]

    # candidates: dominant weights lam - sum c_j alpha_j inside the box
    candidates: dict[Weight, tuple[int, ...]] = {}

    def descend(depth: list[int], wt: Weight, start: int) -> None:
        if datum.is_dominant(wt):
            candidates[wt] = tuple(depth)
        for j in range(start, n):
            if depth[j] < box[j]:
                depth[j] += 1
                descend(depth, wt - alphas[j], j)
                depth[j] -= 1

    descend([0] * n, lam, 0)
    rho = datum.rho
    top_norm = _norm(datum, lam + rho)
    mult: dict[Weight, int] = {}
    depths: dict[Weight, tuple[int, ...]] = {}
    positive = [
        (datum.root_as_weight(k), datum.positive_roots[k]) for k in range(len(datum.positive_roots))
    ]
    for wt in sorted(candidates, key=lambda w: sum(candidates[w])):
        depth = candidates[wt]
        if sum(depth) == 0:
            mult[wt] = 1
            depths[wt] = depth
            continue
        acc = Fraction(0)
        for alpha_wt, alpha_coords in positive:
            k = 1
            while all(d - k * a >= 0 for d, a in zip(depth, alpha_coords)):
                shifted = wt + Weight(tuple(k * x for x in alpha_wt.coords))
                m = mult.get(dominant_representative(datum, shifted), 0)
                if m:
                    acc += m * _inner(datum, shifted, alpha_coords)
                k += 1
        denominator = top_norm - _norm(datum, wt + rho)
        if denominator <= 0:
            raise InternalError("multiplicity recursion hit a nonpositive denominator")
        value = 2 * acc / denominator
        if value.denominator != 1 or value <= 0:
            raise InternalError(f"multiplicity at {wt.coords} is not a positive integer")
        mult[wt] = int(value)
        depths[wt] = depth
    return {w: (mult[w], depths[w]) for w in mult}


def weyl_character(datum: RootDatum, lam: Weight) -> GradedCharacter:
    """Character of the irreducible highest-weight module; exact and q-free."""
    terms: Counter = Counter()
    for wt, (m, _) in _dominant_multiplicities(datum, lam).items():
        for w in datum.weyl.elements:
            image = w.act_weight(wt).coords
            key = (image, 0)
            if key not in terms:
                terms[key] = m
    return GradedCharacter(datum.rank, terms)


def decompose(datum: RootDatum, character: GradedCharacter) -> list[tuple[int, tuple[int, ...], int]]:
    """Greedy expansion into irreducible characters per q-layer.

    Returns (q, highest weight, coefficient) triples; fails if the input is
    not a nonnegative integer combination.
    """
    out: list[tuple[int, tuple[int, ...], int]] = []
    for q in character.q_exponents():
        layer = character.q_layer(q)
        while layer:
            top = max(
                layer.terms,
                key=lambda key: (sum(_root_coords(datum, Weight(key[0]))), key[0]),
            )
            coords = Weight(top[0])
            coeff = layer.terms[top]
            if not datum.is_dominant(coords) or coeff < 0:
                raise InputError(
                    f"layer q^{q} is not a nonnegative combination of irreducible characters"
                )
            layer = layer - weyl_character(datum, coords) * coeff
            if any(c < 0 for c in layer.terms.values()):
                raise InputError(
                    f"layer q^{q} is not a nonnegative combination of irreducible characters"
                )
            out.append((q, coords.coords, coeff))
    return out


def format_decomposition(parts) -> str:
    chunks = []
    for q, coords, coeff in parts:
        factors = []
        if coeff != 1:
            factors.append(str(coeff))
        if q == 1:
            factors.append("q")
        elif q > 1:
            factors.append(f"q^{q}")
        factors.append("chi(" + ", ".join(str(x) for x in coords) + ")")
        chunks.append("*".join(factors))
    return " + ".join(chunks) if chunks else "0"


# ------------------------------------------------------------------ verdict


def verify_p_equals_x(datum: RootDatum, lam: Weight, chain: LambdaChain | None = None) -> dict:
    """Compare the two model characters and cross-check them on four axes."""
    if chain is None:
        chain = lex_chain(datum, lam)
    from_alcove = character_from_alcove(chain)
    from_paths = character_from_qls(datum, lam)
    mismatches: list[dict] = []
    keys = set(from_alcove.terms) | set(from_paths.terms)
    for w, q in sorted(keys):
        a, b = from_alcove.terms.get((w, q), 0), from_paths.terms.get((w, q), 0)
        if a != b:
            mismatches.append({"weight": list(w), "q": q, "alcove": a, "qls": b})
    models_agree = not mismatches

    oracle = weyl_character(datum, lam)
    classical = from_paths.q_layer(0)
    classical_ok = classical == oracle
    if not classical_ok:
        for w, q in sorted(set(classical.terms) | set(oracle.terms)):
            a, b = classical.terms.get((w, q), 0), oracle.terms.get((w, q), 0)
            if a != b:
                mismatches.append({"weight": list(w), "q": 0, "classical": a, "oracle": b})

    symmetric = from_paths.is_symmetric(datum)

    product = GradedCharacter.one(datum.rank)
    for i, c in enumerate(lam.coords, start=1):
        if c:
            factor = character_from_qls(datum, datum.fundamental_weight(i)).specialize_q_one()
            for _ in range(c):
                product = product * factor
    factorization_ok = from_paths.specialize_q_one() == product
    if not factorization_ok:
        mismatches.append({"kind": "tensor_factorization"})

    ok = models_agree and classical_ok and symmetric and factorization_ok
    report = {
        "lambda": list(lam.coords),
        "checks": {
            "models_agree": models_agree,
            "classical_layer": classical_ok,
            "symmetric": symmetric,
            "tensor_factorization": factorization_ok,
        },
        "pass": ok,
        "mismatches": mismatches,
        "character": from_paths.to_json_list(),
        "decomposition": format_decomposition(decompose(datum, from_paths)) if ok else None,
    }
    return report
