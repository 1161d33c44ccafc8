"""The quantum alcove model: lex chains, admissible subsets, root operators.

A chain for a dominant weight lambda lists the hyperplanes H_{beta,-l}
(0 <= l < <beta^vee,lambda>) crossed by a reduced alcove walk from the
fundamental alcove to its translate by -lambda.  Admissible subsets of chain
positions are walks in the quantum Bruhat graph starting at the identity;
folding the chain at those positions yields the data driving the
combinatorial root operators f_p / e_p for p in the affine index set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from qalcove.lie_data import (
    InputError,
    InternalError,
    RootDatum,
    Weight,
    WeylElement,
)
from qalcove.quantum_bruhat import BRUHAT, QUANTUM


@dataclass(frozen=True)
class ChainEntry:
    root: int  # positive-root index
    level: int  # l_i, the crossing count of earlier entries with the same root


class LambdaChain:
    """Ordered hyperplane sequence for a dominant weight; immutable."""

    def __init__(
        self,
        datum: RootDatum,
        lam: Weight,
        entries: tuple[ChainEntry, ...],
        node_order: tuple[int, ...] | None,
        lex: bool,
    ):
        self.datum = datum
        self.lam = lam
        self.entries = entries
        self.node_order = node_order
        self.lex = lex
        self._pair = tuple(
            datum.pairing_index(e.root, lam) for e in entries
        )

    def __len__(self) -> int:
        return len(self.entries)

    def complementary_height(self, position: int) -> int:
        """l-tilde at a 1-based position: <beta^vee,lambda> - l."""
        return self._pair[position - 1] - self.entries[position - 1].level

    def to_json_dict(self) -> dict:
        return {
            "lambda": list(self.lam.coords),
            "node_order": list(self.node_order) if self.node_order else None,
            "lex": self.lex,
            "entries": [
                {"root": list(self.datum.positive_roots[e.root]), "level": e.level}
                for e in self.entries
            ],
        }


def lex_chain(
    datum: RootDatum, lam: Weight, node_order: tuple[int, ...] | None = None
) -> LambdaChain:
    """The lexicographic chain: hyperplanes sorted by their rational key
    (l, c_1, ..., c_r)/<beta^vee,lambda> with coroot coordinates read in
    node_order."""
    if not datum.is_dominant(lam):
        raise InputError(f"weight {lam.coords} is not dominant")
    if node_order is None:
        node_order = tuple(range(1, datum.rank + 1))
    if sorted(node_order) != list(range(1, datum.rank + 1)):
        raise InputError(f"node order {node_order} is not a permutation of 1..{datum.rank}")
    keyed = []
    for k in range(len(datum.positive_roots)):
        h = datum.pairing_index(k, lam)
        if h <= 0:
            continue
        coroot = datum.positive_coroots[k]
        for l in range(h):
            key = (Fraction(l, h),) + tuple(Fraction(coroot[i - 1], h) for i in node_order)
            keyed.append((key, ChainEntry(k, l)))
    keyed.sort(key=lambda t: t[0])
    if len({key for key, _ in keyed}) != len(keyed):
        raise InternalError("lex keys of distinct hyperplanes collide")
    return LambdaChain(datum, lam, tuple(e for _, e in keyed), node_order, lex=True)


def chain_from_roots(datum: RootDatum, lam: Weight, roots) -> LambdaChain:
    """Chain from a user-supplied root sequence; levels are crossing counts.
    Validates that the sequence is a genuine reduced alcove walk."""
    if not datum.is_dominant(lam):
        raise InputError(f"weight {lam.coords} is not dominant")
    entries = []
    seen: dict[int, int] = {}
    for r in roots:
        if isinstance(r, int):
            k = r if 0 <= r < len(datum.positive_roots) else None
        else:
            k = datum.root_index(tuple(int(x) for x in r))
        if k is None:
            raise InputError(f"{r} is not a positive root")
        entries.append(ChainEntry(k, seen.get(k, 0)))
        seen[k] = seen.get(k, 0) + 1
    for k in range(len(datum.positive_roots)):
        if seen.get(k, 0) != datum.pairing_index(k, lam):
            raise InputError(
                f"root {datum.root_name(k)} crossed {seen.get(k, 0)} times, "
                f"expected {datum.pairing_index(k, lam)}"
            )
    chain = LambdaChain(datum, lam, tuple(entries), None, lex=False)
    _validate_walk(chain)
    default = lex_chain(datum, lam)
    if chain.entries == default.entries:
        chain = LambdaChain(datum, lam, tuple(entries), default.node_order, lex=True)
    return chain


def _validate_walk(chain: LambdaChain) -> None:
    """Each crossing must be through a wall of the current alcove, and the
    walk must end at the fundamental alcove translated by -lambda."""
    datum = chain.datum
    weyl = datum.weyl
    w = weyl.identity
    v = Weight((0,) * datum.rank)
    walls = {(datum.simple_root_index[i], 0) for i in range(datum.rank)}
    walls.add((datum.theta, 1))
    for n, entry in enumerate(chain.entries, start=1):
        # pull H_{beta,-l} back through the affine map (w, v)
        g = w.inverse.act_root_index(entry.root)
        j = abs(g) - 1
        level = -entry.level - datum.pairing(datum.positive_coroots[entry.root], v)
        if g < 0:
            level = -level
        if (j, level) not in walls:
            raise InputError(f"entry {n} does not cross a wall of the current alcove")
        # each crossing reflects the alcove, so the new reflection goes on the
        # outside: (r, -l beta) . (w, v)
        refl = weyl.reflection(entry.root)
        beta_wt = datum.root_as_weight(entry.root)
        v = refl.act_weight(v) - Weight(tuple(entry.level * x for x in beta_wt.coords))
        w = refl * w
    if w != weyl.identity or v != -chain.lam:
        raise InputError("chain does not end at the alcove translated by -lambda")


@dataclass(frozen=True)
class FoldedChain:
    gammas: tuple[int, ...]  # signed 1-based positive-root indices
    heights: tuple[int, ...]  # l_i^A
    gamma_inf: Weight  # image of rho under the full folding
    linear: WeylElement  # linear part of the full affine composition
    translation: Weight  # translation part


def fold(chain: LambdaChain, positions: tuple[int, ...]) -> FoldedChain:
    """Fold the walk at the given 1-based positions (any subset of [m])."""
    datum = chain.datum
    weyl = datum.weyl
    w = weyl.identity
    v = Weight((0,) * datum.rank)
    pos_set = set(positions)
    gammas, heights = [], []
    for i, entry in enumerate(chain.entries, start=1):
        g = w.act_root_index(entry.root)
        sign = 1 if g > 0 else -1
        c = datum.pairing(datum.positive_coroots[abs(g) - 1], v)
        gammas.append(g)
        heights.append(sign * entry.level - c)
        if i in pos_set:
            shift = w.act_weight(datum.root_as_weight(entry.root))
            v = v - Weight(tuple(entry.level * x for x in shift.coords))
            w = w * weyl.reflection(entry.root)
    return FoldedChain(tuple(gammas), tuple(heights), w.act_weight(datum.rho), w, v)


def weight_of(chain: LambdaChain, positions) -> Weight:
    """wt(A) = -(composition of the affine reflections applied to -lambda)."""
    folded = fold(chain, tuple(positions))
    return folded.linear.act_weight(chain.lam) - folded.translation


class AdmissibleSubset:
    """Positions whose reflection walk is a path in QB(W) from the identity."""

    __slots__ = ("chain", "positions", "path", "edge_kinds", "_weight", "_height")

    def __init__(self, chain: LambdaChain, positions: tuple[int, ...]):
        built = _walk(chain, positions)
        if built is None:
            raise InputError(f"positions {positions} are not admissible for this chain")
        self.chain = chain
        self.positions = tuple(positions)
        self.path, self.edge_kinds = built
        self._weight: Weight | None = None
        self._height: int | None = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AdmissibleSubset)
            and self.chain is other.chain
            and self.positions == other.positions
        )

    def __hash__(self) -> int:
        return hash(self.positions)

    def __repr__(self) -> str:
        return f"AdmissibleSubset({set(self.positions) or '{}'})"

    @property
    def weight(self) -> Weight:
        if self._weight is None:
            self._weight = weight_of(self.chain, self.positions)
        return self._weight

    @property
    def height(self) -> int:
        """Sum of complementary heights over the quantum positions."""
        if self._height is None:
            total = 0
            for pos, kind in zip(self.positions, self.edge_kinds):
                if kind == QUANTUM:
                    total += self.chain.complementary_height(pos)
            if total < 0:
                raise InternalError("height must be nonnegative")
            self._height = total
        return self._height

    @property
    def final_direction(self) -> WeylElement:
        return self.path[-1]

    def to_json_dict(self) -> dict:
        return {
            "positions": list(self.positions),
            "weight": list(self.weight.coords),
            "height": self.height,
            "path": [list(w.reduced_word()) for w in self.path],
            "edge_kinds": list(self.edge_kinds),
        }


def _step(datum: RootDatum, w: WeylElement, root: int):
    """QB(W) step w -> w r_root, or None if neither edge condition holds."""
    t = w * datum.weyl.reflection(root)
    if t.length == w.length + 1:
        return t, BRUHAT
    drop = datum.pairing(datum.positive_coroots[root], Weight((2,) * datum.rank))
    if t.length == w.length + 1 - drop:
        return t, QUANTUM
    return None


def _walk(chain: LambdaChain, positions) -> tuple[tuple, tuple] | None:
    datum = chain.datum
    path = [datum.weyl.identity]
    kinds = []
    last = 0
    for pos in positions:
        if not last < pos <= len(chain.entries):
            raise InputError(f"position {pos} out of order or out of range")
        last = pos
        step = _step(datum, path[-1], chain.entries[pos - 1].root)
        if step is None:
            return None
        path.append(step[0])
        kinds.append(step[1])
    return tuple(path), tuple(kinds)


def try_admissible(chain: LambdaChain, positions) -> AdmissibleSubset | None:
    try:
        return AdmissibleSubset(chain, tuple(positions))
    except InputError:
        return None


def enumerate_admissible(
    chain: LambdaChain, first_position: int | None = None
) -> tuple[AdmissibleSubset, ...]:
    """All admissible subsets, in lexicographic order of position tuples.

    With first_position set, only subsets starting at that position (used to
    partition the enumeration across workers); the empty set is produced only
    in the unrestricted call.
    """
    datum = chain.datum
    m = len(chain.entries)
    out: list[AdmissibleSubset] = []

    def extend(prefix: list[int], path: list, kinds: list) -> None:
        a = AdmissibleSubset.__new__(AdmissibleSubset)
        a.chain = chain
        a.positions = tuple(prefix)
        a.path = tuple(path)
        a.edge_kinds = tuple(kinds)
        a._weight = None
        a._height = None
        out.append(a)
        start = prefix[-1] + 1 if prefix else 1
        for pos in range(start, m + 1):
            step = _step(datum, path[-1], chain.entries[pos - 1].root)
            if step is not None:
                prefix.append(pos)
                path.append(step[0])
                kinds.append(step[1])
                extend(prefix, path, kinds)
                prefix.pop()
                path.pop()
                kinds.pop()

    if first_position is None:
        extend([], [datum.weyl.identity], [])
    else:
        step = _step(datum, datum.weyl.identity, chain.entries[first_position - 1].root)
        if step is not None:
            extend([first_position], [datum.weyl.identity, step[0]], [step[1]])
    return tuple(out)


# ------------------------------------------------------------- root operators


def _alpha_signed(datum: RootDatum, p: int) -> int:
    """alpha-tilde_p as a signed positive-root index: alpha_p, or -theta at p=0."""
    if p == 0:
        return -(datum.theta + 1)
    if not 1 <= p <= datum.rank:
        raise InputError(f"affine index {p} out of range 0..{datum.rank}")
    return datum.simple_root_index[p - 1] + 1


def _require_lex(chain: LambdaChain) -> None:
    if not chain.lex:
        raise InputError("root operators are only defined on lex chains")


def _samples(A: AdmissibleSubset, alpha_signed: int):
    """Finite indices carrying +-alpha and the g-function samples there,
    plus the sample at infinity."""
    folded = fold(A.chain, A.positions)
    j = abs(alpha_signed)
    sign = 1 if alpha_signed > 0 else -1
    finite = [
        (i + 1, sign * folded.heights[i])
        for i, g in enumerate(folded.gammas)
        if abs(g) == j
    ]
    datum = A.chain.datum
    inf_sample = sign * datum.pairing(datum.positive_coroots[j - 1], A.weight)
    return finite, inf_sample


def _rebuild(A: AdmissibleSubset, positions: tuple[int, ...]) -> AdmissibleSubset:
    new = try_admissible(A.chain, positions)
    if new is None:
        raise InternalError("root operator produced a non-admissible subset")
    return new


def f_operator(A: AdmissibleSubset, p: int) -> AdmissibleSubset | None:
    """Root operator f_p, or None when the subset is killed."""
    _require_lex(A.chain)
    alpha = _alpha_signed(A.chain.datum, p)
    finite, inf_sample = _samples(A, alpha)
    M = max([s for _, s in finite] + [inf_sample])
    if M <= (1 if p == 0 else 0):
        return None
    attaining = [i for i, s in finite if s == M]
    if attaining:
        m_idx = attaining[0]
        if m_idx not in A.positions:
            raise InternalError("minimum attaining index must be a folding position")
        prior = [i for i, _ in finite if i < m_idx]
        if not prior:
            raise InternalError("attaining index has no predecessor")
        k_idx = prior[-1]
    else:
        m_idx = None  # infinity
        if not finite:
            raise InternalError("sample list empty with M above threshold")
        k_idx = finite[-1][0]
    if k_idx in A.positions:
        raise InternalError("predecessor index must not be a folding position")
    positions = tuple(sorted((set(A.positions) - {m_idx}) | {k_idx}))
    new = _rebuild(A, positions)
    _check_f_effect(A, new, p, m_idx, k_idx)
    return new


def e_operator(A: AdmissibleSubset, p: int) -> AdmissibleSubset | None:
    """Root operator e_p, or None when the subset is killed."""
    _require_lex(A.chain)
    alpha = _alpha_signed(A.chain.datum, p)
    finite, inf_sample = _samples(A, alpha)
    M = max([s for _, s in finite] + [inf_sample])
    if not (M > inf_sample and M >= (1 if p == 0 else 0)):
        return None
    attaining = [i for i, s in finite if s == M]
    if not attaining:
        raise InternalError("e-operator needs a finite attaining index")
    k_idx = attaining[-1]
    if k_idx not in A.positions:
        raise InternalError("maximum attaining index must be a folding position")
    later = [i for i, _ in finite if i > k_idx]
    m_idx = later[0] if later else None  # None = infinity
    if m_idx is not None and m_idx in A.positions:
        raise InternalError("successor index must not be a folding position")
    extra = {m_idx} if m_idx is not None else set()
    positions = tuple(sorted((set(A.positions) - {k_idx}) | extra))
    return _rebuild(A, positions)


def _check_f_effect(A, new, p: int, m_idx: int | None, k_idx: int) -> None:
    """Postconditions of f_p: the weight drops by alpha-tilde_p, the cached
    path changes by conjugating one contiguous segment, and e_p undoes it."""
    datum = A.chain.datum
    alpha = _alpha_signed(datum, p)
    alpha_wt = datum.root_as_weight(abs(alpha) - 1)
    if alpha < 0:
        alpha_wt = -alpha_wt
    if new.weight != A.weight - alpha_wt:
        raise InternalError("f_p must lower the weight by alpha-tilde_p")
    s_p = datum.weyl.reflection(abs(alpha) - 1)
    a = sum(1 for j in A.positions if j < k_idx)
    old = A.path
    if m_idx is None:
        expected = old[: a + 1] + tuple(s_p * w for w in old[a:])
    else:
        b = A.positions.index(m_idx) + 1
        expected = old[: a + 1] + tuple(s_p * w for w in old[a:b]) + old[b + 1 :]
    if new.path != expected:
        raise InternalError("f_p did not conjugate a contiguous path segment")
    back = e_operator(new, p)
    if back is None or back.positions != A.positions:
        raise InternalError("e_p failed to invert f_p")


def phi(A: AdmissibleSubset, p: int) -> int:
    _require_lex(A.chain)
    alpha = _alpha_signed(A.chain.datum, p)
    finite, inf_sample = _samples(A, alpha)
    M = max([s for _, s in finite] + [inf_sample])
    delta = 1 if p == 0 else 0
    return M - delta if M >= delta else 0


def epsilon(A: AdmissibleSubset, p: int) -> int:
    _require_lex(A.chain)
    alpha = _alpha_signed(A.chain.datum, p)
    finite, inf_sample = _samples(A, alpha)
    M = max([s for _, s in finite] + [inf_sample])
    delta = 1 if p == 0 else 0
    return M - inf_sample if M >= delta else 0
