"""Quantum LS paths and their affine crystal structure.

A path of shape lambda is a sequence of directions in W^J (J the stabilizer
of lambda) with rational break points; consecutive directions must be joined
by a directed path in the suitably restricted parabolic graph.  This module
provides validation, evaluation, the root operators e_j/f_j for j in the
affine index set, the degree statistic, duality and the Lusztig involution,
and tensor products of the resulting crystals under the Kashiwara convention.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lie_data import (
    InputError,
    InternalError,
    RationalWeight,
    RootDatum,
    Weight,
    WeylElement,
)
from .quantum_bruhat import QuantumBruhatGraph, build_qbg

_ITERATION_CAP = 4096

_parabolic_cache: dict = {}
_restricted_cache: dict = {}


def _parabolic_graph(datum: RootDatum, J: frozenset[int]) -> QuantumBruhatGraph:
    key = (datum, J)
    if key not in _parabolic_cache:
        _parabolic_cache[key] = build_qbg(datum, J)
    return _parabolic_cache[key]


def _restricted_graph(datum: RootDatum, lam: Weight, b: Fraction) -> QuantumBruhatGraph:
    key = (datum, lam, b)
    if key not in _restricted_cache:
        J = datum.stabilizer(lam)
        _restricted_cache[key] = _parabolic_graph(datum, J).restrict(b, lam)
    return _restricted_cache[key]


@dataclass(frozen=True)
class QLSPath:
    """A validated quantum LS path; build through :func:`qls_path`."""

    datum: RootDatum
    lam: Weight
    J: frozenset[int]
    directions: tuple[WeylElement, ...]
    breaks: tuple[Fraction, ...]

    def __repr__(self) -> str:
        dirs = ", ".join(repr(x) for x in self.directions)
        cuts = ", ".join(str(b) for b in self.breaks)
        return f"({dirs}; {cuts})"

    def evaluate(self, t) -> RationalWeight:
        """Exact value of the piecewise-linear path at time t in [0, 1]."""
        t = Fraction(t)
        if t < 0 or t > 1:
            raise InputError(f"time {t} outside [0, 1]")
        total = RationalWeight((Fraction(0),) * self.datum.rank)
        for k, x in enumerate(self.directions):
            a, b = self.breaks[k], self.breaks[k + 1]
            if t <= a:
                break
            seg = min(b, t) - a
            total = total + x.act_weight(self.lam).as_rational().scale(seg)
        return total

    @cached_property
    def weight(self) -> Weight:
        return self.evaluate(1).to_weight()

    @property
    def initial_direction(self) -> Weight:
        """The direction of the path just after time zero."""
        return self.directions[0].act_weight(self.lam)

    def to_json_dict(self) -> dict:
        return {
            "directions": [list(x.reduced_word()) for x in self.directions],
            "breaks": [f"{b.numerator}/{b.denominator}" for b in self.breaks],
            "weight": list(self.weight.coords),
            "deg": deg(self),
        }


def _as_element(datum: RootDatum, x) -> WeylElement:
    if isinstance(x, WeylElement):
        return x
    word = tuple(x)
    out = datum.weyl.identity
    for i in word:
        if not 1 <= i <= datum.rank:
            raise InputError(f"node {i} outside 1..{datum.rank}")
        out = out * datum.weyl.simple[i - 1]
    return out


def qls_path(datum: RootDatum, lam: Weight, directions, breaks) -> QLSPath:
    """Validate raw direction/break data and return the path.

    Every pair of consecutive directions must be joined by a directed path in
    the parabolic graph restricted at the break between them.
    """
    if not datum.is_dominant(lam):
        raise InputError(f"weight {lam.coords} is not dominant")
    J = datum.stabilizer(lam)
    dirs = tuple(_as_element(datum, x) for x in directions)
    if not dirs:
        raise InputError("a path needs at least one direction")
    cuts = tuple(Fraction(b) for b in breaks)
    if len(cuts) != len(dirs) + 1:
        raise InputError("break count must be direction count plus one")
    if cuts[0] != 0 or cuts[-1] != 1:
        raise InputError("breaks must start at 0 and end at 1")
    if any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise InputError("breaks must be strictly increasing")
    weyl = datum.weyl
    for k, x in enumerate(dirs, start=1):
        if weyl.min_coset_rep(x, J) != x:
            raise InputError(f"direction {k} is not a minimal coset representative")
    for k in range(1, len(dirs)):
        if dirs[k - 1] == dirs[k]:
            raise InputError(f"directions {k} and {k + 1} coincide")
        graph = _restricted_graph(datum, lam, cuts[k])
        if not graph.reachable(dirs[k], dirs[k - 1]):
            raise InputError(
                f"segment {k}: no directed path from direction {k + 1} to "
                f"direction {k} once edges with non-integral "
                f"{cuts[k]}*<alpha^vee, lambda> are removed"
            )
    return QLSPath(datum, lam, J, dirs, cuts)


def straight_path(datum: RootDatum, lam: Weight, x: WeylElement | None = None) -> QLSPath:
    """The single-segment path in direction x (default: the dominant one)."""
    weyl = datum.weyl
    x = weyl.identity if x is None else weyl.min_coset_rep(x, datum.stabilizer(lam))
    return qls_path(datum, lam, (x,), (Fraction(0), Fraction(1)))


# ----------------------------------------------------------------- operators


def _alpha_tilde(datum: RootDatum, j: int) -> Weight:
    if j == 0:
        return -datum.root_as_weight(datum.theta)
    return datum.root_as_weight(datum.simple_root_index[j - 1])


def _s_tilde(datum: RootDatum, j: int) -> WeylElement:
    root = datum.theta if j == 0 else datum.simple_root_index[j - 1]
    return datum.weyl.reflection(root)


def _h_breaks(eta: QLSPath, j: int) -> list[Fraction]:
    """Values of <alpha_tilde_j^vee, eta(t)> at the break points."""
    datum = eta.datum
    if not 0 <= j <= datum.rank:
        raise InputError(f"label {j} outside the affine index set")
    root = datum.theta if j == 0 else datum.simple_root_index[j - 1]
    coroot = datum.positive_coroots[root]
    sign = -1 if j == 0 else 1
    vals = [Fraction(0)]
    for k, x in enumerate(eta.directions):
        step = sign * datum.pairing(coroot, x.act_weight(eta.lam))
        vals.append(vals[-1] + (eta.breaks[k + 1] - eta.breaks[k]) * step)
    return vals


def _checked_minimum(vals: list[Fraction]) -> int:
    """The global minimum, after asserting every local minimum is integral."""
    runs = [v for v, _ in itertools.groupby(vals)]
    for i, v in enumerate(runs):
        left_up = i == 0 or runs[i - 1] > v
        right_up = i == len(runs) - 1 or runs[i + 1] > v
        if left_up and right_up and v.denominator != 1:
            raise InternalError(f"local minimum {v} of H is not an integer")
    m = min(vals)
    if m.denominator != 1 or m > 0:
        raise InternalError(f"minimum {m} of H must be a nonpositive integer")
    return int(m)


def _latest_at(vals, breaks, target, upto: int) -> Fraction:
    """Largest t <= breaks[upto] with H(t) == target, scanning backwards."""
    for k in range(upto, 0, -1):
        h0, h1 = vals[k - 1], vals[k]
        if h1 == target:
            return breaks[k]
        if h0 > target > h1 or h0 < target < h1:
            a, b = breaks[k - 1], breaks[k]
            return a + (target - h0) * (b - a) / (h1 - h0)
        if h0 == target:
            return breaks[k - 1]
    raise InternalError("H never attains the requested level")


def _earliest_at(vals, breaks, target, start: int) -> Fraction:
    """Smallest t >= breaks[start] with H(t) == target, scanning forwards."""
    for k in range(start + 1, len(vals)):
        h0, h1 = vals[k - 1], vals[k]
        if h0 == target:
            return breaks[k - 1]
        if min(h0, h1) <= target <= max(h0, h1) and h0 != h1:
            a, b = breaks[k - 1], breaks[k]
            return a + (target - h0) * (b - a) / (h1 - h0)
    if vals[-1] == target:
        return breaks[-1]
    raise InternalError("H never attains the requested level")


def _reflect_window(eta: QLSPath, j: int, t0: Fraction, t1: Fraction) -> QLSPath:
    """Replace eta on [t0, t1] by its s_j-image, then renormalize."""
    datum, weyl = eta.datum, eta.datum.weyl
    s = _s_tilde(datum, j)
    segs: list[tuple[WeylElement, Fraction]] = []
    for k, x in enumerate(eta.directions):
        a, b = eta.breaks[k], eta.breaks[k + 1]
        cuts = sorted({a, b} | {t for t in (t0, t1) if a < t < b})
        for u, v in zip(cuts, cuts[1:]):
            d = weyl.min_coset_rep(s * x, eta.J) if t0 <= u and v <= t1 else x
            segs.append((d, v - u))
    dirs: list[WeylElement] = []
    lens: list[Fraction] = []
    for d, ln in segs:
        if dirs and dirs[-1] == d:
            lens[-1] += ln
        else:
            dirs.append(d)
            lens.append(ln)
    breaks = [Fraction(0)]
    for ln in lens:
        breaks.append(breaks[-1] + ln)
    try:
        return qls_path(datum, eta.lam, tuple(dirs), tuple(breaks))
    except InputError as exc:
        raise InternalError(f"root operator produced an invalid path: {exc}") from exc


def e_operator(eta: QLSPath, j: int) -> QLSPath | None:
    """Raising operator for the affine label j, or None when undefined."""
    vals = _h_breaks(eta, j)
    m = _checked_minimum(vals)
    if m == 0:
        return None
    p = vals.index(Fraction(m))
    t1 = eta.breaks[p]
    t0 = _latest_at(vals, eta.breaks, Fraction(m + 1), p)
    new = _reflect_window(eta, j, t0, t1)
    if new.weight != eta.weight + _alpha_tilde(eta.datum, j):
        raise InternalError("raising operator moved the weight incorrectly")
    return new


def f_operator(eta: QLSPath, j: int) -> QLSPath | None:
    """Lowering operator for the affine label j, or None when undefined."""
    vals = _h_breaks(eta, j)
    m = _checked_minimum(vals)
    if vals[-1] - m < 1:
        return None
    q = len(vals) - 1 - vals[::-1].index(Fraction(m))
    t0 = eta.breaks[q]
    t1 = _earliest_at(vals, eta.breaks, Fraction(m + 1), q)
    new = _reflect_window(eta, j, t0, t1)
    if new.weight != eta.weight - _alpha_tilde(eta.datum, j):
        raise InternalError("lowering operator moved the weight incorrectly")
    return new


def epsilon(eta: QLSPath, j: int) -> int:
    """Number of times the raising operator applies."""
    n, cur = 0, eta
    while (nxt := e_operator(cur, j)) is not None:
        n, cur = n + 1, nxt
        if n > _ITERATION_CAP:
            raise InternalError("raising operator does not terminate")
    return n


def phi(eta: QLSPath, j: int) -> int:
    """Number of times the lowering operator applies."""
    n, cur = 0, eta
    while (nxt := f_operator(cur, j)) is not None:
        n, cur = n + 1, nxt
        if n > _ITERATION_CAP:
            raise InternalError("lowering operator does not terminate")
    return n


# -------------------------------------------------------------------- degree


def deg(eta: QLSPath) -> int:
    """Degree: minus the sum of (1 - b_k) times the segment path weights."""
    graph = _parabolic_graph(eta.datum, eta.J)
    total = Fraction(0)
    for k in range(1, len(eta.directions)):
        step = graph.shortest_path_weight(eta.directions[k], eta.directions[k - 1], eta.lam)
        total -= (1 - eta.breaks[k]) * step
    if total.denominator != 1:
        raise InternalError(f"degree {total} is not an integer")
    return int(total)


def deg_of_involution(eta: QLSPath) -> int:
    """Degree of the Lusztig involution of eta, from eta's own break data."""
    graph = _parabolic_graph(eta.datum, eta.J)
    total = Fraction(0)
    for k in range(1, len(eta.directions)):
        step = graph.shortest_path_weight(eta.directions[k], eta.directions[k - 1], eta.lam)
        total -= eta.breaks[k] * step
    if total.denominator != 1:
        raise InternalError(f"degree {total} is not an integer")
    return int(total)


# ------------------------------------------------------ duality and Lusztig S


def _omega_element(datum: RootDatum, v: WeylElement) -> WeylElement:
    """Image of v under the diagram automorphism induced by the longest element."""
    weyl = datum.weyl
    out = weyl.identity
    for i in v.reduced_word():
        out = out * weyl.simple[weyl.omega[i - 1] - 1]
    return out


def dual(eta: QLSPath) -> QLSPath:
    """Reverse the path and translate its endpoint to the origin."""
    datum, weyl = eta.datum, eta.datum.weyl
    w0 = weyl.longest
    lam2 = -w0.act_weight(eta.lam)
    om_J = frozenset(weyl.omega[i - 1] for i in eta.J)
    dirs = tuple(weyl.min_coset_rep(x * w0, om_J) for x in reversed(eta.directions))
    cuts = tuple(1 - b for b in reversed(eta.breaks))
    return qls_path(datum, lam2, dirs, cuts)


def omega(eta: QLSPath) -> QLSPath:
    """Apply the diagram automorphism to every direction."""
    datum, weyl = eta.datum, eta.datum.weyl
    lam2 = -weyl.longest.act_weight(eta.lam)
    dirs = tuple(_omega_element(datum, x) for x in eta.directions)
    return qls_path(datum, lam2, dirs, eta.breaks)


def lusztig_S(eta: QLSPath) -> QLSPath:
    """The Lusztig involution: multiply by the longest element and reverse."""
    weyl = eta.datum.weyl
    w0 = weyl.longest
    dirs = tuple(weyl.min_coset_rep(w0 * x, eta.J) for x in reversed(eta.directions))
    cuts = tuple(1 - b for b in reversed(eta.breaks))
    return qls_path(eta.datum, eta.lam, dirs, cuts)


# ------------------------------------------------------------------- crystals


class CrystalGraph:
    """Finite crystal with arrows for every affine label.

    Vertices are opaque hashable model elements; arrows are stored as partial
    maps keyed by (vertex, label).
    """

    def __init__(self, datum, vertices, weights, e_arrows, f_arrows, distinguished):
        self.datum = datum
        self.vertices = tuple(vertices)
        self.weights = dict(weights)
        self.e_arrows = dict(e_arrows)
        self.f_arrows = dict(f_arrows)
        self.distinguished = distinguished
        self.labels = tuple(range(datum.rank + 1))
        self._eps_cache: dict = {}
        self._phi_cache: dict = {}

    def weight_of(self, v) -> Weight:
        return self.weights[v]

    def eps(self, v, j: int) -> int:
        key = (v, j)
        if key not in self._eps_cache:
            n, cur = 0, v
            while (nxt := self.e_arrows.get((cur, j))) is not None:
                n, cur = n + 1, nxt
            self._eps_cache[key] = n
        return self._eps_cache[key]

    def phi(self, v, j: int) -> int:
        key = (v, j)
        if key not in self._phi_cache:
            n, cur = 0, v
            while (nxt := self.f_arrows.get((cur, j))) is not None:
                n, cur = n + 1, nxt
            self._phi_cache[key] = n
        return self._phi_cache[key]

    def check(self) -> None:
        """Assert arrow-reversibility and weight consistency along arrows."""
        for (v, j), w in self.f_arrows.items():
            if self.e_arrows.get((w, j)) != v:
                raise InternalError(f"f then e is not the identity at label {j}")
            if self.weights[w] != self.weights[v] - _alpha_tilde(self.datum, j):
                raise InternalError(f"weight step along an f-arrow at label {j} is wrong")
        for (v, j), w in self.e_arrows.items():
            if self.f_arrows.get((w, j)) != v:
                raise InternalError(f"e then f is not the identity at label {j}")

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        neighbours: dict = {v: [] for v in self.vertices}
        for (v, _), w in itertools.chain(self.e_arrows.items(), self.f_arrows.items()):
            neighbours[v].append(w)
            neighbours[w].append(v)
        seen = {self.vertices[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in neighbours[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def to_dot(self) -> str:
        palette = ("red", "blue", "forestgreen", "orange", "purple", "brown", "cyan", "magenta")
        index = {v: i for i, v in enumerate(self.vertices)}
        lines = ["digraph crystal {"]
        for v in self.vertices:
            lines.append(f'  n{index[v]} [label="{v!r}"];')
        for (v, j), w in sorted(self.f_arrows.items(), key=lambda kv: (index[kv[0][0]], kv[0][1])):
            colour = palette[j % len(palette)]
            lines.append(f'  n{index[v]} -> n{index[w]} [label="{j}", color={colour}];')
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        index = {v: i for i, v in enumerate(self.vertices)}
        return {
            "vertices": [
                {"index": i, "label": repr(v), "weight": list(self.weights[v].coords)}
                for i, v in enumerate(self.vertices)
            ],
            "arrows": [
                {"j": j, "source": index[v], "target": index[w]}
                for (v, j), w in sorted(
                    self.f_arrows.items(), key=lambda kv: (index[kv[0][0]], kv[0][1])
                )
            ],
            "distinguished": index[self.distinguished],
            "connected": self.is_connected(),
        }


def build_crystal(datum: RootDatum, lam: Weight) -> CrystalGraph:
    """Close the straight dominant path under all operators."""
    start = straight_path(datum, lam)
    labels = tuple(range(datum.rank + 1))
    order = [start]
    seen = {start}
    e_arrows: dict = {}
    f_arrows: dict = {}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for j in labels:
            for table, op in ((e_arrows, e_operator), (f_arrows, f_operator)):
                w = op(v, j)
                if w is not None:
                    table[(v, j)] = w
                    if w not in seen:
                        seen.add(w)
                        order.append(w)
                        queue.append(w)
    weights = {v: v.weight for v in order}
    graph = CrystalGraph(datum, order, weights, e_arrows, f_arrows, start)
    graph.check()
    return graph


def tensor(*factors: CrystalGraph) -> CrystalGraph:
    """Tensor product under the Kashiwara convention.

    The lowering operator acts on the right factor when its eps is at least
    the phi of everything to the left, and otherwise on the left.
    """
    if len(factors) < 2:
        raise InputError("a tensor product needs at least two factors")
    datum = factors[0].datum
    if any(f.datum is not datum for f in factors[1:]):
        raise InputError("all factors must share one root datum")
    labels = factors[0].labels
    eps_cache: dict = {}

    def e_act(k: int, b: tuple, j: int):
        if len(b) == 1:
            t = factors[k].e_arrows.get((b[0], j))
            return None if t is None else (t,)
        head, rest = b[0], b[1:]
        if suffix_eps(k + 1, rest, j) > factors[k].phi(head, j):
            t = e_act(k + 1, rest, j)
            return None if t is None else (head,) + t
        t = factors[k].e_arrows.get((head, j))
        return None if t is None else (t,) + rest

    def f_act(k: int, b: tuple, j: int):
        if len(b) == 1:
            t = factors[k].f_arrows.get((b[0], j))
            return None if t is None else (t,)
        head, rest = b[0], b[1:]
        if suffix_eps(k + 1, rest, j) >= factors[k].phi(head, j):
            t = f_act(k + 1, rest, j)
            return None if t is None else (head,) + t
        t = factors[k].f_arrows.get((head, j))
        return None if t is None else (t,) + rest

    def suffix_eps(k: int, b: tuple, j: int) -> int:
        key = (k, b, j)
        if key not in eps_cache:
            n, cur = 0, b
            while (nxt := e_act(k, cur, j)) is not None:
                n, cur = n + 1, nxt
            eps_cache[key] = n
        return eps_cache[key]

    vertices = tuple(itertools.product(*(f.vertices for f in factors)))
    zero = Weight((0,) * datum.rank)
    weights = {}
    e_arrows: dict = {}
    f_arrows: dict = {}
    for b in vertices:
        weights[b] = sum((factors[k].weights[x] for k, x in enumerate(b)), zero)
        for j in labels:
            t = e_act(0, b, j)
            if t is not None:
                e_arrows[(b, j)] = t
            t = f_act(0, b, j)
            if t is not None:
                f_arrows[(b, j)] = t
    distinguished = tuple(f.distinguished for f in factors)
    graph = CrystalGraph(datum, vertices, weights, e_arrows, f_arrows, distinguished)
    graph.check()
    return graph
