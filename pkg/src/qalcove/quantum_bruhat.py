"""Parabolic quantum Bruhat graphs and their path combinatorics.

A graph has vertex set W^J and, for each vertex w and positive root alpha
outside the parabolic subsystem, at most one edge w -> min_coset_rep(w r_alpha)
which is either a Bruhat edge (length goes up by one) or a quantum edge
(length drops by <alpha^vee, 2rho - 2rho_J> - 1).  Quantum edges carry the
coroot alpha^vee as weight.  On top of the graphs the module provides
shortest-path weights, reflection orderings compatible with a lex chain,
label-increasing paths, and tilted Bruhat minima.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from qalcove.lie_data import (
    InputError,
    InternalError,
    RootDatum,
    Vector,
    Weight,
    WeylElement,
)

BRUHAT = "bruhat"
QUANTUM = "quantum"


@dataclass(frozen=True)
class QBGEdge:
    source: WeylElement
    target: WeylElement
    label: int  # positive-root index in the root datum
    kind: str  # BRUHAT or QUANTUM
    weight: Vector  # coroot coordinates; zero vector on Bruhat edges


class QuantumBruhatGraph:
    """Immutable quantum Bruhat graph on W^J, optionally b-restricted."""

    def __init__(
        self,
        datum: RootDatum,
        J: frozenset[int] = frozenset(),
        restriction: tuple[Fraction, Weight] | None = None,
        _edges: dict | None = None,
    ):
        self.datum = datum
        self.J = frozenset(J)
        self.restriction = restriction
        self.vertices = datum.weyl.coset_reps(self.J)
        self._vertex_pos = {w: i for i, w in enumerate(self.vertices)}
        self.labels: tuple[int, ...] = tuple(
            k
            for k in range(len(datum.positive_roots))
            if k not in datum.parabolic_roots(self.J)
        )
        if _edges is not None:
            self.adjacency = _edges
        else:
            depth = datum.two_rho_minus_two_rho_J(self.J)
            drops = {}
            for k in self.labels:
                drops[k] = datum.pairing(datum.positive_coroots[k], depth)
                if drops[k] <= 0:
                    raise InternalError("<alpha^vee, 2rho-2rho_J> must be positive")
            self.adjacency = {w: self._build_edges(w, drops) for w in self.vertices}
        self._bfs_cache: dict[WeylElement, dict] = {}

    def _build_edges(self, w: WeylElement, drops: dict[int, int]) -> tuple[QBGEdge, ...]:
        datum, weyl = self.datum, self.datum.weyl
        out = []
        for k in self.labels:
            target = weyl.min_coset_rep(w * weyl.reflection(k), self.J)
            if target.length == w.length + 1:
                out.append(QBGEdge(w, target, k, BRUHAT, (0,) * datum.rank))
            elif target.length == w.length + 1 - drops[k]:
                out.append(QBGEdge(w, target, k, QUANTUM, datum.positive_coroots[k]))
        return tuple(out)

    def edges(self):
        for w in self.vertices:
            yield from self.adjacency[w]

    def edge_count(self) -> int:
        return sum(len(self.adjacency[w]) for w in self.vertices)

    def restrict(self, b: Fraction, lam: Weight) -> "QuantumBruhatGraph":
        """Subgraph keeping edges whose label alpha has b<alpha^vee,lam> integral."""
        if not self.datum.is_dominant(lam):
            raise InputError(f"weight {lam.coords} is not dominant")
        # the full graph may be restricted by any dominant weight; a parabolic
        # graph only by weights whose stabilizer contains J
        if not self.J <= self.datum.stabilizer(lam):
            raise InputError("stabilizer of the weight does not contain the graph's J")
        b = Fraction(b)
        kept = {
            w: tuple(
                e
                for e in self.adjacency[w]
                if (b * self.datum.pairing_index(e.label, lam)).denominator == 1
            )
            for w in self.vertices
        }
        return QuantumBruhatGraph(self.datum, self.J, (b, lam), _edges=kept)

    # ------------------------------------------------------------------- queries

    def is_strongly_connected(self) -> bool:
        n = len(self.vertices)
        fwd = {self.vertices[0]}
        queue = deque(fwd)
        while queue:
            w = queue.popleft()
            for e in self.adjacency[w]:
                if e.target not in fwd:
                    fwd.add(e.target)
                    queue.append(e.target)
        if len(fwd) != n:
            return False
        incoming: dict[WeylElement, list[WeylElement]] = {w: [] for w in self.vertices}
        for e in self.edges():
            incoming[e.target].append(e.source)
        back = {self.vertices[0]}
        queue = deque(back)
        while queue:
            w = queue.popleft()
            for src in incoming[w]:
                if src not in back:
                    back.add(src)
                    queue.append(src)
        return len(back) == n

    def _bfs(self, x: WeylElement) -> dict:
        """Distance and one witness path weight from x to every vertex."""
        data = self._bfs_cache.get(x)
        if data is None:
            zero = (0,) * self.datum.rank
            dist = {x: 0}
            wt = {x: zero}
            queue = deque([x])
            while queue:
                w = queue.popleft()
                for e in self.adjacency[w]:
                    if e.target not in dist:
                        dist[e.target] = dist[w] + 1
                        wt[e.target] = tuple(a + b for a, b in zip(wt[w], e.weight))
                        queue.append(e.target)
            data = {"dist": dist, "wt": wt}
            self._bfs_cache[x] = data
        return data

    def reachable(self, x: WeylElement, y: WeylElement) -> bool:
        return y in self._bfs(x)["dist"]

    def distance(self, x: WeylElement, y: WeylElement) -> int:
        data = self._bfs(x)
        if y not in data["dist"]:
            raise InternalError("graph is not strongly connected")
        return data["dist"][y]

    def shortest_path_weight(self, x: WeylElement, y: WeylElement, lam: Weight) -> int:
        """<wt(p), lam> for any shortest directed path p from x to y."""
        data = self._bfs(x)
        if y not in data["wt"]:
            raise InternalError("graph is not strongly connected")
        val = self.datum.pairing(data["wt"][y], lam)
        if val < 0:
            raise InternalError("shortest-path weight must be nonnegative")
        return val

    def shortest_paths(self, x: WeylElement, y: WeylElement) -> list[tuple[QBGEdge, ...]]:
        """All shortest directed paths from x to y, as edge tuples."""
        dist = self._bfs(x)["dist"]
        if y not in dist:
            raise InternalError("graph is not strongly connected")
        out: list[tuple[QBGEdge, ...]] = []

        def grow(w: WeylElement, acc: list[QBGEdge]) -> None:
            if w == y and len(acc) == dist[y]:
                out.append(tuple(acc))
                return
            for e in self.adjacency[w]:
                if dist.get(e.target) == len(acc) + 1 and len(acc) + 1 <= dist[y]:
                    acc.append(e)
                    grow(e.target, acc)
                    acc.pop()

        grow(x, [])
        return out

    # ------------------------------------------------------------------- exports

    def to_dot(self) -> str:
        lines = ["digraph qbg {"]
        for w in self.vertices:
            lines.append(f'  "{w!r}";')
        for w in self.vertices:
            for e in self.adjacency[w]:
                style = "solid" if e.kind == BRUHAT else "dashed"
                label = self.datum.root_name(e.label)
                lines.append(f'  "{e.source!r}" -> "{e.target!r}" [style={style}, label="{label}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        res = None
        if self.restriction is not None:
            b, lam = self.restriction
            res = {"b": f"{b.numerator}/{b.denominator}", "lambda": list(lam.coords)}
        return {
            "J": sorted(self.J),
            "vertices": [list(w.reduced_word()) for w in self.vertices],
            "edges": [
                {
                    "source": list(e.source.reduced_word()),
                    "target": list(e.target.reduced_word()),
                    "label": list(self.datum.positive_roots[e.label]),
                    "kind": e.kind,
                    "weight": list(e.weight),
                }
                for w in self.vertices
                for e in self.adjacency[w]
            ],
            "restriction": res,
        }


def build_qbg(datum: RootDatum, J: frozenset[int] = frozenset()) -> QuantumBruhatGraph:
    return QuantumBruhatGraph(datum, J)


# --------------------------------------------------------------- reflection order


def reflection_ordering(
    datum: RootDatum, J: frozenset[int], chain
) -> tuple[int, ...]:
    """Total order on the positive roots: first the roots outside the parabolic
    subsystem, by first appearance of their level-zero hyperplane in the lex
    chain, then the parabolic roots in the inversion order of the smallest
    reduced word of the longest element of W_J."""
    bottom: list[int] = []
    seen = set()
    for entry in chain.entries:
        if entry.root not in seen:
            seen.add(entry.root)
            bottom.append(entry.root)
    if set(bottom) != set(datum.parabolic_roots(frozenset(range(1, datum.rank + 1))) - datum.parabolic_roots(J)):
        raise InternalError("lex chain roots do not match the non-parabolic roots")
    top: list[int] = []
    weyl = datum.weyl
    w_J = weyl.parabolic_longest(J)
    prefix = weyl.identity
    for i in w_J.reduced_word():
        # inversion beta_t = s_{i_1} ... s_{i_{t-1}}(alpha_{i_t})
        root = prefix.act_root_index(datum.simple_root_index[i - 1])
        if root < 0:
            raise InternalError("inversion order produced a negative root")
        top.append(root - 1)
        prefix = prefix * weyl.simple[i - 1]
    order = tuple(bottom + top)
    if len(order) != len(datum.positive_roots) or len(set(order)) != len(order):
        raise InternalError("reflection ordering is not a total order")
    if len(datum.positive_roots) <= 12:
        _verify_reflection_ordering(datum, order)
    return order


def _verify_reflection_ordering(datum: RootDatum, order: tuple[int, ...]) -> None:
    # gamma^vee = a alpha^vee + b beta^vee with a, b > 0 forces gamma between
    pos = {k: i for i, k in enumerate(order)}
    n = len(order)
    for ia in range(n):
        for ib in range(ia + 1, n):
            a_idx, b_idx = order[ia], order[ib]
            u = datum.positive_coroots[a_idx]
            v = datum.positive_coroots[b_idx]
            for g_idx in range(len(datum.positive_roots)):
                if g_idx in (a_idx, b_idx):
                    continue
                coeffs = _solve_two(u, v, datum.positive_coroots[g_idx])
                if coeffs is not None and coeffs[0] > 0 and coeffs[1] > 0:
                    if not ia < pos[g_idx] < ib:
                        raise InternalError(
                            "reflection ordering violates the interleaving property"
                        )


def _solve_two(u: Vector, v: Vector, g: Vector):
    """Solve a*u + b*v = g exactly, or None if inconsistent/degenerate."""
    rows = list(zip(u, v, g))
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]
            if det != 0:
                a = Fraction(rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2], det)
                b = Fraction(rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0], det)
                if all(a * x + b * y == z for x, y, z in rows):
                    return a, b
                return None
    return None


# ---------------------------------------------------------------- shellability


def increasing_paths_from(
    graph: QuantumBruhatGraph,
    start: WeylElement,
    targets: frozenset[WeylElement],
    order: tuple[int, ...],
    allowed: frozenset[int] | None = None,
) -> list[tuple[QBGEdge, ...]]:
    """All strictly label-increasing paths from start into the target set."""
    pos = {k: i for i, k in enumerate(order)}
    found: list[tuple[QBGEdge, ...]] = []

    def grow(w: WeylElement, floor: int, acc: list[QBGEdge]) -> None:
        if w in targets:
            found.append(tuple(acc))
            # the empty continuation also counts; longer continuations could
            # reenter the target set, so keep searching
        for e in sorted(graph.adjacency[w], key=lambda e: pos[e.label]):
            if pos[e.label] > floor and (allowed is None or e.label in allowed):
                acc.append(e)
                grow(e.target, pos[e.label], acc)
                acc.pop()

    grow(start, -1, [])
    return found


def increasing_path(
    graph: QuantumBruhatGraph,
    v: WeylElement,
    w: WeylElement,
    order: tuple[int, ...],
) -> tuple[QBGEdge, ...]:
    """The unique label-increasing path from v to w in QB(W)."""
    if graph.J:
        raise InputError("label-increasing paths are defined on the full graph")
    found = increasing_paths_from(graph, v, frozenset({w}), order)
    if len(found) != 1:
        raise InternalError(
            f"expected exactly one increasing path from {v!r} to {w!r}, found {len(found)}"
        )
    return found[0]


def tilted_minimum(
    graph: QuantumBruhatGraph,
    v: WeylElement,
    coset_rep: WeylElement,
    J: frozenset[int],
    order: tuple[int, ...],
) -> tuple[WeylElement, tuple[QBGEdge, ...]]:
    """Endpoint (and path) of the unique increasing path from v into the coset
    coset_rep * W_J with all labels outside the parabolic subsystem."""
    if graph.J:
        raise InputError("tilted minima are computed on the full graph")
    datum = graph.datum
    weyl = datum.weyl
    rep = weyl.min_coset_rep(coset_rep, J)
    coset = frozenset(
        rep * u for u in _parabolic_elements(weyl, J)
    )
    allowed = frozenset(graph.labels) - datum.parabolic_roots(J)
    found = increasing_paths_from(graph, v, coset, order, allowed)
    if len(found) != 1:
        raise InternalError(
            f"expected exactly one increasing path into the coset, found {len(found)}"
        )
    path = found[0]
    end = path[-1].target if path else v
    return end, path


def _parabolic_elements(weyl, J: frozenset[int]) -> tuple[WeylElement, ...]:
    out = [weyl.identity]
    seen = {weyl.identity}
    queue = deque(out)
    while queue:
        w = queue.popleft()
        for i in J:
            nxt = w * weyl.simple[i - 1]
            if nxt not in seen:
                seen.add(nxt)
                out.append(nxt)
                queue.append(nxt)
    return tuple(out)
