"""Exact finite root-system and Weyl-group data for types A-G.

Roots live as integer vectors in the simple-root basis, coroots in the
simple-coroot basis, and weights in the fundamental-weight basis; every
pairing is then an integer dot product through the Cartan matrix.  The
affine marks/comarks of the untwisted affinization are derived from the
highest root, so level and perfectness computations need no tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

Vector = tuple[int, ...]


class InputError(ValueError):
    """Invalid user input (bad type, rank, weight, chain, ...)."""


class InternalError(RuntimeError):
    """A checked invariant failed; signals a bug, not bad input."""


@dataclass(frozen=True)
class Weight:
    """Integral weight in fundamental-weight coordinates."""

    coords: Vector

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def as_rational(self) -> "RationalWeight":
        return RationalWeight(tuple(Fraction(a) for a in self.coords))


@dataclass(frozen=True)
class RationalWeight:
    """Weight with exact rational fundamental-weight coordinates."""

    coords: tuple[Fraction, ...]

    def __add__(self, other: "RationalWeight") -> "RationalWeight":
        return RationalWeight(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "RationalWeight") -> "RationalWeight":
        return RationalWeight(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "RationalWeight":
        return RationalWeight(tuple(-a for a in self.coords))

    def scale(self, c: Fraction) -> "RationalWeight":
        return RationalWeight(tuple(c * a for a in self.coords))

    def to_weight(self) -> Weight:
        if any(a.denominator != 1 for a in self.coords):
            raise InternalError(f"weight {self.coords} is not integral")
        return Weight(tuple(int(a) for a in self.coords))


def _chain_bonds(rank: int) -> dict[tuple[int, int], int]:
    bonds: dict[tuple[int, int], int] = {}
    for i in range(1, rank):
        bonds[(i, i + 1)] = -1
        bonds[(i + 1, i)] = -1
    return bonds


def _bonds(type_label: str, rank: int) -> dict[tuple[int, int], int]:
    # bonds[(i, j)] = <alpha_i^vee, alpha_j> for i != j, Bourbaki numbering.
    if type_label == "A" and rank >= 1:
        return _chain_bonds(rank)
    if type_label == "B" and rank >= 2:
        bonds = _chain_bonds(rank)
        bonds[(rank, rank - 1)] = -2  # alpha_rank is the short root
        return bonds
    if type_label == "C" and rank >= 2:
        bonds = _chain_bonds(rank)
        bonds[(rank - 1, rank)] = -2  # alpha_rank is the long root
        return bonds
    if type_label == "D" and rank >= 4:
        bonds = _chain_bonds(rank - 1)
        bonds[(rank - 2, rank)] = -1
        bonds[(rank, rank - 2)] = -1
        return bonds
    if type_label == "E" and rank in (6, 7, 8):
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]
        if rank >= 7:
            edges.append((6, 7))
        if rank == 8:
            edges.append((7, 8))
        bonds = {}
        for i, j in edges:
            bonds[(i, j)] = -1
            bonds[(j, i)] = -1
        return bonds
    if type_label == "F" and rank == 4:
        bonds = _chain_bonds(rank)
        bonds[(3, 2)] = -2  # alpha_3, alpha_4 are the short roots
        return bonds
    if type_label == "G" and rank == 2:
        return {(1, 2): -3, (2, 1): -1}  # alpha_1 is the short root
    raise InputError(f"unknown finite type {type_label}{rank}")


class RootDatum:
    """Immutable root-system data with the affine marks of its affinization."""

    def __init__(self, type_label: str, rank: int):
        bonds = _bonds(type_label, rank)
        self.type_label = type_label
        self.rank = rank
        self.cartan: tuple[Vector, ...] = tuple(
            tuple(2 if i == j else bonds.get((i + 1, j + 1), 0) for j in range(rank))
            for i in range(rank)
        )
        self._check_cartan()
        self.positive_roots, self.positive_coroots = self._generate_roots()
        self._root_index = {r: k for k, r in enumerate(self.positive_roots)}
        self.simple_root_index: Vector = tuple(
            self._root_index[tuple(1 if j == i else 0 for j in range(rank))]
            for i in range(rank)
        )
        heights = [sum(r) for r in self.positive_roots]
        top = max(heights)
        if heights.count(top) != 1:
            raise InternalError("highest root is not unique")
        self.theta = heights.index(top)
        self.rho = Weight((1,) * rank)
        # theta = sum_i marks[i] alpha_i, theta^vee = sum_i comarks[i] alpha_i^vee,
        # and the affine node always carries mark = comark = 1.
        self.marks: Vector = (1,) + self.positive_roots[self.theta]
        self.comarks: Vector = (1,) + self.positive_coroots[self.theta]
        for alpha in range(len(self.positive_roots)):
            val = self.pairing_roots(self.theta, alpha)
            expect = (2,) if alpha == self.theta else (0, 1)
            if val not in expect:
                raise InternalError(f"<theta^vee, root {alpha}> = {val} out of range")

    def _check_cartan(self) -> None:
        a = self.cartan
        for i in range(self.rank):
            if a[i][i] != 2:
                raise InternalError("Cartan diagonal must be 2")
            for j in range(self.rank):
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise InternalError("invalid Cartan off-diagonal pattern")

    def _generate_roots(self) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
        # Closure of the simple (root, coroot) pairs under simple reflections.
        rank, a = self.rank, self.cartan
        seen: dict[Vector, Vector] = {}
        stack: list[tuple[Vector, Vector]] = []
        for i in range(rank):
            e = tuple(1 if j == i else 0 for j in range(rank))
            seen[e] = e
            stack.append((e, e))
        while stack:
            root, coroot = stack.pop()
            for i in range(rank):
                pr = sum(c * a[i][j] for j, c in enumerate(root))
                new_root = tuple(
                    c - (pr if j == i else 0) for j, c in enumerate(root)
                )
                if any(c < 0 for c in new_root) or new_root in seen:
                    continue
                pc = sum(c * a[j][i] for j, c in enumerate(coroot))
                new_coroot = tuple(
                    c - (pc if j == i else 0) for j, c in enumerate(coroot)
                )
                seen[new_root] = new_coroot
                stack.append((new_root, new_coroot))
        order = sorted(seen, key=lambda r: (sum(r), r[::-1]))
        return tuple(order), tuple(seen[r] for r in order)

    # ------------------------------------------------------------------ pairings

    def pairing(self, coroot: Vector, weight: Weight | RationalWeight):
        """<beta^vee, mu> for a coroot in simple-coroot coordinates."""
        return sum(b * m for b, m in zip(coroot, weight.coords, strict=True))

    def pairing_index(self, root_index: int, weight: Weight | RationalWeight):
        return self.pairing(self.positive_coroots[root_index], weight)

    def pairing_roots(self, coroot_index: int, root_index: int) -> int:
        """<beta^vee, gamma> for two positive roots given by index."""
        coroot = self.positive_coroots[coroot_index]
        root = self.positive_roots[root_index]
        return sum(
            b * self.cartan[i][j] * c
            for i, b in enumerate(coroot)
            for j, c in enumerate(root)
        )

    def root_index(self, coords: Vector) -> int | None:
        """Index of a positive root given in simple-root coordinates."""
        return self._root_index.get(tuple(coords))

    def root_as_weight(self, root: Vector | int) -> Weight:
        """Fundamental-weight coordinates of a root vector."""
        if isinstance(root, int):
            root = self.positive_roots[root]
        return Weight(
            tuple(sum(self.cartan[i][j] * c for j, c in enumerate(root)) for i in range(self.rank))
        )

    @cached_property
    def _cartan_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.rank
        m = [[Fraction(self.cartan[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return tuple(tuple(row[n:]) for row in m)

    def weight_in_root_coords(self, weight: Weight | RationalWeight) -> tuple[Fraction, ...]:
        inv = self._cartan_inverse
        return tuple(
            sum(inv[i][j] * Fraction(weight.coords[j]) for j in range(self.rank))
            for i in range(self.rank)
        )

    # ----------------------------------------------------------------- reflections

    def reflect(self, weight, root_index: int):
        return self.affine_reflect(weight, root_index, 0)

    def affine_reflect(self, weight, root_index: int, level: int):
        """Reflection through the hyperplane where <beta^vee, .> equals level."""
        c = self.pairing_index(root_index, weight) - level
        beta = self.root_as_weight(root_index)
        if isinstance(weight, Weight):
            return Weight(tuple(m - c * b for m, b in zip(weight.coords, beta.coords)))
        return RationalWeight(tuple(m - c * b for m, b in zip(weight.coords, beta.coords)))

    # ------------------------------------------------------------------- weights

    def fundamental_weight(self, i: int) -> Weight:
        if not 1 <= i <= self.rank:
            raise InputError(f"node {i} out of range 1..{self.rank}")
        return Weight(tuple(1 if j == i - 1 else 0 for j in range(self.rank)))

    def weight_from_coeffs(self, coeffs) -> Weight:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.rank:
            raise InputError(f"expected {self.rank} weight coefficients, got {len(coeffs)}")
        return Weight(coeffs)

    def is_dominant(self, weight: Weight) -> bool:
        return all(c >= 0 for c in weight.coords)

    def stabilizer(self, weight: Weight) -> frozenset[int]:
        """Nodes i (1-based) with <alpha_i^vee, weight> = 0."""
        if not self.is_dominant(weight):
            raise InputError(f"weight {weight.coords} is not dominant")
        return frozenset(i + 1 for i, c in enumerate(weight.coords) if c == 0)

    def parabolic_roots(self, J: frozenset[int]) -> frozenset[int]:
        """Indices of positive roots supported on the node set J."""
        if not all(1 <= j <= self.rank for j in J):
            raise InputError(f"node set {sorted(J)} out of range")
        return frozenset(
            k
            for k, r in enumerate(self.positive_roots)
            if all(c == 0 or (i + 1) in J for i, c in enumerate(r))
        )

    def two_rho_minus_two_rho_J(self, J: frozenset[int]) -> Weight:
        """Sum of the positive roots not supported on J, as a weight."""
        inside = self.parabolic_roots(J)
        total = Weight((0,) * self.rank)
        for k in range(len(self.positive_roots)):
            if k not in inside:
                total = total + self.root_as_weight(k)
        return total

    # -------------------------------------------------------------------- affine

    def level_of_affine_weight(self, eps_coeffs) -> int:
        coeffs = tuple(int(c) for c in eps_coeffs)
        if len(coeffs) != self.rank + 1 or any(c < 0 for c in coeffs):
            raise InputError("need nonnegative coefficients on nodes 0..rank")
        return sum(a * c for a, c in zip(self.comarks, coeffs))

    def c_r(self, r: int) -> Fraction:
        if not 1 <= r <= self.rank:
            raise InputError(f"node {r} out of range 1..{self.rank}")
        return max(Fraction(self.marks[r], self.comarks[r]), Fraction(1))

    @cached_property
    def symmetrizers(self) -> Vector:
        """Minimal positive integers d with d_i cartan[i][j] = d_j cartan[j][i]."""
        d = [Fraction(0)] * self.rank
        d[0] = Fraction(1)
        todo = [0]
        while todo:
            i = todo.pop()
            for j in range(self.rank):
                if self.cartan[i][j] != 0 and i != j and d[j] == 0:
                    d[j] = d[i] * Fraction(self.cartan[i][j], self.cartan[j][i])
                    todo.append(j)
        if any(x == 0 for x in d):
            raise InternalError("Dynkin diagram is not connected")
        scale = 1
        for x in d:
            scale = scale * x.denominator // _gcd(scale, x.denominator)
        ints = [int(x * scale) for x in d]
        g = 0
        for x in ints:
            g = _gcd(g, x)
        return tuple(x // g for x in ints)

    def long_nodes(self) -> tuple[int, ...]:
        d = self.symmetrizers
        top = max(d)
        return tuple(i + 1 for i, x in enumerate(d) if x == top)

    def short_nodes(self) -> tuple[int, ...]:
        d = self.symmetrizers
        if len(set(d)) == 1:
            return ()
        bottom = min(d)
        return tuple(i + 1 for i, x in enumerate(d) if x == bottom)

    # -------------------------------------------------------------------- output

    def to_json_dict(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "positive_roots": [list(r) for r in self.positive_roots],
            "marks": list(self.marks),
            "comarks": list(self.comarks),
        }

    def root_name(self, root_index: int, sign: int = 1) -> str:
        """Readable form like 'a1+2a2' of a (signed) positive root."""
        parts = []
        for i, c in enumerate(sign * x for x in self.positive_roots[root_index]):
            if c == 0:
                continue
            mag = f"a{i + 1}" if abs(c) == 1 else f"{abs(c)}a{i + 1}"
            parts.append(("-" if c < 0 else ("+" if parts else "")) + mag)
        return "".join(parts) or "0"

    @cached_property
    def weyl(self) -> "WeylGroup":
        return WeylGroup(self)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def build_root_datum(type_label: str, rank: int) -> RootDatum:
    if not isinstance(rank, int) or rank < 1:
        raise InputError(f"invalid rank {rank!r}")
    return RootDatum(type_label, rank)


class WeylElement:
    """Group element stored as a signed permutation of the positive roots.

    perm[k] = +-(j+1) means the element maps positive root k to +-(positive
    root j); equality and hashing are content-based and O(1) amortized via the
    cached hash, which is what the graph code leans on.
    """

    __slots__ = ("group", "perm", "length", "index", "_inverse_index", "_hash")

    def __init__(self, group: "WeylGroup", perm: Vector, index: int):
        self.group = group
        self.perm = perm
        self.length = sum(1 for v in perm if v < 0)
        self.index = index
        self._inverse_index = -1
        self._hash = hash(perm)

    def __repr__(self) -> str:
        word = self.reduced_word()
        return "*".join(f"s{i}" for i in word) if word else "e"

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, WeylElement) and self.perm == other.perm)

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.group.product(self, other)

    @property
    def inverse(self) -> "WeylElement":
        return self.group.elements[self._inverse_index]

    def apply_perm(self, signed_index: int) -> int:
        """Image of a signed positive-root index (1-based, sign = root sign)."""
        v = self.perm[abs(signed_index) - 1]
        return v if signed_index > 0 else -v

    def act_root_index(self, root_index: int) -> int:
        """Image of positive root (0-based index) as signed 1-based index."""
        return self.perm[root_index]

    def act_weight(self, weight):
        """Action on a weight in fundamental coordinates."""
        datum = self.group.datum
        inv = self.inverse
        coords = []
        for i in range(datum.rank):
            v = inv.perm[datum.simple_root_index[i]]
            coroot = datum.positive_coroots[abs(v) - 1]
            val = datum.pairing(coroot, weight)
            coords.append(val if v > 0 else -val)
        cls = Weight if isinstance(weight, Weight) else RationalWeight
        return cls(tuple(coords))

    def has_right_descent(self, i: int) -> bool:
        """True iff length(w s_i) < length(w), nodes 1-based."""
        return self.perm[self.group.datum.simple_root_index[i - 1]] < 0

    def has_left_descent(self, i: int) -> bool:
        return self.inverse.perm[self.group.datum.simple_root_index[i - 1]] < 0

    def reduced_word(self) -> tuple[int, ...]:
        """Lexicographically smallest reduced word (1-based node labels)."""
        w, word = self, []
        while w.length:
            i = next(i for i in range(1, self.group.datum.rank + 1) if w.has_left_descent(i))
            word.append(i)
            w = self.group.simple[i - 1] * w
        return tuple(word)


class WeylGroup:
    """The full finite Weyl group, enumerated once and immutable afterwards."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        n = len(datum.positive_roots)
        self.elements: list[WeylElement] = []
        self._by_perm: dict[Vector, WeylElement] = {}

        identity = self._intern(tuple(range(1, n + 1)))
        simple_perms = []
        for i in range(datum.rank):
            perm = []
            for k in range(n):
                root = datum.positive_roots[k]
                pr = sum(c * datum.cartan[i][j] for j, c in enumerate(root))
                image = tuple(c - (pr if j == i else 0) for j, c in enumerate(root))
                if all(c <= 0 for c in image):
                    perm.append(-(datum._root_index[tuple(-c for c in image)] + 1))
                else:
                    perm.append(datum._root_index[image] + 1)
            simple_perms.append(tuple(perm))
        self.simple = tuple(self._intern(p) for p in simple_perms)

        identity._inverse_index = identity.index
        for s in self.simple:
            s._inverse_index = s.index
        queue = deque([identity, *self.simple])
        while queue:
            w = queue.popleft()
            for s in self.simple:
                perm = self._compose(w.perm, s.perm)
                if perm not in self._by_perm:
                    new = self._intern(perm)
                    # (w s)^-1 = s w^-1, and w^-1 is already interned
                    inv_perm = self._compose(s.perm, w.inverse.perm)
                    if inv_perm == perm:
                        new._inverse_index = new.index
                    else:
                        inv = self._intern(inv_perm)
                        inv._inverse_index = new.index
                        new._inverse_index = inv.index
                        queue.append(inv)
                    queue.append(new)
        self.identity = identity
        self.longest = max(self.elements, key=lambda w: w.length)
        if self.longest.length != n:
            raise InternalError("longest element length != number of positive roots")
        self._reflections: dict[int, WeylElement] = {}

    def _intern(self, perm: Vector) -> WeylElement:
        el = self._by_perm.get(perm)
        if el is None:
            el = WeylElement(self, perm, len(self.elements))
            self.elements.append(el)
            self._by_perm[perm] = el
        return el

    @staticmethod
    def _compose(outer: Vector, inner: Vector) -> Vector:
        # (outer . inner)(beta_k) = outer(inner(beta_k))
        out = []
        for v in inner:
            w = outer[abs(v) - 1]
            out.append(w if v > 0 else -w)
        return tuple(out)

    def product(self, w: WeylElement, v: WeylElement) -> WeylElement:
        perm = self._compose(w.perm, v.perm)
        el = self._by_perm.get(perm)
        if el is None:
            raise InternalError("product fell outside the enumerated group")
        return el

    def __len__(self) -> int:
        return len(self.elements)

    def reflection(self, root_index: int) -> WeylElement:
        """The reflection r_beta for a positive root, as a group element."""
        el = self._reflections.get(root_index)
        if el is None:
            datum = self.datum
            perm = []
            for k in range(len(datum.positive_roots)):
                c = datum.pairing_roots(root_index, k)
                beta = datum.positive_roots[root_index]
                image = tuple(
                    x - c * b for x, b in zip(datum.positive_roots[k], beta)
                )
                if all(x <= 0 for x in image):
                    perm.append(-(datum._root_index[tuple(-x for x in image)] + 1))
                else:
                    perm.append(datum._root_index[image] + 1)
            el = self._by_perm[tuple(perm)]
            self._reflections[root_index] = el
        return el

    def min_coset_rep(self, w: WeylElement, J: frozenset[int]) -> WeylElement:
        """Minimum-length element of the coset w W_J."""
        changed = True
        while changed:
            changed = False
            for i in J:
                if w.has_right_descent(i):
                    w = w * self.simple[i - 1]
                    changed = True
        return w

    def coset_reps(self, J: frozenset[int]) -> tuple[WeylElement, ...]:
        """All of W^J in a canonical (length, permutation) order."""
        if not all(1 <= j <= self.datum.rank for j in J):
            raise InputError(f"node set {sorted(J)} out of range")
        reps = [
            w
            for w in self.elements
            if not any(w.has_right_descent(i) for i in J)
        ]
        return tuple(sorted(reps, key=lambda w: (w.length, w.perm)))

    def parabolic_longest(self, J: frozenset[int]) -> WeylElement:
        """Longest element of W_J, via w_0 = min_coset_rep(w_0, J) * w_J."""
        return self.min_coset_rep(self.longest, J).inverse * self.longest

    def bruhat_covers(self, w: WeylElement) -> tuple[WeylElement, ...]:
        out = []
        for k in range(len(self.datum.positive_roots)):
            v = w * self.reflection(k)
            if v.length == w.length + 1:
                out.append(v)
        return tuple(sorted(out, key=lambda v: v.perm))

    @cached_property
    def omega(self) -> tuple[int, ...]:
        """Diagram automorphism with w_0(alpha_i) = -alpha_{omega(i)}, 1-based."""
        datum = self.datum
        out = []
        for i in range(datum.rank):
            v = self.longest.perm[datum.simple_root_index[i]]
            if v >= 0:
                raise InternalError("longest element must negate simple roots")
            image = datum.positive_roots[-v - 1]
            if sum(image) != 1:
                raise InternalError("w_0 image of a simple root is not simple")
            out.append(image.index(1) + 1)
        return tuple(out)
