"""Finite groups given by Cayley tables, subgroups, homomorphisms, templates,
tuple arithmetic on direct powers, coset representatives, and folding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapExceeded,
    InvalidParams,
    NoExtension,
    NoIdentity,
    NoInverse,
    NotAssociative,
    table_cap,
)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group: element labels plus a validated Cayley table.

    Elements are identified by their index; labels are presentation only.
    ``table[i][j]`` is the index of ``e_i * e_j``.
    """

    name: str
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverses: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def pow_sign(self, i: int, s: int) -> int:
        """``i`` raised to ``s`` for ``s`` in {-1, +1}."""
        return i if s == 1 else self.inverses[i]

    def cube(self, i: int) -> int:
        return self.table[self.table[i][i]][i]

    def element_order(self, i: int) -> int:
        x, n = i, 1
        while x != self.identity:
            x = self.table[x][i]
            n += 1
        return n

    def label(self, i: int) -> str:
        return self.elements[i]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order {len(self)})"


def make_group(elements, table, name: str = "group") -> FiniteGroup:
    """Validate a Cayley table and return the group it defines.

    Raises NoIdentity, NoInverse, or NotAssociative (naming the offending
    element or triple) when the table is not a group.
    """
    n = len(table)
    if elements is None:
        elements = [f"g{i}" for i in range(n)]
    if len(elements) != n:
        raise InvalidParams(f"{len(elements)} labels for a {n}x{n} table")
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n):
        raise InvalidParams(f"table must be square, got shape {t.shape}")
    if n == 0:
        raise InvalidParams("empty table")
    if t.min() < 0 or t.max() >= n:
        raise InvalidParams("table entries out of range")

    identity = -1
    for i in range(n):
        if all(t[i, j] == j for j in range(n)):
            identity = i
            break
    if identity < 0:
        raise NoIdentity()

    inverses = []
    for i in range(n):
        inv = next(
            (j for j in range(n) if t[i, j] == identity and t[j, i] == identity),
            None,
        )
        if inv is None:
            raise NoInverse(i)
        inverses.append(inv)

    # (i*j)*k vs i*(j*k), exhaustively; fine for |G| <= 64
    left = t[t, :]
    right = t[:, t]
    if not np.array_equal(left, right):
        i, j, k = map(int, np.argwhere(left != right)[0])
        raise NotAssociative(i, j, k)
    if any(t[j, identity] != j for j in range(n)):
        raise NoIdentity()

    return FiniteGroup(
        name=name,
        elements=tuple(str(e) for e in elements),
        table=tuple(tuple(int(x) for x in row) for row in t),
        identity=identity,
        inverses=tuple(inverses),
    )


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` as a sorted set of element indices."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self._member_set()

    def _member_set(self):
        return frozenset(self.members)

    def as_group(self, name: str | None = None) -> FiniteGroup:
        """The subgroup as a standalone group (members re-indexed 0..|H|-1)."""
        pos = {m: k for k, m in enumerate(self.members)}
        table = [
            [pos[self.parent.mul(a, b)] for b in self.members] for a in self.members
        ]
        labels = [self.parent.elements[m] for m in self.members]
        return make_group(labels, table, name or f"{self.parent.name}-sub")


def subgroup(parent: FiniteGroup, members) -> Subgroup:
    """Wrap a member set as a Subgroup, checking the subgroup axioms."""
    ms = frozenset(int(m) for m in members)
    if parent.identity not in ms:
        raise InvalidParams("subgroup must contain the identity")
    for a in ms:
        if parent.inv(a) not in ms:
            raise InvalidParams(f"subgroup not closed under inverse: {a}")
        for b in ms:
            if parent.mul(a, b) not in ms:
                raise InvalidParams(f"subgroup not closed under product: ({a},{b})")
    return Subgroup(parent, tuple(sorted(ms)))


def subgroup_closure(group: FiniteGroup, seeds) -> Subgroup:
    """Least subgroup containing ``seeds``: closure under product and inverse."""
    members = {group.identity}
    frontier = [int(s) for s in seeds]
    for s in frontier:
        if not 0 <= s < len(group):
            raise InvalidParams(f"seed {s} out of range")
    while frontier:
        x = frontier.pop()
        if x in members:
            continue
        members.add(x)
        frontier.append(group.inv(x))
        # products against every element present at insertion time; later
        # insertions enqueue their products with x in turn
        for y in list(members):
            frontier.append(group.mul(x, y))
            frontier.append(group.mul(y, x))
    return Subgroup(group, tuple(sorted(members)))


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (group.identity,))


def full_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, tuple(range(len(group))))


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism from a subgroup of one group into another group."""

    source: Subgroup
    target: FiniteGroup
    mapping: tuple[tuple[int, int], ...]  # (element of source, image in target)

    def apply(self, i: int) -> int:
        for a, b in self.mapping:
            if a == i:
                return b
        raise InvalidParams(f"element {i} outside the domain")

    @property
    def image(self) -> Subgroup:
        return subgroup(self.target, {b for _, b in self.mapping})

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)


def make_homomorphism(source: Subgroup, target: FiniteGroup, mapping) -> Homomorphism:
    """Validate ``mapping`` (element index -> element index) as a homomorphism."""
    m = {int(k): int(v) for k, v in dict(mapping).items()}
    if set(m) != set(source.members):
        raise InvalidParams("mapping must be defined exactly on the domain subgroup")
    for v in m.values():
        if not 0 <= v < len(target):
            raise InvalidParams(f"image {v} out of range")
    g1 = source.parent
    for a in source.members:
        for b in source.members:
            if m[g1.mul(a, b)] != target.mul(m[a], m[b]):
                raise InvalidParams(
                    f"not a homomorphism: phi({a}*{b}) != phi({a})*phi({b})"
                )
    return Homomorphism(source, target, tuple(sorted(m.items())))


def identity_hom(h: Subgroup) -> Homomorphism:
    """The identity map on ``h``, viewed into its parent group."""
    return Homomorphism(h, h.parent, tuple((m, m) for m in h.members))


@dataclass(frozen=True)
class Template:
    """Two groups and a subgroup homomorphism that extends to all of g1.

    ``h1`` is the domain of ``phi``, ``h2`` its image, and ``witness`` a full
    homomorphism g1 -> g2 agreeing with ``phi`` on ``h1``.
    """

    name: str
    g1: FiniteGroup
    g2: FiniteGroup
    phi: Homomorphism
    h1: Subgroup
    h2: Subgroup
    witness: tuple[int, ...]

    @property
    def trivially_tractable(self) -> bool:
        """Image of phi is the trivial subgroup; every system is vacuous."""
        return len(self.h2) == 1


def _generating_set(group: FiniteGroup) -> list[int]:
    gens: list[int] = []
    closure = {group.identity}
    while len(closure) < len(group):
        nxt = min(i for i in range(len(group)) if i not in closure)
        gens.append(nxt)
        closure = set(subgroup_closure(group, gens).members)
    return gens


def _words(group: FiniteGroup, gens: list[int]) -> list[tuple[int, ...]]:
    """A word over generator positions for every element, by BFS."""
    words: dict[int, tuple[int, ...]] = {group.identity: ()}
    queue = [group.identity]
    while queue:
        x = queue.pop(0)
        for k, g in enumerate(gens):
            y = group.mul(x, g)
            if y not in words:
                words[y] = words[x] + (k,)
                queue.append(y)
    if len(words) != len(group):
        raise InvalidParams("generating set does not generate")  # pragma: no cover
    return [words[i] for i in range(len(group))]


def validate_template(
    g1: FiniteGroup, g2: FiniteGroup, phi: Homomorphism, name: str = "template"
) -> Template:
    """Check that ``phi`` extends to a full homomorphism g1 -> g2.

    Searches images of a small generating set of g1 (pruned by element-order
    divisibility) in lexicographic order and returns the first witness found.
    Raises NoExtension when no extension exists.
    """
    if phi.source.parent is not g1 and phi.source.parent != g1:
        raise InvalidParams("phi's domain must be a subgroup of g1")
    if phi.target is not g2 and phi.target != g2:
        raise InvalidParams("phi must map into g2")
    phi_map = phi.as_dict()

    gens = _generating_set(g1)
    words = _words(g1, gens)
    orders1 = [g1.element_order(g) for g in gens]
    candidates = [
        [y for y in range(len(g2)) if g1order % g2.element_order(y) == 0]
        for g1order in orders1
    ]

    for images in itertools.product(*candidates):
        psi = []
        for w in words:
            x = g2.identity
            for k in w:
                x = g2.mul(x, images[k])
            psi.append(x)
        if any(psi[h] != phi_map[h] for h in phi.source.members):
            continue
        ok = all(
            psi[g1.mul(a, b)] == g2.mul(psi[a], psi[b])
            for a in range(len(g1))
            for b in range(len(g1))
        )
        if ok:
            return Template(
                name=name,
                g1=g1,
                g2=g2,
                phi=phi,
                h1=phi.source,
                h2=phi.image,
                witness=tuple(psi),
            )
    raise NoExtension(f"{name}: no full homomorphism extends phi")


class GroupPower:
    """The direct power ``G^D`` for an ordered index set ``D``.

    Tuples are flat-encoded in row-major order (first index most
    significant), so ordering flat indices is ordering tuples
    lexicographically under element-index order.
    """

    def __init__(self, group: FiniteGroup, labels, cap: int | None = None):
        self.group = group
        self.labels = tuple(str(x) for x in labels)
        self.m = len(self.labels)
        if self.m == 0:
            raise InvalidParams("index set must be non-empty")
        self.n = len(group) ** self.m
        limit = table_cap(cap)
        if self.n > limit:
            raise CapExceeded(
                f"|G|^|D| = {self.n} exceeds the table cap {limit}"
            )
        base = len(group)
        self._weights = [base ** (self.m - 1 - k) for k in range(self.m)]
        idx = np.arange(self.n)
        self._coords = np.stack([(idx // w) % base for w in self._weights], axis=1)

    def coords(self, idx: int) -> tuple[int, ...]:
        out = []
        for w in self._weights:
            out.append(idx // w)
            idx %= w
        return tuple(out)

    def index(self, coords) -> int:
        return sum(int(c) * w for c, w in zip(coords, self._weights))

    @property
    def identity_index(self) -> int:
        return self.index([self.group.identity] * self.m)

    def mul(self, i: int, j: int) -> int:
        t = self.group.table
        return self.index(
            [t[a][b] for a, b in zip(self.coords(i), self.coords(j))]
        )

    def inv(self, i: int) -> int:
        inv = self.group.inverses
        return self.index([inv[a] for a in self.coords(i)])

    def pow_sign(self, i: int, s: int) -> int:
        return i if s == 1 else self.inv(i)

    def act(self, h: int, i: int) -> int:
        """Diagonal left action: multiply every coordinate by ``h``."""
        t = self.group.table
        return self.index([t[h][a] for a in self.coords(i)])

    def coords_matrix(self) -> np.ndarray:
        return self._coords

    def inv_array(self) -> np.ndarray:
        inv = np.asarray(self.group.inverses)
        return self.encode(inv[self.coords_matrix()])

    def mul_with(self, i: int, idx: np.ndarray) -> np.ndarray:
        """Flat indices of ``tuple(i) * tuple(j)`` for all j in ``idx``."""
        t = np.asarray(self.group.table)
        a = np.asarray(self.coords(i))
        return self.encode(t[a[None, :], self.coords_matrix()[idx]])

    def mul_all_right(self, j: int) -> np.ndarray:
        """Flat indices of ``tuple(i) * tuple(j)`` for every i in order."""
        t = np.asarray(self.group.table)
        b = np.asarray(self.coords(j))
        return self.encode(t[self.coords_matrix(), b[None, :]])

    def encode(self, coords: np.ndarray) -> np.ndarray:
        w = np.asarray(self._weights)
        return coords @ w

    def compose_positions(self, pi: dict[str, str], e_labels) -> list[int]:
        """For each of our labels d, the position of pi(d) in ``e_labels``."""
        epos = {str(l): k for k, l in enumerate(e_labels)}
        out = []
        for d in self.labels:
            if d not in pi:
                raise InvalidParams(f"projection map misses label {d}")
            out.append(epos[str(pi[d])])
        return out


@dataclass(frozen=True)
class GroupTuple:
    """A tuple in a direct power, stored by its flat index."""

    power: GroupPower
    flat: int

    @property
    def coords(self) -> tuple[int, ...]:
        return self.power.coords(self.flat)


class CosetDecomposition:
    """Right-coset data for a subgroup acting diagonally on a power.

    For a queried tuple ``g`` returns the representative ``g_dag`` (the
    lexicographically least tuple in the coset ``H*g``) and the witness
    ``h`` in H with ``g_dag = h * g``. Computed on demand and cached; the
    full coset structure of the power is never materialized.
    """

    def __init__(self, sub: Subgroup, power: GroupPower):
        if sub.parent != power.group:
            raise InvalidParams("subgroup and power must share a group")
        self.subgroup = sub
        self.power = power
        self._cache: dict[int, tuple[int, int]] = {}

    def data(self, flat: int) -> tuple[int, int]:
        hit = self._cache.get(flat)
        if hit is not None:
            return hit
        best = None
        best_h = None
        for h in self.subgroup.members:
            cand = self.power.act(h, flat)
            if best is None or cand < best:
                best, best_h = cand, h
        out = (best, best_h)
        self._cache[flat] = out
        return out


def coset_data(sub: Subgroup, g: GroupTuple) -> tuple[GroupTuple, int]:
    """Representative and witness for the coset of ``g`` under ``sub``."""
    rep, h = CosetDecomposition(sub, g.power).data(g.flat)
    return GroupTuple(g.power, rep), h


def fold(values, power: GroupPower, phi: Homomorphism) -> np.ndarray:
    """Fold a table ``G1^N -> G2`` over ``phi``.

    The result f' satisfies f'(h*g) = phi(h) * f'(g) for every h in the
    domain subgroup. Folding is idempotent.
    """
    g2 = phi.target
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (power.n,):
        raise InvalidParams(f"table must have {power.n} entries")
    cosets = CosetDecomposition(phi.source, power)
    phi_map = phi.as_dict()
    out = np.empty(power.n, dtype=np.int64)
    for g in range(power.n):
        rep, h = cosets.data(g)
        out[g] = g2.mul(g2.inv(phi_map[h]), int(vals[rep]))
    return out


def cube_image(group: FiniteGroup) -> frozenset[int]:
    return frozenset(group.cube(g) for g in range(len(group)))


def is_cubic(template: Template) -> bool:
    """True iff every element of Im(phi) has a cube root in g2."""
    cubes = cube_image(template.g2)
    return all(h in cubes for h in template.h2.members)


def is_unsatisfiable_equation(eq, template: Template) -> bool:
    """True iff ``eq`` is x^3 = h or x^-3 = h with phi(h)^{+-1} not a cube.

    ``eq`` must expose ``terms`` (three (variable, exponent) pairs) and
    ``rhs`` (an element of Dom(phi)).
    """
    variables = {v for v, _ in eq.terms}
    exponents = [s for _, s in eq.terms]
    if len(variables) != 1:
        return False
    if exponents not in ([1, 1, 1], [-1, -1, -1]):
        return False
    g2 = template.g2
    target = template.phi.apply(eq.rhs)
    if exponents[0] == -1:
        target = g2.inv(target)
    return target not in cube_image(g2)
