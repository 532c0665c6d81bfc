"""Truncated tower presentations of locally finite groups.

An infinite locally finite group enters the desk-scale world as a tower:
finitely many finite levels G_1 -> G_2 -> ... -> G_N with injective
connecting homomorphisms, standing for the union of the chain.  Every
operation in this module answers for the truncation only.  Verdicts carry
"verified up to depth N" semantics, quantities that should eventually
freeze come wrapped in a :class:`StabilizationCertificate`, and nothing is
ever claimed about the limit itself.  Torus identifications are declared
metadata (:class:`TorusData`), never inferred: identity components are a
limit notion and any truncation-side inference would be a guess.

Levels are 0-indexed throughout the API; prose about "level i" in reports
uses the same indexing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace

from .config import DEFAULT, Bounds
from .errors import (
    BoundExceeded,
    ImpossibleSylowChain,
    InputError,
    InternalCheckError,
)
from . import groups as gp
from . import fusion
from .fusion import Morphism

# Embedding validation walks every (element, generator) pair.  Past this
# many pairs the walk switches to a seeded sample; builders that construct
# maps by formula stay honest while order-10^5 levels stay loadable.
_FULL_EMBED_CHECK = 400_000
_EMBED_SAMPLE = 4_000


def _require_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InputError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# homomorphism extension


def extend_hom(
    G: gp.FiniteGroup, H: gp.FiniteGroup, gen_images: dict[int, int]
) -> list[int]:
    """Extend a map on generators of G to the full homomorphism G -> H.

    Walks G breadth-first from the identity; every (element, generator)
    pair is either used to define a new image or checked against the
    existing one, which is exactly the consistency needed for the result
    to be a homomorphism on all of G.  Raises InputError if the given
    elements do not generate G or the map extends to no homomorphism.
    """
    for g, h in gen_images.items():
        if not (0 <= g < G.order) or not (0 <= h < H.order):
            raise InputError("generator image out of range")
    images: dict[int, int] = {0: 0}
    frontier = [0]
    pairs = list(gen_images.items())
    while frontier:
        nxt = []
        for x in frontier:
            fx = images[x]
            for g, hg in pairs:
                y = G.mult(x, g)
                fy = H.mult(fx, hg)
                got = images.get(y)
                if got is None:
                    images[y] = fy
                    nxt.append(y)
                elif got != fy:
                    raise InputError(
                        "generator images do not extend to a homomorphism"
                    )
        frontier = nxt
    if len(images) != G.order:
        raise InputError(
            f"given elements generate only {len(images)} of {G.order} elements"
        )
    return [images[x] for x in range(G.order)]


def _validate_embedding(
    G: gp.FiniteGroup, H: gp.FiniteGroup, m, bounds: Bounds
) -> None:
    if len(m) != G.order:
        raise InputError("embedding length disagrees with the level order")
    if m[0] != 0:
        raise InputError("embedding does not fix the identity")
    if any(not (0 <= y < H.order) for y in m):
        raise InputError("embedding image out of range")
    if len(set(m)) != G.order:
        raise InputError("embedding is not injective")
    gens = G.generators
    if G.order * max(len(gens), 1) <= _FULL_EMBED_CHECK:
        pairs = ((x, g) for x in G.elements for g in gens)
    else:
        rng = random.Random(0)
        sample = {(rng.randrange(G.order), g) for g in gens for _ in range(
            _EMBED_SAMPLE // max(len(gens), 1)
        )}
        sample.update((g, h) for g in gens for h in gens)
        pairs = sample
    for x, g in pairs:
        if m[G.mult(x, g)] != H.mult(m[x], m[g]):
            raise InputError("embedding is not a homomorphism")


# ---------------------------------------------------------------------------
# certificates


@dataclass
class StabilizationCertificate:
    """A per-level sequence of values plus where (if anywhere) it froze.

    ``stabilized_at`` is the least level k such that the values are
    constant from k through the end of the sequence with at least
    ``window`` + 1 of them to look at; None when no such level exists.
    Truthiness is the stabilization verdict.
    """

    quantity: str
    values: list
    window: int
    details: dict = field(default_factory=dict)
    stabilized_at: int | None = None

    def __post_init__(self) -> None:
        self.values = list(self.values)
        self.stabilized_at = None
        n = len(self.values)
        for k in range(n):
            tail = self.values[k:]
            if len(tail) >= self.window + 1 and all(v == tail[0] for v in tail):
                self.stabilized_at = k
                break

    def __bool__(self) -> bool:
        return self.stabilized_at is not None

    def describe(self) -> str:
        status = (
            f"stabilized at level {self.stabilized_at}"
            if self.stabilized_at is not None
            else "not stabilized"
        )
        return f"{self.quantity}: {self.values} ({status}, window {self.window})"


# ---------------------------------------------------------------------------
# towers


class TowerGroup:
    """Finitely many finite levels with injective connecting homomorphisms.

    ``maps[i]`` sends level i into level i+1 as a full element-image list.
    ``kind`` is "ambient" for a general tower and "p-tower" when every
    level is a p-group (enforced).  Immutable after validation.
    """

    def __init__(
        self,
        levels,
        maps,
        p: int,
        kind: str = "ambient",
        bounds: Bounds = DEFAULT,
    ) -> None:
        _require_prime(p)
        levels = list(levels)
        maps = [list(m) for m in maps]
        if not levels:
            raise InputError("a tower needs at least one level")
        if len(maps) != len(levels) - 1:
            raise InputError(
                f"{len(levels)} levels need {len(levels) - 1} embeddings,"
                f" got {len(maps)}"
            )
        if kind not in ("ambient", "p-tower"):
            raise InputError(f"unknown tower kind {kind!r}")
        if kind == "p-tower":
            for i, G in enumerate(levels):
                if not gp.is_p_group_order(G.order, p):
                    raise InputError(
                        f"level {i} has order {G.order}, not a power of {p}"
                    )
        for i, m in enumerate(maps):
            if levels[i] is levels[i + 1] and m == list(range(levels[i].order)):
                continue  # identity step of a constant tower
            _validate_embedding(levels[i], levels[i + 1], m, bounds)
        self._levels = levels
        self._maps = maps
        self.p = p
        self.kind = kind
        self.bounds = bounds

    @property
    def depth(self) -> int:
        return len(self._levels)

    def level(self, i: int) -> gp.FiniteGroup:
        if not (0 <= i < self.depth):
            raise InputError(f"level {i} outside 0..{self.depth - 1}")
        return self._levels[i]

    @property
    def top(self) -> gp.FiniteGroup:
        return self._levels[-1]

    def element_map(self, i: int) -> list[int]:
        """Images of level i elements inside level i+1."""
        if not (0 <= i < self.depth - 1):
            raise InputError(f"no embedding at step {i}")
        return self._maps[i]

    def push(self, i: int, j: int, x: int) -> int:
        """Image of element x of level i inside level j >= i."""
        if not (0 <= i <= j < self.depth):
            raise InputError("bad level pair")
        for k in range(i, j):
            x = self._maps[k][x]
        return x

    def push_set(self, i: int, j: int, members) -> frozenset[int]:
        return frozenset(self.push(i, j, x) for x in members)

    def at_top(self, i: int, members=None) -> frozenset[int]:
        if members is None:
            members = self._levels[i].elements
        return self.push_set(i, self.depth - 1, members)

    def __repr__(self) -> str:
        orders = ",".join(str(G.order) for G in self._levels)
        return f"TowerGroup(p={self.p}, {self.kind}, orders [{orders}])"


class SubTower:
    """Level-wise subgroups of a tower, compatible with the embeddings.

    ``members[i]`` is a subgroup of level i whose image under the step
    embedding lands in ``members[i+1]``; both facts are validated here, so
    the rest of the module can trust any SubTower it is handed.
    """

    def __init__(self, tower: TowerGroup, members) -> None:
        members = tuple(frozenset(m) for m in members)
        if len(members) != tower.depth:
            raise InputError("one member set per level is required")
        for i, mem in enumerate(members):
            G = tower.level(i)
            if any(not (0 <= x < G.order) for x in mem):
                raise InputError(f"level {i} member outside the group")
            if not gp.is_subgroup(G, mem):
                raise InputError(f"level {i} member set is not a subgroup")
        for i in range(tower.depth - 1):
            if not tower.push_set(i, i + 1, members[i]) <= members[i + 1]:
                raise InputError(
                    f"level {i} members do not embed into level {i + 1} members"
                )
        self.tower = tower
        self.members = members
        self._groups: dict[int, tuple[gp.TableGroup, list[int]]] = {}

    @property
    def depth(self) -> int:
        return self.tower.depth

    def level_members(self, i: int) -> frozenset[int]:
        if not (0 <= i < self.depth):
            raise InputError(f"level {i} outside 0..{self.depth - 1}")
        return self.members[i]

    def level_group(self, i: int) -> tuple[gp.TableGroup, list[int]]:
        if i not in self._groups:
            self._groups[i] = gp.sub_as_group(self.tower.level(i), self.members[i])
        return self._groups[i]

    @property
    def top_members(self) -> frozenset[int]:
        return self.members[-1]

    def at_top(self, i: int) -> frozenset[int]:
        return self.tower.push_set(i, self.depth - 1, self.members[i])

    def order_sequence(self) -> list[int]:
        return [len(m) for m in self.members]

    def eventually_constant(self, window: int | None = None) -> int | None:
        """Least level from which each step maps members onto members,
        certified with the usual window: the constant tail must be long
        enough to trust, so a strictly growing chain never counts as a
        finite subgroup just because the truncation ran out of steps."""
        w = self.tower.bounds.window if window is None else window
        cert = StabilizationCertificate(
            "handle member orders", self.order_sequence(), w
        )
        return cert.stabilized_at

    def as_tower(self, kind: str = "p-tower") -> TowerGroup:
        """The members as a standalone tower (default: claim a p-tower)."""
        levels = []
        ambs = []
        for i in range(self.depth):
            Hi, amb = self.level_group(i)
            levels.append(Hi)
            ambs.append(amb)
        maps = []
        for i in range(self.depth - 1):
            step = self.tower.element_map(i)
            lookup = {a: k for k, a in enumerate(ambs[i + 1])}
            maps.append([lookup[step[a]] for a in ambs[i]])
        return TowerGroup(levels, maps, self.tower.p, kind, self.tower.bounds)

    def __repr__(self) -> str:
        return f"SubTower(orders {self.order_sequence()})"


def truncate(T: TowerGroup, depth: int) -> TowerGroup:
    """The first ``depth`` levels as a tower in their own right."""
    d = min(depth, T.depth)
    if d < 1:
        raise InputError("depth must be at least 1")
    if d == T.depth:
        return T
    return TowerGroup(
        [T.level(i) for i in range(d)],
        [T.element_map(i) for i in range(d - 1)],
        T.p,
        T.kind,
        T.bounds,
    )


def truncate_sub(S: SubTower, depth: int) -> SubTower:
    d = min(depth, S.depth)
    return SubTower(truncate(S.tower, d), S.members[:d])


def full_subtower(T: TowerGroup) -> SubTower:
    return SubTower(T, [frozenset(G.elements) for G in (T.level(i) for i in range(T.depth))])


def trivial_subtower(T: TowerGroup) -> SubTower:
    return SubTower(T, [frozenset({0})] * T.depth)


class TorusData:
    """A declared torus approximant: an abelian sub-tower plus the rank the
    user asserts for the limit.  The chain must be nested (SubTower already
    guarantees that) and its exponents may grow at most by p per level, up
    to the constant fixed by the first level."""

    def __init__(self, sub: SubTower, declared_rank: int) -> None:
        if declared_rank < 0:
            raise InputError("inconsistent torus data: negative rank")
        p = sub.tower.p
        base = None
        for i in range(sub.depth):
            G = sub.tower.level(i)
            mem = sub.members[i]
            if not gp.is_abelian_subset(G, mem):
                raise InputError(f"inconsistent torus data: level {i} not abelian")
            e = G.exponent_of(mem)
            if base is None:
                base = e
            if (p**i * base) % e != 0:
                raise InputError(
                    f"inconsistent torus data: exponent {e} at level {i} grows"
                    f" faster than p per level"
                )
        self.sub = sub
        self.rank = declared_rank

    def __repr__(self) -> str:
        return f"TorusData(rank={self.rank}, orders {self.sub.order_sequence()})"


@dataclass(frozen=True, order=True)
class POrder:
    """Size surrogate for a tower-presented p-group: (torus rank, index of
    the torus part).  Field order gives the lexicographic comparison."""

    rank: int
    index: int


def p_order(
    S: SubTower, torus: TorusData, at: int, bounds: Bounds = DEFAULT
) -> POrder:
    """(declared rank, |S_at : T_at|), after checking the index sequence is
    stable: a torus declaration whose index keeps moving is inconsistent."""
    if torus.sub.tower is not S.tower:
        raise InputError("torus data lives on a different tower")
    if not (0 <= at < S.depth):
        raise InputError(f"level {at} outside 0..{S.depth - 1}")
    indices = []
    for i in range(S.depth):
        t = torus.sub.members[i]
        s = S.members[i]
        if not t <= s:
            raise InputError(f"inconsistent torus data: T_{i} not inside S_{i}")
        indices.append(len(s) // len(t))
    cert = StabilizationCertificate(
        "torus index |S_i : T_i|", indices, bounds.window
    )
    if not cert:
        raise InputError(
            f"inconsistent torus data: index sequence {indices} never stabilizes"
        )
    return POrder(torus.rank, indices[at])


# ---------------------------------------------------------------------------
# stock towers used across tests, docs, and the corpus


def constant_tower(
    G: gp.FiniteGroup, depth: int, p: int, kind: str = "ambient",
    bounds: Bounds = DEFAULT,
) -> TowerGroup:
    ident = list(range(G.order))
    return TowerGroup([G] * depth, [ident] * (depth - 1), p, kind, bounds)


def cyclic_tower(p: int, depth: int, bounds: Bounds = DEFAULT) -> TowerGroup:
    """C_p <= C_{p^2} <= ... with the generator mapping to the p-th power."""
    _require_prime(p)
    levels = [gp.cyclic(p**i) for i in range(1, depth + 1)]
    maps = []
    for i in range(depth - 1):
        g, h = levels[i], levels[i + 1]
        maps.append(extend_hom(g, h, {g.generators[0]: h.power(h.generators[0], p)}))
    return TowerGroup(levels, maps, p, "p-tower", bounds)


def dihedral_tower(
    p: int, depth: int, start: int = 1, bounds: Bounds = DEFAULT
) -> TowerGroup:
    """Dihedral groups over rotation groups C_{p^i}, i = start..start+depth-1,
    rotations mapping to p-th powers and the base reflection fixed.  The
    truncation of Z/p^infty extended by inversion."""
    _require_prime(p)
    if p == 2 and start < 2:
        start = 2  # order-4 "dihedral" is Klein; start the chain at D_8
    levels = [gp.dihedral(2 * p**i) for i in range(start, start + depth)]
    maps = []
    for i in range(depth - 1):
        g, h = levels[i], levels[i + 1]
        r, s = g.generators[0], g.generators[1]
        rh, sh = h.generators[0], h.generators[1]
        maps.append(extend_hom(g, h, {r: h.power(rh, p), s: sh}))
    kind = "p-tower" if p == 2 else "ambient"
    return TowerGroup(levels, maps, p, kind, bounds)


def rotation_subtower(T: TowerGroup) -> SubTower:
    """The rotation subgroups of a dihedral tower, as a sub-tower."""
    members = []
    for i in range(T.depth):
        G = T.level(i)
        members.append(gp.subgroup_generated(G, [G.generators[0]]))
    return SubTower(T, members)


def psl27(bounds: Bounds = DEFAULT) -> gp.PermGroup:
    """PSL(2,7) as Moebius maps z -> z+1, z -> -1/z on the projective line
    over F_7 (point 7 is infinity)."""
    shift = (1, 2, 3, 4, 5, 6, 0, 7)
    flip = (7, 6, 3, 2, 5, 4, 1, 0)
    G = gp.PermGroup([shift, flip], 8, bounds)
    if G.order != 168:
        raise InternalCheckError("PSL(2,7) construction came out wrong")
    return G


# ---------------------------------------------------------------------------
# weakly Sylow chains


def weakly_sylow(T: TowerGroup, p: int | None = None, bounds: Bounds = DEFAULT) -> SubTower:
    """A nested chain of Sylow p-subgroups S_i <= G_i along the tower.

    Each level's Sylow subgroup is conjugated so that it contains the image
    of the previous one; Sylow conjugacy guarantees such an adjustment
    exists, so an empty transporter is a bug sentinel, not a verdict.
    """
    if p is None:
        p = T.p
    _require_prime(p)
    if T.kind == "p-tower" and p == T.p:
        return full_subtower(T)
    members = [gp.sylow(T.level(0), p, bounds)]
    for i in range(T.depth - 1):
        H = T.level(i + 1)
        image = T.push_set(i, i + 1, members[-1])
        cand = gp.sylow(H, p, bounds)
        if image <= cand:
            members.append(cand)
            continue
        movers = gp.transporter(H, image, cand)
        if not movers:
            raise ImpossibleSylowChain(
                f"no conjugate of the level-{i + 1} Sylow subgroup contains"
                f" the image of S_{i}; this should be impossible"
            )
        g = movers[0]
        members.append(gp.conjugate_subgroup(H, H.inv(g), cand))
    return SubTower(T, members)


# ---------------------------------------------------------------------------
# inverse systems of finite group-sets


class InverseSystem:
    """Finite sets X_0, X_1, ... with maps X_{i+1} -> X_i and a common
    finite acting group, everything given extensionally.

    ``maps[i][x]`` is the image in X_i of x in X_{i+1}; ``actions[i][g]``
    is the permutation of X_i by group element g.  Validation checks the
    action laws and the equivariance of every connecting map, which is the
    entire hypothesis of the limit lemma this feeds.
    """

    def __init__(self, gamma: gp.FiniteGroup, sizes, maps, actions) -> None:
        sizes = list(sizes)
        if not sizes:
            raise InputError("an inverse system needs at least one set")
        if len(maps) != len(sizes) - 1:
            raise InputError("one connecting map per adjacent pair is required")
        if len(actions) != len(sizes):
            raise InputError("one action table per level is required")
        for i, act in enumerate(actions):
            n = sizes[i]
            if len(act) != gamma.order:
                raise InputError(f"level {i}: need a row per group element")
            for g, row in enumerate(act):
                if len(row) != n or sorted(row) != list(range(n)):
                    raise InputError(f"level {i}: row {g} is not a permutation")
            if n and actions[i][0] != list(range(n)):
                raise InputError(f"level {i}: identity must act trivially")
            for g in range(gamma.order):
                for h in range(gamma.order):
                    gh = gamma.mult(g, h)
                    for x in range(n):
                        if act[g][act[h][x]] != act[gh][x]:
                            raise InputError(
                                f"level {i}: action law fails at ({g},{h},{x})"
                            )
        for i, m in enumerate(maps):
            if len(m) != sizes[i + 1]:
                raise InputError(f"map {i} has the wrong length")
            if any(not (0 <= y < sizes[i]) for y in m):
                raise InputError(f"map {i} image out of range")
            for g in range(gamma.order):
                for x in range(sizes[i + 1]):
                    if m[actions[i + 1][g][x]] != actions[i][g][m[x]]:
                        raise InputError(
                            f"map {i} is not equivariant at ({g},{x})"
                        )
        self.gamma = gamma
        self.sizes = sizes
        self.maps = [list(m) for m in maps]
        self.actions = [[list(r) for r in a] for a in actions]

    @property
    def depth(self) -> int:
        return len(self.sizes)


def _orbits(act, n: int) -> list[int]:
    """Orbit index per point under the listed permutations."""
    label = [-1] * n
    nxt = 0
    for s in range(n):
        if label[s] != -1:
            continue
        stack = [s]
        label[s] = nxt
        while stack:
            x = stack.pop()
            for row in act:
                y = row[x]
                if label[y] == -1:
                    label[y] = nxt
                    stack.append(y)
        nxt += 1
    return label


@dataclass
class LimitReport:
    """Everything the truncated limit lemma asserts, checked extensionally."""

    families: list[tuple[int, ...]]
    lim_nonempty: bool
    empty_levels: list[int]
    free_levelwise: bool
    free_on_limit: bool
    phi_surjective: bool
    phi_injective: bool
    family_orbits: int
    orbit_chains: int
    conclusions: dict[str, bool]


def inverse_limit(sys: InverseSystem, depth: int | None = None) -> LimitReport:
    """Compatible families at the given depth plus the orbit-map record.

    Checks, on this instance: (a) the limit is nonempty when every orbit
    set is (finite and) nonempty, and the induced map Phi from orbits of
    the limit to the limit of the orbit sets is surjective; (b) a level-wise
    free action is free on the limit; (c) Phi is bijective (the acting
    group is finite, hence artinian).  Empty levels short-circuit into an
    empty-limit report.
    """
    d = sys.depth if depth is None else min(depth, sys.depth)
    if d < 1:
        raise InputError("depth must be at least 1")
    sizes = sys.sizes[:d]
    empty_levels = [i for i, n in enumerate(sizes) if n == 0]

    # compatible families are trajectories of top-level points
    families: list[tuple[int, ...]] = []
    if not empty_levels:
        for x in range(sizes[d - 1]):
            fam = [x]
            for i in range(d - 2, -1, -1):
                fam.append(sys.maps[i][fam[-1]])
            families.append(tuple(reversed(fam)))
    lim_nonempty = bool(families)

    G = sys.gamma
    acts = sys.actions

    def act_family(g: int, fam: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(acts[i][g][x] for i, x in enumerate(fam))

    # orbit structure per level and on families
    level_orbit = [_orbits([acts[i][g] for g in range(G.order)], sizes[i]) for i in range(d)]
    fam_index = {fam: k for k, fam in enumerate(families)}
    fam_orbit = _orbits(
        [
            [fam_index[act_family(g, fam)] for fam in families]
            for g in range(G.order)
        ],
        len(families),
    )
    family_orbits = (max(fam_orbit) + 1) if families else 0

    # the limit of the orbit sets: chains of compatible orbits, enumerated
    # as trajectories of top-level orbits through the well-defined induced maps
    chains: set[tuple[int, ...]] = set()
    if not empty_levels:
        for o in set(level_orbit[d - 1]):
            x = level_orbit[d - 1].index(o)
            chain = [o]
            pt = x
            for i in range(d - 2, -1, -1):
                pt = sys.maps[i][pt]
                chain.append(level_orbit[i][pt])
            chains.add(tuple(reversed(chain)))
    orbit_chains = len(chains)

    # Phi sends the orbit of a family to its chain of level orbits
    phi: dict[int, tuple[int, ...]] = {}
    phi_well_defined = True
    for k, fam in enumerate(families):
        chain = tuple(level_orbit[i][x] for i, x in enumerate(fam))
        prev = phi.get(fam_orbit[k])
        if prev is None:
            phi[fam_orbit[k]] = chain
        elif prev != chain:
            phi_well_defined = False
    if not phi_well_defined:
        raise InternalCheckError("orbit map disagrees on a single orbit")
    phi_surjective = set(phi.values()) == chains
    phi_injective = len(set(phi.values())) == len(phi)

    free_levelwise = all(
        acts[i][g][x] != x
        for i in range(d)
        for g in range(1, G.order)
        for x in range(sizes[i])
    )
    free_on_limit = all(
        act_family(g, fam) != fam
        for g in range(1, G.order)
        for fam in families
    )

    conclusions = {
        "a": (lim_nonempty and phi_surjective) if not empty_levels else True,
        "b": free_on_limit if free_levelwise else True,
        "c": (phi_surjective and phi_injective) if not empty_levels else True,
    }
    return LimitReport(
        families=families,
        lim_nonempty=lim_nonempty,
        empty_levels=empty_levels,
        free_levelwise=free_levelwise,
        free_on_limit=free_on_limit,
        phi_surjective=phi_surjective,
        phi_injective=phi_injective,
        family_orbits=family_orbits,
        orbit_chains=orbit_chains,
        conclusions=conclusions,
    )


# ---------------------------------------------------------------------------
# hom sets along a tower, at the top level


def _hom_tuples(
    G: gp.FiniteGroup, P: frozenset[int], target: frozenset[int]
) -> dict[tuple[int, ...], int]:
    """Conjugation maps P -> target induced by G, as image tuples over
    sorted(P), each with one realizing conjugator."""
    dom = tuple(sorted(P))
    gens = gp.small_gens(G, P)
    out: dict[tuple[int, ...], int] = {}
    for g in G.elements:
        if all(G.conj(g, x) in target for x in gens):
            t = tuple(G.conj(g, x) for x in dom)
            if frozenset(t) <= target and t not in out:
                out[t] = g
    return out


def _restrict_tuple(
    dom_small: tuple[int, ...], dom_big: tuple[int, ...], t: tuple[int, ...]
) -> tuple[int, ...]:
    pos = {x: k for k, x in enumerate(dom_big)}
    return tuple(t[pos[x]] for x in dom_small)


def _injective_homs(
    G: gp.FiniteGroup, P: frozenset[int], target: frozenset[int]
) -> list[tuple[int, ...]]:
    """All injective homomorphisms P -> target (as abstract groups living
    inside G), as image tuples over sorted(P).  Brute force sized for the
    small chain tops this module feeds it."""
    Pg, amb = gp.sub_as_group(G, P)
    gens = gp.small_gens(Pg, frozenset(Pg.elements))
    if not gens:  # trivial P
        return [()] if not P else [(0,)]
    tgt = sorted(target)
    cands = []
    for g in gens:
        o = Pg.element_order(g)
        cands.append([y for y in tgt if G.element_order(y) == o])
    dom = tuple(sorted(P))
    pos_of = {amb[k]: k for k in range(Pg.order)}
    out = []
    seen = set()
    for choice in itertools.product(*cands):
        try:
            images = extend_hom(Pg, G, dict(zip(gens, choice)))
        except InputError:
            continue
        if len(set(images)) != Pg.order:
            continue
        if any(y not in target for y in images):
            continue
        t = tuple(images[pos_of[x]] for x in dom)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return sorted(out)


@dataclass
class ClosureFamily:
    """One morphism of the truncated closure: a top-level map all of whose
    proper chain restrictions are realized by conjugation."""

    morphism: Morphism
    restrictions: list[Morphism]
    realized_at_top: bool
    conjugator: int | None
    note: str = ""


@dataclass
class ClosureHomReport:
    families: list[ClosureFamily]
    realized_counts: list[int]
    certificate: StabilizationCertificate
    depth: int


NON_REALIZATION_LABEL = "non-realization verified at top level only"


def closure_hom(
    T: TowerGroup,
    S: SubTower,
    P: SubTower,
    Q: frozenset[int],
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> ClosureHomReport:
    """Morphisms P -> Q of the closure of the tower fusion, at truncation.

    A closure morphism is an injective homomorphism from the top chain
    group into Q whose restriction to every proper chain level is realized
    by a conjugation in the top ambient group.  Maps realized at the top
    come with a conjugator; the rest carry the exhaustive-scan label, since
    a deeper tower could still realize them.  The certificate tracks the
    realized hom-set sizes and where restriction between consecutive ones
    becomes a bijection.
    """
    d = T.depth if depth is None else min(depth, T.depth)
    if d < 1:
        raise InputError("depth must be at least 1")
    top = T.top
    if not Q <= S.top_members:
        raise InputError("the target must sit inside the top Sylow level")
    chain = [P.at_top(i) for i in range(d)]
    doms = [tuple(sorted(c)) for c in chain]
    realized = [_hom_tuples(top, chain[i], Q) for i in range(d)]

    restriction_bijective = []
    for i in range(d - 1):
        down = {}
        for t in realized[i + 1]:
            down.setdefault(_restrict_tuple(doms[i], doms[i + 1], t), 0)
            down[_restrict_tuple(doms[i], doms[i + 1], t)] += 1
        injective = all(v == 1 for v in down.values())
        surjective = set(down) == set(realized[i])
        restriction_bijective.append(injective and surjective)
    bij_from = None
    for k in range(d - 1, -1, -1):
        if all(restriction_bijective[k:]):
            bij_from = k
        else:
            break
    if bij_from is None and d >= 1 and not restriction_bijective:
        bij_from = 0  # single level: nothing to restrict

    families = []
    for t in _injective_homs(top, chain[d - 1], Q):
        rests = [_restrict_tuple(doms[i], doms[d - 1], t) for i in range(d - 1)]
        if any(rests[i] not in realized[i] for i in range(d - 1)):
            continue
        at_top = t in realized[d - 1]
        families.append(
            ClosureFamily(
                morphism=Morphism(doms[d - 1], t),
                restrictions=[Morphism(doms[i], rests[i]) for i in range(d - 1)],
                realized_at_top=at_top,
                conjugator=realized[d - 1].get(t),
                note="" if at_top else NON_REALIZATION_LABEL,
            )
        )
    cert = StabilizationCertificate(
        "realized |Hom_G(P_i, Q)|",
        [len(r) for r in realized],
        bounds.window,
        details={
            "restriction_bijective": restriction_bijective,
            "bijective_from": bij_from,
        },
    )
    return ClosureHomReport(
        families=families,
        realized_counts=[len(r) for r in realized],
        certificate=cert,
        depth=d,
    )


@dataclass
class WitnessReport:
    """Evidence that the continuity axiom fails at this truncation: a chain
    morphism realized at every proper level but by no top conjugator."""

    morphism: Morphism
    realized_restrictions: list[tuple[int, Morphism, int]]
    scanned: int
    label: str = NON_REALIZATION_LABEL


def continuity_witness(
    T: TowerGroup,
    S: SubTower,
    chain: SubTower,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> WitnessReport | None:
    """Search the chain for a closure morphism that no top-level conjugator
    realizes.  None means no witness at this truncation (not a disproof)."""
    d = T.depth if depth is None else min(depth, T.depth)
    top = T.top
    report = closure_hom(T, S, chain, S.top_members, d, bounds)
    for fam in report.families:
        if fam.realized_at_top:
            continue
        doms = [tuple(sorted(chain.at_top(i))) for i in range(d - 1)]
        realized = [
            _hom_tuples(top, chain.at_top(i), S.top_members) for i in range(d - 1)
        ]
        transcript = [
            (i, fam.restrictions[i], realized[i][fam.restrictions[i].images])
            for i in range(d - 1)
        ]
        return WitnessReport(
            morphism=fam.morphism,
            realized_restrictions=transcript,
            scanned=top.order,
        )
    return None


# ---------------------------------------------------------------------------
# saturation of the truncated union


@dataclass
class FinSaturationReport:
    level_reports: list
    saturated_levels: list[bool]
    fin_saturated_up_to: int
    certificate: StabilizationCertificate
    theorem_flag: bool
    witnesses: list[WitnessReport]

    def describe(self) -> str:
        head = f"Fin(S)-saturated up to depth {self.fin_saturated_up_to}"
        flag = "saturated (conditional on stabilization)" if self.theorem_flag else "inconclusive"
        return f"{head}; {flag}; {len(self.witnesses)} continuity witness(es)"


def fin_saturation_check(
    T: TowerGroup,
    S: SubTower,
    depth: int | None = None,
    window: int | None = None,
    chains=None,
    bounds: Bounds = DEFAULT,
) -> FinSaturationReport:
    """Saturation of the level fusion systems, read as the finite-subgroup
    saturation conditions of the truncated union.

    Every subgroup materialized at a level is finite, so the two
    finite-subgroup conditions are exactly the per-level saturation axioms.
    The theorem flag asserts the union system is saturated conditional on
    the verdict sequence having stabilized; it is not an unconditional
    claim.  Optional chains are searched for continuity-axiom failure
    witnesses, which are reported alongside (they concern the closure, not
    the per-level systems).
    """
    d = T.depth if depth is None else min(depth, T.depth)
    w = bounds.window if window is None else window
    reports = []
    verdicts = []
    for i in range(d):
        F = fusion.realize(T.level(i), S.members[i], T.p, bounds=bounds)
        rep = F.is_saturated()
        reports.append(rep)
        verdicts.append(bool(rep))
    up_to = 0
    for v in verdicts:
        if not v:
            break
        up_to += 1
    cert = StabilizationCertificate(
        "per-level saturation verdict", [int(v) for v in verdicts], w
    )
    witnesses = []
    for chain in chains or []:
        wit = continuity_witness(T, S, chain, d, bounds)
        if wit is not None:
            witnesses.append(wit)
    return FinSaturationReport(
        level_reports=reports,
        saturated_levels=verdicts,
        fin_saturated_up_to=up_to,
        certificate=cert,
        theorem_flag=all(verdicts) and bool(cert),
        witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# torus automorphisms and entry level


def _aut_tuples(G: gp.FiniteGroup, Tset: frozenset[int]) -> list[tuple[int, ...]]:
    """Distinct restrictions to Tset of conjugations normalizing it."""
    dom = tuple(sorted(Tset))
    gens = gp.small_gens(G, Tset)
    seen = set()
    for g in G.elements:
        if all(G.conj(g, x) in Tset for x in gens):
            seen.add(tuple(G.conj(g, x) for x in dom))
    return sorted(seen)


def aut_torus(
    T: TowerGroup,
    torus: TorusData,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
):
    """(W, certificate): the stabilized fusion-automorphism group of the
    torus chain, computed at the top level.

    A_i is the set of conjugation automorphisms the top group induces on
    the level-i torus image; restriction maps A_{i+1} -> A_i must become
    bijections with trivial kernels for the chain to stabilize.  Returns
    W = None when the sequence does not stabilize within the depth
    (inconclusive), with the certificate carrying the evidence either way.
    """
    d = T.depth if depth is None else min(depth, T.depth)
    top = T.top
    chain = [torus.sub.at_top(i) for i in range(d)]
    doms = [tuple(sorted(c)) for c in chain]
    auts = [_aut_tuples(top, chain[i]) for i in range(d)]

    kernel_orders = []
    surjective = []
    restrict_ok = True
    for i in range(d - 1):
        down = []
        for t in auts[i + 1]:
            r = _restrict_tuple(doms[i], doms[i + 1], t)
            if frozenset(r) != chain[i]:
                restrict_ok = False
                break
            down.append(r)
        if not restrict_ok:
            break
        kernel_orders.append(sum(1 for r in down if r == doms[i]))
        surjective.append(set(down) == set(auts[i]))
    kernel_to_first = []
    if restrict_ok:
        for i in range(d):
            ker = 0
            for t in auts[i]:
                r = t
                for j in range(i - 1, -1, -1):
                    r = _restrict_tuple(doms[j], doms[j + 1], r)
                if r == doms[0]:
                    ker += 1
            kernel_to_first.append(ker)
    cert = StabilizationCertificate(
        "|Aut_F(T_i)|",
        [len(a) for a in auts],
        bounds.window,
        details={
            "kernel_orders": kernel_orders,
            "surjective": surjective,
            "kernel_to_first_orders": kernel_to_first,
            "restrictions_defined": restrict_ok,
        },
    )
    stable = (
        bool(cert)
        and restrict_ok
        and all(k == 1 for k in kernel_orders[cert.stabilized_at or 0:])
        and all(surjective[cert.stabilized_at or 0:])
    )
    if not stable:
        return None, cert
    k = cert.stabilized_at
    pos = {x: j for j, x in enumerate(doms[k])}
    perms = [tuple(pos[y] for y in t) for t in auts[k]]
    W = gp.PermGroup(perms, len(doms[k]), bounds) if perms else gp.cyclic(1)
    if W.order != len(auts[k]):
        raise InternalCheckError("torus automorphisms failed to close")
    return W, cert


@dataclass
class EntryLevelReport:
    level: int | None
    verified_up_to: int
    failures: list


def torus_entry_level(
    T: TowerGroup,
    S: SubTower,
    torus: TorusData,
    U: SubTower,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> EntryLevelReport:
    """Least n (verified at this truncation) such that every realized
    morphism of every finite subgroup of U containing the n-th torsion
    layer lands inside the declared torus."""
    d = T.depth if depth is None else min(depth, T.depth)
    top = T.top
    p = T.p
    for i in range(U.depth):
        if not U.members[i] <= torus.sub.members[i]:
            raise InputError("U must be a sub-tower of the declared torus")
    U_top = U.at_top(d - 1)
    T_top = torus.sub.at_top(d - 1)
    S_top = S.top_members
    Ug, amb = gp.sub_as_group(top, U_top)
    subs = [frozenset(amb[x] for x in H) for H in gp.all_subgroups(Ug, bounds)]
    lands = {}
    for Pm in subs:
        homs = _hom_tuples(top, Pm, S_top)
        lands[Pm] = all(set(t) <= T_top for t in homs)
    failures = []
    for n in range(1, d + 1):
        layer = gp.torsion_layer(top, U_top, p, n)
        bad = [Pm for Pm in subs if layer <= Pm and not lands[Pm]]
        if not bad:
            return EntryLevelReport(level=n, verified_up_to=d, failures=failures)
        failures.append((n, bad))
    return EntryLevelReport(level=None, verified_up_to=d, failures=failures)


# ---------------------------------------------------------------------------
# artinian probes and direct-sum classification


@dataclass
class ProbeReport:
    verified_up_to: int | None
    counterexample: dict | None
    window: int
    chains_tested: int

    def __bool__(self) -> bool:
        return self.counterexample is None


def strongly_artinian_probe(
    T: TowerGroup,
    p: int | None = None,
    depth: int | None = None,
    window: int | None = None,
    bounds: Bounds = DEFAULT,
) -> ProbeReport:
    """Hunt for torsion-layer chains whose centralizers keep shrinking.

    For each abelian p-subgroup A of the top Sylow level the chain
    A_j = (elements of A killed by p^j) is walked and the centralizer
    orders in the top group recorded; strictly decreasing across at least
    ``window`` steps is a counterexample to strong p-artinianness at this
    truncation.  A verified report means no tested chain kept dropping.
    """
    if p is None:
        p = T.p
    d = T.depth if depth is None else min(depth, T.depth)
    w = bounds.window if window is None else window
    top = T.top
    S = weakly_sylow(T, p, bounds)
    S_top = S.top_members
    tested = 0
    for A in gp.subgroups_of_p_group(top, S_top, bounds):
        if len(A) == 1 or not gp.is_abelian_subset(top, A):
            continue
        tested += 1
        chain = []
        orders = []
        for j in range(1, d + 1):
            Aj = gp.torsion_layer(top, A, p, j)
            chain.append(Aj)
            orders.append(len(gp.centralizer(top, Aj)))
        drops = sum(1 for a, b in zip(orders, orders[1:]) if b < a)
        if drops >= w:
            return ProbeReport(
                verified_up_to=None,
                counterexample={
                    "chain": chain,
                    "centralizer_orders": orders,
                    "entry_levels": list(range(1, d + 1)),
                },
                window=w,
                chains_tested=tested,
            )
    return ProbeReport(
        verified_up_to=d, counterexample=None, window=w, chains_tested=tested
    )


@dataclass
class ClassifierReport:
    strongly_artinian_p: bool
    linear_torsion_q: bool | None
    failed_criteria: list[str]
    details: dict


def _resolve_groups(spec_list) -> list[gp.FiniteGroup]:
    from . import fileio

    out = []
    for item in spec_list:
        out.append(fileio.named_group(item) if isinstance(item, str) else item)
    return out


def direct_sum_classifier(
    prefix,
    cycle,
    p: int,
    q: int | None = None,
    bounds: Bounds = DEFAULT,
) -> ClassifierReport:
    """Classify the restricted direct sum of an eventually periodic sequence
    of finite groups: prefix G_1..G_k, then the cycle repeating forever.

    Strong p-artinianness holds exactly when only finitely many summands
    have order divisible by p, i.e. no cycle member does.  For a candidate
    torsion prime q three criteria are evaluated exactly on the descriptor:
    (1) every prime appearing infinitely often is q (cycle members are
    q-groups); (2) all but finitely many summands are abelian (cycle
    members are abelian); (3) q-ranks and q-power element orders are
    bounded, which a finite descriptor always makes computable - the
    bounds are recorded.
    """
    _require_prime(p)
    if q is not None:
        _require_prime(q)
    cycle_groups = _resolve_groups(cycle)
    prefix_groups = _resolve_groups(prefix)
    if not cycle_groups:
        raise InputError("descriptor needs an eventually-repeating pattern")

    strongly = all(G.order % p != 0 for G in cycle_groups)
    details: dict = {
        "cycle_orders": [G.order for G in cycle_groups],
        "prefix_orders": [G.order for G in prefix_groups],
        "p_divides_cycle": [G.order % p == 0 for G in cycle_groups],
    }
    failed: list[str] = []
    linear = None
    if q is not None:
        c1 = all(gp.is_p_group_order(G.order, q) for G in cycle_groups)
        c2 = all(
            gp.is_abelian_subset(G, G.elements) for G in cycle_groups
        )
        ranks = []
        exps = []
        for G in prefix_groups + cycle_groups:
            cnt = sum(1 for x in G.elements if G.power(x, q) == 0)
            r = 0
            while q**r < cnt:
                r += 1
            ranks.append(r if q**r == cnt else None)
            e = 1
            for x in G.elements:
                o = G.element_order(x)
                op = gp.p_part(o, q)
                e = max(e, op)
            exps.append(e)
        c3 = True  # a finite descriptor always yields finite bounds
        if not c1:
            failed.append("(1) a prime other than q appears infinitely often")
        if not c2:
            failed.append("(2) infinitely many non-abelian summands")
        details.update(
            {
                "q_rank_bound": max((r for r in ranks if r is not None), default=0),
                "q_exponent_bound": max(exps, default=1),
                "q_ranks_exact": ranks,
            }
        )
        linear = c1 and c2 and c3
    return ClassifierReport(
        strongly_artinian_p=strongly,
        linear_torsion_q=linear,
        failed_criteria=failed,
        details=details,
    )


# ---------------------------------------------------------------------------
# finite fields, for the example builders


def _poly_mulmod(a, b, f, q: int):
    m = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % q
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(m + 1):
                prod[i - m + j] = (prod[i - m + j] - c * f[j]) % q
    return tuple(prod[:m])


def _is_irreducible(f, q: int) -> bool:
    m = len(f) - 1
    if m == 1:
        return True
    # trial division by every monic polynomial of degree up to m // 2
    for d in range(1, m // 2 + 1):
        for coeffs in itertools.product(range(q), repeat=d):
            g = list(coeffs) + [1]
            # long division remainder f mod g
            r = list(f)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i]
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * g[j]) % q
            if all(x == 0 for x in r[:d]):
                return False
    return True


class _Field:
    """F_{q^m} as polynomials over F_q modulo the first monic irreducible
    found in lexicographic coefficient order (a fixed, reproducible choice)."""

    def __init__(self, q: int, m: int) -> None:
        _require_prime(q)
        if m < 1:
            raise InputError("field degree must be positive")
        self.q = q
        self.m = m
        self.order = q**m
        poly = None
        for coeffs in itertools.product(range(q), repeat=m):
            cand = list(coeffs) + [1]
            if _is_irreducible(cand, q):
                poly = cand
                break
        if poly is None:
            raise InternalCheckError("no irreducible polynomial found")
        self.poly = poly
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    def elements(self):
        return itertools.product(range(self.q), repeat=self.m)

    def mul(self, a, b):
        return _poly_mulmod(a, b, self.poly, self.q)

    def pow(self, a, n: int):
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def mult_order(self, a) -> int:
        if a == self.zero:
            raise InputError("zero has no multiplicative order")
        k = 1
        x = a
        while x != self.one:
            x = self.mul(x, a)
            k += 1
        return k

    def multiplicative_generator(self):
        target = self.order - 1
        for a in self.elements():
            if a != self.zero and self.mult_order(a) == target:
                return a
        raise InternalCheckError("no multiplicative generator found")

    def mult_matrix(self, c):
        """Matrix of y -> c*y on the power basis, columns indexed by basis."""
        cols = []
        x = self.one
        for _ in range(self.m):
            cols.append(self.mul(c, x))
            # multiply basis element by x
            x = self.mul(x, (0, 1) + (0,) * (self.m - 2)) if self.m > 1 else x
        return [[cols[j][i] for j in range(self.m)] for i in range(self.m)]


# ---------------------------------------------------------------------------
# example builders


def build_fqh(H: TowerGroup, q: int, bounds: Bounds = DEFAULT) -> TowerGroup:
    """Group algebra extensions F_q[H_i] x| H_i along a tower.

    The vector level is the group algebra as an abelian q-group with basis
    the elements of H_i, acted on by left translation; level orders are
    q^|H_i| * |H_i|, so the order guard is widened to whatever the
    requested levels need.
    """
    _require_prime(q)
    levels = []
    for i in range(H.depth):
        Hi = H.level(i)
        n = Hi.order
        mats = []
        for g in Hi.generators:
            mats.append(
                [[1 if r == Hi.mult(g, c) else 0 for c in range(n)] for r in range(n)]
            )
        order = q**n * n
        wide = replace(bounds, enumeration=max(bounds.enumeration, order))
        levels.append(gp.SemidirectGroup(q, n, Hi, mats, wide))
    maps = []
    for i in range(H.depth - 1):
        G1, G2 = levels[i], levels[i + 1]
        emb = H.element_map(i)
        m = []
        for x in G1.elements:
            v, h = G1.decode(x)
            w = [0] * G2.dim
            for c, val in enumerate(v):
                w[emb[c]] = val
            m.append(G2.encode(w, emb[h]))
        maps.append(m)
    return TowerGroup(levels, maps, H.p, "ambient", bounds)


def build_lfs_ext(
    p: int,
    q: int,
    depth: int,
    field_degree: int | None = None,
    bounds: Bounds = DEFAULT,
) -> TowerGroup:
    """The locally finite artinian example: level i is a sum of i copies of
    F_{q^m} twisted by a cyclic p-group of p-power roots of unity.

    The acting generator of level i is a root of unity u of order p^i,
    scaling coordinate j by u^(p^(j-1)); the field degree m defaults to
    the least one giving p^depth-th roots of unity.  Centralizers of the
    torsion layers of the Sylow subgroup then shrink strictly level by
    level, which is what the strongly-artinian probe exists to catch.
    """
    _require_prime(p)
    _require_prime(q)
    if p == q:
        raise InputError("the twisting prime must differ from the field prime")
    if depth < 1:
        raise InputError("depth must be at least 1")
    need = p**depth
    if field_degree is None:
        m = 1
        while (q**m - 1) % need != 0:
            m += 1
            if m > 64:
                raise InternalCheckError("no reasonable field degree found")
    else:
        m = field_degree
        if (q**m - 1) % need != 0:
            raise InputError(
                f"F_{q}^{m} has no elements of order {need}: "
                f"{q}^{m} - 1 is not divisible by p^depth"
            )
    F = _Field(q, m)
    g = F.multiplicative_generator()
    zeta = F.pow(g, (F.order - 1) // need)

    levels = []
    gens = []
    for i in range(1, depth + 1):
        acting = gp.cyclic(p**i)
        u = F.pow(zeta, p ** (depth - i))
        dim = i * m
        mat = [[0] * dim for _ in range(dim)]
        for j in range(1, i + 1):
            block = F.mult_matrix(F.pow(u, p ** (j - 1)))
            off = (j - 1) * m
            for r in range(m):
                for c in range(m):
                    mat[off + r][off + c] = block[r][c]
        order = F.order**i * p**i
        wide = replace(bounds, enumeration=max(bounds.enumeration, order))
        levels.append(gp.SemidirectGroup(q, dim, acting, [mat], wide))
        gens.append(acting.generators[0])
    maps = []
    for i in range(depth - 1):
        G1, G2 = levels[i], levels[i + 1]
        a1, a2 = G1.acting, G2.acting
        log = {a1.power(gens[i], k): k for k in range(a1.order)}
        m_list = []
        for x in G1.elements:
            v, h = G1.decode(x)
            w = tuple(v) + (0,) * (G2.dim - G1.dim)
            m_list.append(G2.encode(w, a2.power(gens[i + 1], p * log[h])))
        maps.append(m_list)
    return TowerGroup(levels, maps, p, "ambient", bounds)


# ---------------------------------------------------------------------------
# fusion along towers


@dataclass
class CompareReport:
    verdict: bool
    levels: list[dict]

    def __bool__(self) -> bool:
        return self.verdict


def quotient_fusion_compare(
    T: TowerGroup,
    N: SubTower,
    S: SubTower,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> CompareReport:
    """Check level-wise that killing a normal p'-sub-tower leaves fusion
    untouched: the projection must carry each hom set bijectively onto the
    quotient's."""
    d = T.depth if depth is None else min(depth, T.depth)
    p = T.p
    levels = []
    verdict = True
    for i in range(d):
        G = T.level(i)
        Nm = N.members[i]
        if len(Nm) % p == 0 and len(Nm) > 1:
            raise InputError(f"level {i}: N is not a p'-subgroup")
        if not gp.is_normal(G, Nm):
            raise InputError(f"level {i}: N is not normal")
        qm = gp.quotient(G, Nm)
        Sm = S.members[i]
        Sbar = frozenset(qm(x) for x in Sm)
        if len(Sbar) != len(Sm):
            raise InternalCheckError("p'-kernel collapsed the Sylow level")
        F = fusion.realize(G, Sm, p, bounds=bounds)
        Fbar = fusion.realize(qm.group, Sbar, p, bounds=bounds)
        ok = True
        pairs = 0
        for P in gp.subgroups_of_p_group(G, Sm, bounds):
            dom = tuple(sorted(P))
            Pbar = frozenset(qm(x) for x in P)
            dombar = tuple(sorted(Pbar))
            spot = {qm(x): k for k, x in enumerate(dom)}
            pushed = set()
            for t in F.hom_to_S(P):
                pushed.add(tuple(qm(t[spot[y]]) for y in dombar))
            pairs += 1
            if pushed != set(Fbar.hom_to_S(Pbar)):
                ok = False
        levels.append(
            {
                "level": i,
                "agrees": ok,
                "quotient_order": qm.group.order,
                "subgroups_checked": pairs,
            }
        )
        verdict = verdict and ok
    return CompareReport(verdict=verdict, levels=levels)


@dataclass
class LevelWitness:
    level: int
    group: gp.FiniteGroup
    sylow: frozenset[int]
    system: fusion.FusionSystem
    class_count: int
    morphism_count: int


@dataclass
class SeqRealizabilityReport:
    witnesses: list[LevelWitness]
    nested: list[bool]
    certificate: StabilizationCertificate
    deduped: bool

    def __bool__(self) -> bool:
        return all(self.nested)


def seq_realizability_witness(
    T: TowerGroup,
    S: SubTower,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> SeqRealizabilityReport:
    """Realize each level's fusion system and certify the chain is nested:
    every morphism of F_i, pushed through the embedding, is a morphism of
    F_{i+1}.  A constant tower collapses to a single witness."""
    d = T.depth if depth is None else min(depth, T.depth)
    p = T.p
    systems = []
    for i in range(d):
        F = fusion.realize(T.level(i), S.members[i], p, bounds=bounds)
        systems.append(F)
    nested = []
    for i in range(d - 1):
        G2 = T.level(i + 1)
        ok = True
        for P in gp.subgroups_of_p_group(T.level(i), S.members[i], bounds):
            dom = tuple(sorted(P))
            eP = T.push_set(i, i + 1, P)
            edom = tuple(sorted(eP))
            emb = T.element_map(i)
            spot = {emb[x]: k for k, x in enumerate(dom)}
            target = systems[i + 1].hom_to_S(eP)
            for t in systems[i].hom_to_S(P):
                et = tuple(emb[t[spot[y]]] for y in edom)
                if et not in target:
                    ok = False
                    break
            if not ok:
                break
        nested.append(ok)
    morphism_counts = [F.morphism_count() for F in systems]
    cert = StabilizationCertificate(
        "F_i <= F_{i+1} under the embedding",
        [int(b) for b in nested] if nested else [1],
        bounds.window,
        details={"morphism_counts": morphism_counts},
    )
    constant = all(
        T.level(i) is T.level(i + 1)
        and T.element_map(i) == list(range(T.level(i).order))
        and S.members[i] == S.members[i + 1]
        for i in range(d - 1)
    )
    witnesses = []
    for i in range(d):
        F = systems[i]
        witnesses.append(
            LevelWitness(
                level=i,
                group=T.level(i),
                sylow=S.members[i],
                system=F,
                class_count=len(F.classes()),
                morphism_count=morphism_counts[i],
            )
        )
        if constant:
            break
    return SeqRealizabilityReport(
        witnesses=witnesses,
        nested=nested,
        certificate=cert,
        deduped=constant and d > 1,
    )


def local_conjugation(
    T: TowerGroup,
    P: SubTower,
    Q: SubTower,
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> list[Morphism] | None:
    """A compatible family of conjugation maps P_i -> Q, or None.

    Built through the inverse-limit machinery: level sets are the realized
    hom sets at the top, the acting group is Q's top level acting by
    post-composition, and any limit point is a family.  Absence at this
    depth is just absence, never a disproof.
    """
    d = T.depth if depth is None else min(depth, T.depth)
    top = T.top
    Q_top = Q.at_top(d - 1)
    chain = [P.at_top(i) for i in range(d)]
    doms = [tuple(sorted(c)) for c in chain]
    hom_sets = []
    for i in range(d):
        homs = sorted(_hom_tuples(top, chain[i], Q_top))
        if not homs:
            return None
        hom_sets.append(homs)
    maps = []
    for i in range(d - 1):
        idx = {t: k for k, t in enumerate(hom_sets[i])}
        m = []
        for t in hom_sets[i + 1]:
            r = _restrict_tuple(doms[i], doms[i + 1], t)
            if r not in idx:
                raise InternalCheckError("restriction left the realized hom set")
            m.append(idx[r])
        maps.append(m)
    Qg, amb = gp.sub_as_group(top, Q_top)
    actions = []
    for i in range(d):
        idx = {t: k for k, t in enumerate(hom_sets[i])}
        rows = []
        for gq in Qg.elements:
            a = amb[gq]
            rows.append(
                [idx[tuple(top.conj(a, y) for y in t)] for t in hom_sets[i]]
            )
        actions.append(rows)
    sys = InverseSystem(Qg, [len(h) for h in hom_sets], maps, actions)
    report = inverse_limit(sys)
    if not report.lim_nonempty:
        return None
    fam = report.families[0]
    return [Morphism(doms[i], hom_sets[i][x]) for i, x in enumerate(fam)]
