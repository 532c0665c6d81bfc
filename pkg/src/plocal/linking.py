"""Transporter and linking categories over a fixed Sylow subgroup.

The finite linking category has Mor(P, Q) = T_G(P, Q) / O^p(C_G(P)),
stored by canonical minimal coset representative so equality is O(1) and
reports are reproducible.  delta embeds the S-transporter category, pi
projects onto the fusion system by sending a coset to conjugation by any
representative.

Verification never reconstructs a category from scratch: the axiom checks
read the stored morphism sets, so a corrupted category fails visibly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import fusion
from . import groups as gp
from .config import DEFAULT, Bounds
from .errors import BoundExceeded, InputError, InternalCheckError

Pair = tuple[frozenset, frozenset]


def op_subgroup(G, members, p: int) -> frozenset[int]:
    """O^p of the subgroup on the given members: the subgroup its
    p'-elements generate.  The quotient by it is the largest p-group one."""
    gens: list[int] = []
    have = frozenset({0})
    for x in members:
        if x not in have and G.element_order(x) % p != 0:
            gens.append(x)
            have = gp.subgroup_generated(G, gens)
    return have


# ---------------------------------------------------------------------------
# transporter categories


@dataclass
class TransporterCategory:
    """Mor(P, Q) = all g with gPg^{-1} <= Q; composition is multiplication."""

    ambient: object
    S: frozenset
    objects: list[frozenset]
    mor: dict[Pair, tuple[int, ...]]

    def mor_set(self, P: frozenset, Q: frozenset) -> tuple[int, ...]:
        return self.mor[(P, Q)]

    def identity_rep(self, P: frozenset) -> int:
        return 0

    def compose(self, P: frozenset, Q: frozenset, R: frozenset, outer: int, inner: int) -> int:
        if inner not in self.mor[(P, Q)] or outer not in self.mor[(Q, R)]:
            raise InputError("composing morphisms outside their transporter sets")
        return self.ambient.mult(outer, inner)


def transporter_category(G, S: frozenset, objects) -> TransporterCategory:
    objs = sorted({frozenset(o) for o in objects}, key=fusion.subgroup_sort_key)
    for o in objs:
        if not o <= S:
            raise InputError("transporter objects must be subgroups of S")
        if not gp.is_subgroup(G, o):
            raise InputError("transporter object is not a subgroup")
    mor = {}
    for P in objs:
        for Q in objs:
            mor[(P, Q)] = tuple(gp.transporter(G, P, Q))
    return TransporterCategory(ambient=G, S=frozenset(S), objects=objs, mor=mor)


# ---------------------------------------------------------------------------
# linking categories


@dataclass
class LinkingCategory:
    """Finite linking category of F = F_S(G) on centric or quasicentric
    objects.  mor[(P, Q)] holds one minimal representative per coset of
    O^p(C_G(P)); kernels[P] is that subgroup."""

    ambient: object
    S: frozenset
    p: int
    F: fusion.FusionSystem
    policy: str
    objects: list[frozenset]
    kernels: dict[frozenset, frozenset]
    mor: dict[Pair, tuple[int, ...]]

    def kernel(self, P: frozenset) -> frozenset:
        return self.kernels[P]

    def coset_rep(self, P: frozenset, g: int) -> int:
        return min(self.ambient.mult(g, k) for k in self.kernels[P])

    def mor_set(self, P: frozenset, Q: frozenset) -> tuple[int, ...]:
        try:
            return self.mor[(P, Q)]
        except KeyError:
            raise InputError("pair of subgroups is not in the object set") from None

    def identity_rep(self, P: frozenset) -> int:
        return self.coset_rep(P, 0)

    def compose(self, P: frozenset, Q: frozenset, R: frozenset, outer: int, inner: int) -> int:
        if inner not in self.mor_set(P, Q) or outer not in self.mor_set(Q, R):
            raise InputError("composing morphisms outside their coset sets")
        return self.coset_rep(P, self.ambient.mult(outer, inner))

    def delta(self, P: frozenset, Q: frozenset, g: int) -> int:
        if g not in self.S or not all(self.ambient.conj(g, x) in Q for x in P):
            raise InputError("delta takes elements of the S-transporter set")
        return self.coset_rep(P, g)

    def pi(self, P: frozenset, Q: frozenset, rep: int) -> fusion.Morphism:
        dom = tuple(sorted(P))
        images = tuple(self.ambient.conj(rep, x) for x in dom)
        return fusion.Morphism(dom, images)

    def aut(self, P: frozenset) -> tuple[int, ...]:
        return self.mor_set(P, P)


def _objects_for_policy(F: fusion.FusionSystem, policy: str) -> list[frozenset]:
    if policy == "centric":
        keep = lambda P: fusion.is_centric(F, P)
    elif policy == "quasicentric":
        keep = lambda P: fusion.is_quasicentric(F, P)
    else:
        raise InputError(f"unknown object policy {policy!r}")
    # flags are constant on conjugacy classes; test one representative each
    out = []
    for cls in F.classes():
        if keep(cls[0]):
            out.extend(cls)
    return sorted(out, key=fusion.subgroup_sort_key)


def linking_category(
    G,
    S=None,
    p: int | None = None,
    F: fusion.FusionSystem | None = None,
    object_policy: str = "centric",
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
) -> "LinkingCategory | TowerLinkingCategory":
    """The linking category of F_S(G) with the chosen object policy.

    A tower first argument routes to the truncated variant, which builds
    compatible coset families level-wise.  In the finite case the
    construction validates coset well-definedness: for every morphism
    representative g from P to Q, conjugation by g^{-1} must carry
    O^p(C_G(Q)) into O^p(C_G(P)).
    """
    if hasattr(G, "element_map"):  # a tower, not a single finite group
        return tower_linking_category(
            G, S, object_policy=object_policy, depth=depth, bounds=bounds
        )
    if S is None or p is None:
        raise InputError("finite linking categories need S and p")
    S = frozenset(S)
    if F is None:
        F = fusion.realize(G, S, p, bounds=bounds)
    if not F.is_saturated():
        raise InputError("linking categories are built over saturated systems")
    objects = _objects_for_policy(F, object_policy)
    kernels = {}
    for P in objects:
        C = gp.centralizer(G, P)
        kernels[P] = op_subgroup(G, C, p)
    cat = LinkingCategory(
        ambient=G,
        S=S,
        p=p,
        F=F,
        policy=object_policy,
        objects=objects,
        kernels=kernels,
        mor={},
    )
    for P in objects:
        K = kernels[P]
        for Q in objects:
            reps = sorted({min(G.mult(g, k) for k in K) for g in gp.transporter(G, P, Q)})
            cat.mor[(P, Q)] = tuple(reps)
    _validate_coset_composition(cat)
    return cat


def _validate_coset_composition(L: LinkingCategory) -> None:
    G = L.ambient
    for (P, Q), reps in L.mor.items():
        KQ = L.kernels[Q]
        KP = L.kernels[P]
        for g in reps:
            gi = G.inv(g)
            if any(G.mult(G.mult(gi, k), g) not in KP for k in KQ):
                raise InternalCheckError(
                    "coset composition is not well defined: "
                    f"kernel of {sorted(Q)} does not pull into kernel of {sorted(P)}"
                )


# ---------------------------------------------------------------------------
# tower truncations

HandleKey = tuple


def _handle_key(members) -> HandleKey:
    return tuple(tuple(sorted(m)) for m in members)


def pullback_handle(T, S, W: frozenset, at: int | None = None):
    """The canonical sub-tower through a subgroup W at a given level:
    images of W above it, preimages intersected with the Sylow chain below.
    Preimages under an injective homomorphism of a p-group stay p-groups,
    so every level lands inside the Sylow chain."""
    from . import towers as tw

    j = T.depth - 1 if at is None else at
    members: list[frozenset] = [frozenset()] * T.depth
    members[j] = frozenset(W)
    for i in range(j, T.depth - 1):
        emb = T.element_map(i)
        members[i + 1] = frozenset(emb[x] for x in members[i])
    for i in range(j - 1, -1, -1):
        emb = T.element_map(i)
        members[i] = frozenset(
            x for x in S.members[i] if emb[x] in members[i + 1]
        )
    return tw.SubTower(T, members)


def standard_handles(T, S, bounds: Bounds = DEFAULT) -> list:
    """Pullback handles of every subgroup of the top Sylow level, deduped."""
    top = T.top
    seen = {}
    for W in gp.subgroups_of_p_group(top, S.top_members, bounds):
        h = pullback_handle(T, S, W)
        seen.setdefault(_handle_key(h.members), h)
    return [seen[k] for k in sorted(seen)]


@dataclass
class PairFamilies:
    """Level-wise coset data for one pair of object handles.

    ``reps[i]`` holds the canonical coset representatives of the level-i
    morphism set; ``connecting[i]`` maps a level-i representative to its
    level-(i+1) coset where the source handle has gone constant (None on
    steps where new source elements still appear, since a transporter
    element then has nothing canonical to become).  ``families`` lists the
    maximal trajectories through the defined connecting maps.
    """

    reps: list[tuple[int, ...]]
    kernel_orders: list[int]
    connecting: list[dict | None]
    families: list[tuple]
    certificate: object

    @property
    def top(self) -> tuple[int, ...]:
        return self.reps[-1]


class TowerLinkingCategory:
    """Linking data along a tower truncation.

    Objects are validated sub-tower handles; the morphism record for each
    pair is a :class:`PairFamilies`.  Composition and automorphism queries
    answer at the top level, which is the truncated stand-in for the
    colimit; the per-level history and its stabilization certificate ride
    along so a report can say whether the top is believable.
    """

    def __init__(self, T, S, policy: str, handles, mor, finite_entries, witnesses):
        self.tower = T
        self.sylow = S
        self.p = T.p
        self.policy = policy
        self.objects = handles
        self.mor = mor
        self.finite_entries = finite_entries
        self.witnesses = witnesses
        self._keys = [_handle_key(h.members) for h in handles]

    def _key(self, handle) -> HandleKey:
        k = _handle_key(handle.members)
        if k not in self.mor_keys:
            raise InputError("handle is not an object of this category")
        return k

    @property
    def mor_keys(self) -> set:
        return {k for k, _ in self.mor}

    def pair(self, P, Q) -> PairFamilies:
        return self.mor[(self._key(P), self._key(Q))]

    def mor_set(self, P, Q) -> tuple[int, ...]:
        return self.pair(P, Q).top

    def aut(self, P) -> tuple[int, ...]:
        return self.mor_set(P, P)

    def compose(self, P, Q, R, outer: int, inner: int) -> int:
        if inner not in self.mor_set(P, Q) or outer not in self.mor_set(Q, R):
            raise InputError("composing morphisms outside their coset sets")
        G = self.tower.top
        K = self._top_kernel(P)
        return min(G.mult(G.mult(outer, inner), k) for k in K)

    def _top_kernel(self, P) -> frozenset:
        top = self.tower.top
        C = gp.centralizer(top, P.top_members)
        return op_subgroup(top, C, self.p)


def _level_policy_ok(F: fusion.FusionSystem, P: frozenset, policy: str) -> bool:
    if policy == "centric":
        return fusion.is_centric(F, P)
    if policy in ("quasicentric", "strongly-quasicentric"):
        return fusion.is_quasicentric(F, P)
    raise InputError(f"unknown object policy {policy!r}")


def tower_linking_category(
    T,
    S=None,
    objects=None,
    object_policy: str = "centric",
    depth: int | None = None,
    bounds: Bounds = DEFAULT,
):
    """Linking category of a tower truncation: compatible coset families
    of T_{G_i}(P_i, Q_i) / O^p(C_{G_i}(P_i)) along the levels.

    Objects default to the pullback handles of the top Sylow level's
    subgroups, filtered by the policy applied to every level's fusion
    system.  The strongly-quasicentric policy additionally demands an
    eventually-constant quasicentric sub-handle and records it as the
    telescopic witness; plain centric or quasicentric handles get
    themselves as witness when they are already eventually constant.
    """
    from . import towers as tw

    d = T.depth if depth is None else min(depth, T.depth)
    if d < T.depth:
        if objects is not None:
            raise InputError(
                "explicit handles cannot cross a depth cut; truncate them first"
            )
        members = None if S is None else S.members[:d]
        T = tw.truncate(T, d)
        S = None if members is None else tw.SubTower(T, members)
    if S is None:
        S = tw.weakly_sylow(T, T.p, bounds)
    systems = [
        fusion.realize(T.level(i), S.members[i], T.p, bounds=bounds)
        for i in range(T.depth)
    ]
    for i, F in enumerate(systems):
        if not F.is_saturated():
            raise InputError(f"level {i} fusion system is not saturated")

    candidates = objects if objects is not None else standard_handles(T, S, bounds)
    strongly = object_policy == "strongly-quasicentric"
    kept = []
    for h in candidates:
        if all(
            _level_policy_ok(systems[i], h.members[i], object_policy)
            for i in range(T.depth)
        ):
            kept.append(h)
    finite_entries = {
        _handle_key(h.members): h.eventually_constant() for h in kept
    }
    witnesses: dict[HandleKey, HandleKey | None] = {}
    if strongly:
        finite = [
            h for h in kept if finite_entries[_handle_key(h.members)] is not None
        ]
        filtered = []
        for h in kept:
            wit = None
            for f in finite:
                if all(f.members[i] <= h.members[i] for i in range(T.depth)):
                    wit = _handle_key(f.members)
                    break
            if wit is not None:
                filtered.append(h)
                witnesses[_handle_key(h.members)] = wit
        kept = filtered
    else:
        for h in kept:
            k = _handle_key(h.members)
            witnesses[k] = k if finite_entries[k] is not None else None

    kernel_cache = {
        _handle_key(h.members): [
            op_subgroup(
                T.level(i), gp.centralizer(T.level(i), h.members[i]), T.p
            )
            for i in range(T.depth)
        ]
        for h in kept
    }
    mor = {}
    for P in kept:
        for Q in kept:
            mor[(_handle_key(P.members), _handle_key(Q.members))] = _pair_families(
                T, P, Q, kernel_cache[_handle_key(P.members)], bounds
            )
    return TowerLinkingCategory(
        T, S, object_policy, kept, mor, finite_entries, witnesses
    )


def _min_coset_reps(G, transp, K) -> tuple[int, ...]:
    """Cover the transporter set by right K-cosets, one minimal rep each."""
    seen: set[int] = set()
    out = []
    for g in transp:
        if g in seen:
            continue
        coset = [G.mult(g, k) for k in K]
        seen.update(coset)
        out.append(min(coset))
    return tuple(sorted(out))


def _pair_families(T, P, Q, kernels, bounds: Bounds) -> PairFamilies:
    from . import towers as tw

    reps = []
    kernel_orders = []
    for i in range(T.depth):
        G = T.level(i)
        K = kernels[i]
        transp = gp.transporter(G, P.members[i], Q.members[i])
        reps.append(_min_coset_reps(G, transp, K))
        kernel_orders.append(len(K))
    connecting: list[dict | None] = []
    for i in range(T.depth - 1):
        emb = T.element_map(i)
        if T.push_set(i, i + 1, P.members[i]) != P.members[i + 1]:
            connecting.append(None)
            continue
        Ki1 = kernels[i + 1]
        if any(emb[k] not in Ki1 for k in kernels[i]):
            raise InternalCheckError(
                "level kernels do not push forward along a constant handle"
            )
        H = T.level(i + 1)
        step = {}
        for g in reps[i]:
            step[g] = min(H.mult(emb[g], k) for k in Ki1)
        if any(v not in reps[i + 1] for v in step.values()):
            raise InternalCheckError("connecting map left the morphism set")
        connecting.append(step)
    families = []
    for start in range(T.depth):
        if start > 0 and connecting[start - 1] is not None:
            continue  # trajectories beginning here already extend backward
        if any(c is None for c in connecting[start:]):
            continue  # this run never reaches the top
        for g in reps[start]:
            traj = [g]
            for i in range(start, T.depth - 1):
                traj.append(connecting[i][traj[-1]])
            families.append((start, tuple(traj)))
    cert = tw.StabilizationCertificate(
        "|Mor_i(P, Q)|",
        [len(r) for r in reps],
        bounds.window,
        details={
            "kernel_orders": kernel_orders,
            "connecting_defined": [c is not None for c in connecting],
            "connecting_bijective": [
                c is not None
                and len(set(c.values())) == len(c) == len(reps[i + 1])
                for i, c in enumerate(connecting)
            ],
        },
    )
    return PairFamilies(
        reps=reps,
        kernel_orders=kernel_orders,
        connecting=connecting,
        families=families,
        certificate=cert,
    )


def is_telescopic(L) -> bool:
    """Every object has a finite object below it.

    Handles that stabilize (each step mapping members onto members) stand
    for finite subgroups of the union; a strictly increasing handle needs
    some stabilized object handle inside it, level-wise.  Finite
    categories are telescopic outright.
    """
    if not isinstance(L, TowerLinkingCategory):
        return True
    finite_keys = [k for k, e in L.finite_entries.items() if e is not None]
    finite = [h for h in L.objects if _handle_key(h.members) in finite_keys]
    for h in L.objects:
        k = _handle_key(h.members)
        if L.finite_entries.get(k) is not None:
            L.witnesses[k] = k
            continue
        wit = None
        for f in finite:
            if all(
                f.members[i] <= h.members[i] for i in range(L.tower.depth)
            ):
                wit = _handle_key(f.members)
                break
        L.witnesses[k] = wit
        if wit is None:
            return False
    return True


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomFailure:
    axiom: str
    detail: str


@dataclass
class LinkingReport:
    policy: str
    object_count: int
    morphism_count: int
    axiom_c_mode: str  # "full" or "generators"
    kernel_orders_prime_to_p: bool
    failures: list[AxiomFailure] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.verdict

    def failing_axioms(self) -> list[str]:
        return sorted({f.axiom for f in self.failures})


def verify_axioms(L: LinkingCategory, F: fusion.FusionSystem | None = None, bounds: Bounds = DEFAULT) -> LinkingReport:
    """Check axioms (A), (B), (C) and the fully-centralized-object
    condition directly against the stored morphism sets.

    (A): C_S(P) acts freely on every Mor(P, Q) by precomposition, pi fibers
    are exactly the orbits, and for fully centralized P the counting
    identity |Mor(P, Q)| = |C_S(P)| * |Hom_F(P, Q)| holds.
    (B): pi after delta is conjugation.
    (C): for psi in Mor(P, Q) and g in P, psi after delta_P(g) equals
    delta_Q(pi(psi)(g)) after psi; checked on all pairs while the count
    stays under the axiom_c_full bound, on subgroup generators beyond it.
    """
    F = F or L.F
    G = L.ambient
    failures: list[AxiomFailure] = []
    morphism_count = sum(len(v) for v in L.mor.values())

    kernels_prime = True
    for P in L.objects:
        K = L.kernels[P]
        if len(K) % L.p == 0 and len(K) > 1:
            kernels_prime = False
        csp = gp.centralizer(G, P, within=L.S)
        if csp & K != {0}:
            failures.append(
                AxiomFailure("A", f"C_S(P) does not act freely at P={sorted(P)}")
            )

    # (A) orbits versus fusion morphisms
    for P in L.objects:
        csp = sorted(gp.centralizer(G, P, within=L.S))
        fully_c = F.is_fully_centralized(P)
        dom = tuple(sorted(P))
        for Q in L.objects:
            reps = L.mor_set(P, Q)
            fibers: dict[tuple[int, ...], set[int]] = {}
            for t in reps:
                img = tuple(G.conj(t, x) for x in dom)
                fibers.setdefault(img, set()).add(t)
            homs = {m.images for m in F.hom(P, Q)}
            if set(fibers) != homs:
                failures.append(
                    AxiomFailure(
                        "A",
                        f"pi image mismatch on Mor({sorted(P)},{sorted(Q)})",
                    )
                )
                continue
            orbit_of = {}
            for t in reps:
                orbit = frozenset(L.coset_rep(P, G.mult(t, c)) for c in csp)
                orbit_of[t] = orbit
            if fully_c:
                for img, fiber in fibers.items():
                    orbits = {orbit_of[t] for t in fiber}
                    if len(orbits) != 1 or len(fiber) != len(csp):
                        failures.append(
                            AxiomFailure(
                                "A",
                                "fiber is not a single free C_S(P)-orbit at "
                                f"Mor({sorted(P)},{sorted(Q)}) over {img}",
                            )
                        )
                        break
                if len(reps) != len(csp) * len(homs):
                    failures.append(
                        AxiomFailure(
                            "A",
                            f"counting identity fails on Mor({sorted(P)},{sorted(Q)}): "
                            f"{len(reps)} != {len(csp)}*{len(homs)}",
                        )
                    )

    # (B) pi after delta is conjugation
    for P in L.objects:
        dom = tuple(sorted(P))
        for Q in L.objects:
            for g in gp.transporter(G, P, Q, within=L.S):
                want = tuple(G.conj(g, x) for x in dom)
                got = L.pi(P, Q, L.delta(P, Q, g)).images
                if got != want:
                    failures.append(
                        AxiomFailure("B", f"pi(delta({g})) != c_g at ({sorted(P)},{sorted(Q)})")
                    )

    # (C) naturality of delta
    pair_count = sum(len(L.mor_set(P, Q)) * len(P) for P in L.objects for Q in L.objects)
    full_mode = pair_count <= bounds.axiom_c_full
    mode = "full" if full_mode else "generators"
    for P in L.objects:
        dom = tuple(sorted(P))
        elements = sorted(P) if full_mode else gp.small_gens(G, P)
        for Q in L.objects:
            for t in L.mor_set(P, Q):
                img = {x: G.conj(t, x) for x in dom}
                for g in elements:
                    left = L.compose(P, P, Q, t, L.delta(P, P, g))
                    right = L.compose(P, Q, Q, L.delta(Q, Q, img[g]), t)
                    if left != right:
                        failures.append(
                            AxiomFailure(
                                "C",
                                f"delta not natural at ({sorted(P)},{sorted(Q)}), rep {t}, g={g}",
                            )
                        )

    # every object is isomorphic in L to a fully centralized one
    seen_classes = set()
    for P in L.objects:
        key = frozenset(F.conjugacy_class(P))
        if key in seen_classes:
            continue
        seen_classes.add(key)
        for P0 in sorted(key, key=fusion.subgroup_sort_key):
            witness = None
            for Q in key:
                if not F.is_fully_centralized(Q) or Q not in L.objects:
                    continue
                for t in L.mor_set(P0, Q):
                    if gp.conjugate_subgroup(G, t, P0) == Q:
                        witness = (Q, t)
                        break
                if witness:
                    break
            if witness is None:
                failures.append(
                    AxiomFailure(
                        "objects",
                        f"{sorted(P0)} has no L-isomorphism to a fully centralized object",
                    )
                )

    return LinkingReport(
        policy=L.policy,
        object_count=len(L.objects),
        morphism_count=morphism_count,
        axiom_c_mode=mode,
        kernel_orders_prime_to_p=kernels_prime,
        failures=failures,
    )


def epi_mono_check(L, bounds: Bounds = DEFAULT) -> bool:
    """Every morphism is both an epimorphism and a monomorphism, by
    exhaustive cancellation over all composable pairs.

    Works on anything with objects, mor_set and compose, so corrupted
    stand-in categories are checked on their own terms.
    """
    objects = L.objects
    total = sum(len(L.mor_set(P, Q)) for P in objects for Q in objects)
    if total > bounds.enumeration:
        raise BoundExceeded("enumeration", total, bounds.enumeration)
    for P, Q, R in itertools.product(objects, repeat=3):
        first = L.mor_set(P, Q)
        second = L.mor_set(Q, R)
        for a, b in itertools.combinations(first, 2):
            # mono: equal composites with distinct inner morphisms
            if any(L.compose(P, Q, R, s, a) == L.compose(P, Q, R, s, b) for s in second):
                return False
        for a, b in itertools.combinations(second, 2):
            if any(L.compose(P, Q, R, a, s) == L.compose(P, Q, R, b, s) for s in first):
                return False
    return True


def source_regular_check(T, L) -> dict:
    """tau: T -> L (coset projection, or identity when T is L itself) is an
    orbit map with p'-kernels acting freely.

    Returns a report dict with per-object kernel orders and a verdict.
    """
    G = T.ambient
    is_linking = isinstance(L, LinkingCategory)
    kernels = {}
    verdict = True
    details = []
    for P in T.objects:
        K = L.kernels[P] if is_linking else frozenset({0})
        kernels[P] = len(K)
        if is_linking and len(K) % L.p == 0 and len(K) > 1:
            verdict = False
            details.append(f"kernel at {sorted(P)} is not a p'-group")
        # free right action of K on the transporter sets
        for Q in T.objects:
            tset = set(T.mor_set(P, Q))
            for g in tset:
                orbit = {G.mult(g, k) for k in K}
                if not orbit <= tset:
                    verdict = False
                    details.append(f"kernel orbit leaves T({sorted(P)},{sorted(Q)})")
                    break
                if len(orbit) != len(K):
                    verdict = False
                    details.append(f"kernel action not free on T({sorted(P)},{sorted(Q)})")
                    break
            # tau is the orbit map: fibers of the projection are exactly orbits
            proj = {}
            for g in tset:
                rep = L.coset_rep(P, g) if is_linking else g
                proj.setdefault(rep, set()).add(g)
            for rep, fiber in proj.items():
                orbit = {G.mult(rep, k) for k in K}
                if fiber != orbit:
                    verdict = False
                    details.append(
                        f"tau fiber over {rep} is not a kernel orbit on T({sorted(P)},{sorted(Q)})"
                    )
    return {"verdict": verdict, "kernel_orders": kernels, "details": details}


# ---------------------------------------------------------------------------
# nerve export


def export_nerve(L, max_dim: int, bounds: Bounds = DEFAULT) -> str:
    """Simplicial-set text dump of the nerve, dimensions 0..max_dim.

    A k-simplex is a composable chain P_0 -> P_1 -> ... -> P_k written as
    (psi_1, ..., psi_k).  Face d_0 drops psi_1, face d_k drops psi_k, and
    d_i composes psi_{i+1} after psi_i; degeneracies insert identities.
    Simplices are listed with their face indices into the previous
    dimension; a simplex is degenerate when some component is an identity.
    """
    objects = list(L.objects)
    obj_index = {P: i for i, P in enumerate(objects)}
    lines = [
        "# nerve export",
        "# k-simplex = composable chain (psi_1, ..., psi_k) through objects P_0..P_k",
        "# faces: d_0 drops psi_1; d_i (0<i<k) composes psi_{i+1} o psi_i;"
        " d_k drops psi_k",
        "# a simplex is degenerate iff some psi_i is an identity morphism",
        f"dim 0 count {len(objects)} nondegenerate {len(objects)}",
    ]
    for i, P in enumerate(objects):
        lines.append(f"0/{i}: object {sorted(P)}")

    # a chain is ((P_0..P_k), (rep_1..rep_k)); index maps chain -> position
    prev_index = {((P,), ()): obj_index[P] for P in objects}
    for k in range(1, max_dim + 1):
        chains = []
        for (path, reps) in prev_index:
            tail = path[-1]
            for Q in objects:
                for t in L.mor_set(tail, Q):
                    chains.append((path + (Q,), reps + (t,)))
        if len(chains) > bounds.enumeration:
            raise BoundExceeded("enumeration", len(chains), bounds.enumeration)
        index = {c: i for i, c in enumerate(chains)}
        nondeg = 0
        body = []
        for c, i in index.items():
            path, reps = c
            degenerate = any(
                reps[j] == L.identity_rep(path[j]) and path[j] == path[j + 1]
                for j in range(k)
            )
            if not degenerate:
                nondeg += 1
            faces = []
            for j in range(k + 1):
                if j == 0:
                    fc = (path[1:], reps[1:])
                elif j == k:
                    fc = (path[:-1], reps[:-1])
                else:
                    merged = L.compose(path[j - 1], path[j], path[j + 1], reps[j], reps[j - 1])
                    fc = (
                        path[: j] + path[j + 1 :],
                        reps[: j - 1] + (merged,) + reps[j + 1 :],
                    )
                faces.append(prev_index[fc])
            marker = "" if not degenerate else " degenerate"
            body.append(f"{k}/{i}: reps {list(reps)} faces {faces}{marker}")
        lines.append(f"dim {k} count {len(chains)} nondegenerate {nondeg}")
        lines.extend(body)
        prev_index = index
    return "\n".join(lines) + "\n"
