"""Fusion systems over a finite p-group S, with every per-system verdict:
saturation, subgroup classes, centralizer systems, factorization through
automorphism groups, fusion-preserving isomorphism.

A system always lives inside an ambient finite group (for abstract systems
the ambient group is S itself).  Objects are all subgroups of S; a morphism
with domain P is stored as the tuple of images of sorted(P), so morphism
sets dedup naturally and restriction is just subtuple selection.  The
master store is keyed by domain: the morphism set of an ordered pair (P,Q)
is the image-inside-Q slice of the domain-P store, which keeps the store
linear in the number of distinct morphisms instead of quadratic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import DEFAULT, Bounds
from .errors import BoundExceeded, InputError, InternalCheckError, DecompositionFailure
from . import groups as gp


Key = frozenset  # subgroup as frozenset of ambient element indices


def subgroup_sort_key(P: frozenset[int]):
    return (len(P), tuple(sorted(P)))


@dataclass(frozen=True)
class Morphism:
    """Injective homomorphism between subgroups of S, as parallel tuples."""

    domain: tuple[int, ...]  # sorted
    images: tuple[int, ...]

    def image(self) -> frozenset[int]:
        return frozenset(self.images)

    def apply(self, x: int) -> int:
        return self.images[self.domain.index(x)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.images))

    def is_identity(self) -> bool:
        return self.domain == self.images


def _restrict(domain: tuple[int, ...], images: tuple[int, ...], sub: tuple[int, ...]):
    pos = {x: i for i, x in enumerate(domain)}
    return tuple(images[pos[x]] for x in sub)


def _compose(outer_dom: tuple[int, ...], outer_img: tuple[int, ...], inner_img: tuple[int, ...]):
    """outer ∘ inner, where inner's images all lie in outer's domain."""
    pos = {x: i for i, x in enumerate(outer_dom)}
    return tuple(outer_img[pos[y]] for y in inner_img)


class FusionSystem:
    """Immutable after construction.  ``store[P]`` is the frozenset of all
    morphism image-tuples with domain P (codomain S)."""

    def __init__(
        self,
        ambient: gp.FiniteGroup,
        S: frozenset[int],
        p: int,
        store: dict[frozenset[int], frozenset[tuple[int, ...]]],
        provenance: str,
        bounds: Bounds = DEFAULT,
    ) -> None:
        self.ambient = ambient
        self.S = S
        self.p = p
        self.provenance = provenance
        self.bounds = bounds
        self.objects: list[frozenset[int]] = sorted(store.keys(), key=subgroup_sort_key)
        self._store = store
        self._sorted = {P: tuple(sorted(P)) for P in self.objects}
        self._classes_cache: list[list[frozenset[int]]] | None = None
        self._sat_cache = None

    # ----- raw access

    def domain_tuple(self, P: frozenset[int]) -> tuple[int, ...]:
        return self._sorted[P]

    def hom_to_S(self, P: frozenset[int]) -> frozenset[tuple[int, ...]]:
        try:
            return self._store[P]
        except KeyError:
            raise InputError("not a subgroup of S in this system") from None

    def hom(self, P: frozenset[int], Q: frozenset[int]) -> list[Morphism]:
        dom = self.domain_tuple(P)
        return [
            Morphism(dom, t) for t in sorted(self.hom_to_S(P)) if frozenset(t) <= Q
        ]

    def aut(self, P: frozenset[int]) -> list[tuple[int, ...]]:
        return sorted(t for t in self.hom_to_S(P) if frozenset(t) == P)

    def aut_S(self, P: frozenset[int]) -> set[tuple[int, ...]]:
        dom = self.domain_tuple(P)
        A = self.ambient
        NS = gp.normalizer(A, P, within=self.S)
        return {tuple(A.conj(g, x) for x in dom) for g in NS}

    def inn(self, P: frozenset[int]) -> set[tuple[int, ...]]:
        dom = self.domain_tuple(P)
        A = self.ambient
        return {tuple(A.conj(g, x) for x in dom) for g in P}

    def morphism_count(self) -> int:
        return sum(len(v) for v in self._store.values())

    def all_morphisms(self) -> list[Morphism]:
        out = []
        for P in self.objects:
            dom = self._sorted[P]
            for t in sorted(self._store[P]):
                out.append(Morphism(dom, t))
        return out

    # ----- conjugacy

    def conjugacy_class(self, P: frozenset[int]) -> list[frozenset[int]]:
        cls = {frozenset(t) for t in self.hom_to_S(P)}
        return sorted(cls, key=subgroup_sort_key)

    def classes(self) -> list[list[frozenset[int]]]:
        if self._classes_cache is None:
            seen: set[frozenset[int]] = set()
            out = []
            for P in self.objects:
                if P in seen:
                    continue
                cls = self.conjugacy_class(P)
                seen.update(cls)
                out.append(cls)
            self._classes_cache = out
        return self._classes_cache

    def class_representative(self, cls: Sequence[frozenset[int]]) -> frozenset[int]:
        """Deterministic choice: maximal |N_S(P)|, ties by least member tuple."""
        A = self.ambient
        return min(
            cls,
            key=lambda P: (-len(gp.normalizer(A, P, within=self.S)), tuple(sorted(P))),
        )

    # ----- the four per-subgroup flags

    def is_fully_normalized(self, P: frozenset[int]) -> bool:
        A = self.ambient
        n = len(gp.normalizer(A, P, within=self.S))
        return all(
            len(gp.normalizer(A, Q, within=self.S)) <= n
            for Q in self.conjugacy_class(P)
        )

    def is_fully_centralized(self, P: frozenset[int]) -> bool:
        A = self.ambient
        c = len(gp.centralizer(A, P, within=self.S))
        return all(
            len(gp.centralizer(A, Q, within=self.S)) <= c
            for Q in self.conjugacy_class(P)
        )

    def is_fully_automized(self, P: frozenset[int]) -> bool:
        """Aut_S(P) is Sylow in Aut_F(P): the index is prime to p."""
        nf = len(self.aut(P))
        ns = len(self.aut_S(P))
        if nf % ns:
            raise InternalCheckError(
                f"|Aut_S(P)| = {ns} does not divide |Aut_F(P)| = {nf}"
            )
        return (nf // ns) % self.p != 0

    def extension_group(self, phi: Morphism) -> frozenset[int]:
        """N_phi for an isomorphism phi: Q -> P: the elements g of N_S(Q)
        with phi c_g phi^{-1} in Aut_S(P)."""
        A = self.ambient
        Q = frozenset(phi.domain)
        P = phi.image()
        autsP = self.aut_S(P)
        pos = {x: i for i, x in enumerate(phi.domain)}
        NSQ = gp.normalizer(A, Q, within=self.S)
        out = []
        for g in NSQ:
            # phi-conjugate of c_g, as a tuple over sorted(P)
            conj = {phi.images[pos[x]]: phi.images[pos[A.conj(g, x)]] for x in phi.domain}
            t = tuple(conj[y] for y in sorted(P))
            if t in autsP:
                out.append(g)
        return frozenset(out)

    def is_receptive(self, P: frozenset[int]) -> bool:
        """Every F-isomorphism onto P extends over its extension group."""
        domP = self.domain_tuple(P)
        for Q in self.conjugacy_class(P):
            domQ = self.domain_tuple(Q)
            for t in self.hom_to_S(Q):
                if frozenset(t) != P:
                    continue
                phi = Morphism(domQ, t)
                N = self.extension_group(phi)
                if N == Q:
                    continue  # phi itself is the extension
                domN = tuple(sorted(N))
                ok = any(
                    _restrict(domN, ext, domQ) == t for ext in self.hom_to_S(N)
                )
                if not ok:
                    return False
        return True

    def status(self, P: frozenset[int]) -> dict[str, bool]:
        return {
            "fully_normalized": self.is_fully_normalized(P),
            "fully_centralized": self.is_fully_centralized(P),
            "fully_automized": self.is_fully_automized(P),
            "receptive": self.is_receptive(P),
        }

    # ----- saturation

    def is_saturated(self) -> "SaturationReport":
        if self._sat_cache is None:
            self._sat_cache = _saturation_report(self)
        return self._sat_cache

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionSystem):
            return NotImplemented
        return (
            self.ambient is other.ambient
            and self.S == other.S
            and self.p == other.p
            and self._store == other._store
        )

    def __hash__(self):
        return hash((id(self.ambient), self.S, self.p))


@dataclass
class ClassRecord:
    representative: frozenset[int]
    class_size: int
    fully_normalized_members: list[frozenset[int]]
    fully_centralized_members: list[frozenset[int]]
    failing_axiom: str | None = None
    detail: str = ""


@dataclass
class SaturationReport:
    verdict: bool
    records: list[ClassRecord]

    def __bool__(self) -> bool:
        return self.verdict

    def failing_axioms(self) -> list[str]:
        return [r.failing_axiom for r in self.records if r.failing_axiom]


def _saturation_report(F: FusionSystem) -> SaturationReport:
    records = []
    ok = True
    for cls in F.classes():
        rep = F.class_representative(cls)
        fn = [P for P in cls if F.is_fully_normalized(P)]
        fc = [P for P in cls if F.is_fully_centralized(P)]
        rec = ClassRecord(rep, len(cls), fn, fc)
        for P in fn:
            if not F.is_fully_automized(P):
                rec.failing_axiom = "fully_automized"
                rec.detail = (
                    f"fully normalized member {sorted(P)} has"
                    f" |Aut_F| = {len(F.aut(P))}, |Aut_S| = {len(F.aut_S(P))}"
                )
                break
            if not F.is_fully_centralized(P):
                rec.failing_axiom = "fully_centralized"
                rec.detail = f"fully normalized member {sorted(P)} is not fully centralized"
                break
        if rec.failing_axiom is None:
            for P in fc:
                if not F.is_receptive(P):
                    rec.failing_axiom = "receptive"
                    rec.detail = (
                        f"fully centralized member {sorted(P)} admits an"
                        " isomorphism with no extension over its extension group"
                    )
                    break
        if rec.failing_axiom:
            ok = False
        records.append(rec)
    return SaturationReport(ok, records)


# ---------------------------------------------------------------------------
# construction


def _check_p_group(A: gp.FiniteGroup, S: frozenset[int], p: int) -> None:
    if not gp.is_p_group_order(len(S), p):
        raise InputError(f"S has order {len(S)}, not a power of {p}")
    if not gp.is_subgroup(A, S):
        raise InputError("S is not closed under multiplication")


def realize(
    G: gp.FiniteGroup,
    S: frozenset[int],
    p: int,
    within: frozenset[int] | None = None,
    bounds: Bounds = DEFAULT,
) -> FusionSystem:
    """The fusion system of G over S ≤ G: morphisms are exactly the
    conjugations by elements of G (of ``within``, to realize a subgroup's
    fusion without building it as a standalone group)."""
    _check_p_group(G, S, p)
    pool = sorted(within) if within is not None else None
    subs = gp.subgroups_of_p_group(G, S, bounds)
    store: dict[frozenset[int], frozenset[tuple[int, ...]]] = {}
    for P in subs:
        dom = tuple(sorted(P))
        gens = gp.small_gens(G, P)
        homset = set()
        candidates = pool if pool is not None else G.elements
        for g in candidates:
            if all(G.conj(g, x) in S for x in gens):
                t = tuple(G.conj(g, x) for x in dom)
                if frozenset(t) <= S:
                    homset.add(t)
        store[P] = frozenset(homset)
    label = f"realized(|G|={len(pool) if pool is not None else G.order})"
    return FusionSystem(G, S, p, store, label, bounds)


def generate(
    ambient: gp.FiniteGroup,
    S: frozenset[int],
    p: int,
    seeds: Iterable[Morphism | tuple[tuple[int, ...], tuple[int, ...]]] = (),
    bounds: Bounds = DEFAULT,
) -> FusionSystem:
    """Smallest fusion system over S containing the inner morphisms and the
    seeds: fixpoint under restriction, inversion of isomorphisms, and
    composition.  Restrictions close eagerly; compositions go through a
    worklist."""
    _check_p_group(ambient, S, p)
    seeds = list(seeds)
    A = ambient
    subs = gp.subgroups_of_p_group(A, S, bounds)
    subs_set = set(subs)
    doms = {P: tuple(sorted(P)) for P in subs}
    store: dict[frozenset[int], set[tuple[int, ...]]] = {P: set() for P in subs}
    by_image: dict[frozenset[int], list[tuple[frozenset[int], tuple[int, ...]]]] = {
        P: [] for P in subs
    }
    work: list[tuple[frozenset[int], tuple[int, ...]]] = []

    def push(P: frozenset[int], t: tuple[int, ...]) -> None:
        if t not in store[P]:
            store[P].add(t)
            work.append((P, t))

    # inner fusion, complete with all restrictions
    for P in subs:
        dom = doms[P]
        for g in sorted(S):
            push(P, tuple(A.conj(g, x) for x in dom))

    for seed in seeds:
        if isinstance(seed, Morphism):
            dom, img = seed.domain, seed.images
        else:
            dom, img = seed
        dom = tuple(dom)
        img = tuple(img)
        P = frozenset(dom)
        if P not in subs_set:
            raise InputError("seed domain is not a subgroup of S")
        if len(set(img)) != len(img):
            raise InputError("seed morphism is not injective")
        if not frozenset(img) <= S:
            raise InputError("seed image is not inside S")
        canon = _restrict(dom, img, doms[P])
        _check_hom(A, doms[P], canon)
        push(P, canon)

    while work:
        P, t = work.pop()
        dom = doms[P]
        I = frozenset(t)
        if I not in subs_set:
            raise InternalCheckError("morphism image is not a subgroup")
        domI = doms[I]
        # restrictions to every proper subgroup of P
        for R in subs:
            if R != P and R <= P:
                push(R, _restrict(dom, t, doms[R]))
        # inverse of the induced isomorphism P -> I
        m = dict(zip(t, dom))
        push(I, tuple(m[y] for y in domI))
        # by-image index, then compositions in both directions
        by_image[I].append((P, t))
        for u in list(store[I]):
            push(P, _compose(domI, u, t))
        for R, s in by_image[P]:
            push(R, _compose(dom, t, s))
    frozen = {P: frozenset(v) for P, v in store.items()}
    return FusionSystem(A, S, p, frozen, f"generated(seeds={len(seeds)})", bounds)


def _check_hom(A: gp.FiniteGroup, dom: tuple[int, ...], img: tuple[int, ...]) -> None:
    pos = {x: i for i, x in enumerate(dom)}
    for i, x in enumerate(dom):
        for j, y in enumerate(dom):
            if img[pos[A.mult(x, y)]] != A.mult(img[i], img[j]):
                raise InputError("seed is not a homomorphism")


def inner_system(
    ambient: gp.FiniteGroup, S: frozenset[int], p: int, bounds: Bounds = DEFAULT
) -> FusionSystem:
    return realize(ambient, S, p, within=S, bounds=bounds)


# ---------------------------------------------------------------------------
# subgroup classes


@dataclass
class Classification:
    centric: bool
    radical: bool
    quasicentric: bool | None
    weakly_closed: bool
    strongly_closed: bool
    note: str = ""


def aut_group(F: FusionSystem, P: frozenset[int]) -> tuple[gp.TableGroup, list[tuple[int, ...]]]:
    """Aut_F(P) as an abstract table group, plus the element list
    (composition of image tuples; identity first)."""
    dom = F.domain_tuple(P)
    auts = F.aut(P)
    auts = sorted(auts, key=lambda t: (t != dom, t))  # identity first
    index = {t: i for i, t in enumerate(auts)}
    table = []
    for a in auts:
        row = []
        for b in auts:
            row.append(index[_compose(dom, a, b)])
        table.append(row)
    return gp.TableGroup(table, validate=False), auts


def out_group(F: FusionSystem, P: frozenset[int]) -> gp.TableGroup:
    """Out_F(P) = Aut_F(P)/Inn(P)."""
    A, auts = aut_group(F, P)
    inn = F.inn(P)
    members = frozenset(i for i, t in enumerate(auts) if t in inn)
    return gp.quotient(A, members).group


def p_core_is_trivial(G: gp.FiniteGroup, p: int) -> bool:
    """O_p(G) = 1, computed as the intersection of all Sylow p-subgroups."""
    if G.order % p:
        return True
    P = gp.sylow(G, p)
    core = set(P)
    for Q in gp.conjugates(G, P):
        core &= Q
        if len(core) == 1:
            return True
    return len(core) == 1


def is_centric(F: FusionSystem, P: frozenset[int]) -> bool:
    A = F.ambient
    return all(
        gp.centralizer(A, Q, within=F.S) <= Q for Q in F.conjugacy_class(P)
    )


def is_radical(F: FusionSystem, P: frozenset[int]) -> bool:
    return p_core_is_trivial(out_group(F, P), F.p)


def is_weakly_closed(F: FusionSystem, P: frozenset[int]) -> bool:
    return len(F.conjugacy_class(P)) == 1


def is_strongly_closed(F: FusionSystem, P: frozenset[int]) -> bool:
    A = F.ambient
    for x in sorted(P):
        C = gp.subgroup_generated(A, [x])
        dom = tuple(sorted(C))
        i = dom.index(x)
        if any(t[i] not in P for t in F.hom_to_S(C)):
            return False
    return True


def classify(F: FusionSystem) -> dict[frozenset[int], Classification]:
    """All five flags for every subgroup.  The quasicentric flag needs
    saturation; on a non-saturated system it is None with a note."""
    saturated = bool(F.is_saturated())
    out: dict[frozenset[int], Classification] = {}
    for cls in F.classes():
        centric = is_centric(F, cls[0])
        radical = is_radical(F, F.class_representative(cls))
        qc = is_quasicentric(F, cls[0]) if saturated else None
        note = "" if saturated else "quasicentric undefined: system not saturated"
        for P in cls:
            out[P] = Classification(
                centric=centric,
                radical=radical,
                quasicentric=qc,
                weakly_closed=is_weakly_closed(F, P),
                strongly_closed=is_strongly_closed(F, P),
                note=note,
            )
    return out


# ---------------------------------------------------------------------------
# centralizer systems and quasicentricity


def centralizer_system(F: FusionSystem, Q: frozenset[int]) -> FusionSystem:
    """C_F(Q): the system over C_S(Q) whose morphisms are restrictions of
    F-morphisms on PQ that fix Q pointwise."""
    A = F.ambient
    CS = gp.centralizer(A, Q, within=F.S)
    subs = gp.subgroups_of_p_group(A, CS, F.bounds)
    domQ = tuple(sorted(Q))
    store: dict[frozenset[int], frozenset[tuple[int, ...]]] = {}
    for P in subs:
        domP = tuple(sorted(P))
        PQ = gp.subgroup_generated(A, sorted(P | Q))
        domPQ = F.domain_tuple(PQ)
        homset = set()
        for t in F.hom_to_S(PQ):
            if _restrict(domPQ, t, domQ) != domQ:
                continue
            r = _restrict(domPQ, t, domP)
            if frozenset(r) <= CS:
                homset.add(r)
        store[P] = frozenset(homset)
    return FusionSystem(A, CS, F.p, store, f"centralizer(Q={sorted(Q)})", F.bounds)


def _require_saturated(F: FusionSystem) -> None:
    if not F.is_saturated():
        raise InputError("operation requires a saturated fusion system")


def is_quasicentric(F: FusionSystem, P: frozenset[int]) -> bool:
    """Every fully centralized F-conjugate Q of P has C_F(Q) equal to the
    inner system of C_S(Q)."""
    _require_saturated(F)
    A = F.ambient
    for Q in F.conjugacy_class(P):
        if not F.is_fully_centralized(Q):
            continue
        CF = centralizer_system(F, Q)
        CS = CF.S
        inner = inner_system(A, CS, F.p, F.bounds)
        if CF._store != inner._store:
            return False
    return True


def is_strongly_quasicentric(F: FusionSystem, P: frozenset[int]) -> bool:
    """P contains a quasicentric subgroup.  For finite S this is equivalent
    to P being quasicentric itself (quasicentricity passes to overgroups),
    so reports flag the collapse rather than exposing a new class."""
    _require_saturated(F)
    A = F.ambient
    for R in gp.subgroups_of_p_group(A, P, F.bounds):
        if is_quasicentric(F, R):
            return True
    return False


# ---------------------------------------------------------------------------
# factorization through automorphism groups


@dataclass
class Factor:
    subgroup: frozenset[int]
    automorphism: Morphism
    restricted_to: tuple[int, ...]


def frc_subgroups(F: FusionSystem) -> list[frozenset[int]]:
    """Fully normalized, centric, radical subgroups, largest first."""
    out = []
    for cls in F.classes():
        if not is_centric(F, cls[0]):
            continue
        if not is_radical(F, F.class_representative(cls)):
            continue
        for P in cls:
            if F.is_fully_normalized(P):
                out.append(P)
    return sorted(out, key=lambda P: (-len(P), tuple(sorted(P))))


def alperin_decompose(F: FusionSystem, phi: Morphism) -> list[Factor]:
    """Write phi as a composite of restrictions of automorphisms of fully
    normalized centric radical subgroups.  Breadth-first over composites,
    trying larger subgroups first; exact table equality is the goal test."""
    _require_saturated(F)
    P = frozenset(phi.domain)
    if phi.domain != F.domain_tuple(P):
        phi = Morphism(F.domain_tuple(P), _restrict(phi.domain, phi.images, F.domain_tuple(P)))
    if tuple(phi.images) not in F.hom_to_S(P):
        raise InputError("morphism does not belong to the system")
    target = tuple(phi.images)
    dom = phi.domain
    frc = frc_subgroups(F)
    start = dom  # identity on P
    if start == target:
        return []
    from collections import deque

    parents: dict[tuple[int, ...], tuple[tuple[int, ...], Factor]] = {}
    queue = deque([start])
    depth = {start: 0}
    while queue:
        cur = queue.popleft()
        if depth[cur] >= F.bounds.alperin_depth:
            break
        I = frozenset(cur)
        for Q in frc:
            if not I <= Q:
                continue
            domQ = F.domain_tuple(Q)
            for a in F.aut(Q):
                nxt = _compose(domQ, a, cur)
                if nxt in depth:
                    continue
                depth[nxt] = depth[cur] + 1
                parents[nxt] = (cur, Factor(Q, Morphism(domQ, a), cur))
                if nxt == target:
                    chain: list[Factor] = []
                    t = nxt
                    while t != start:
                        t, f = parents[t]
                        chain.append(f)
                    chain.reverse()
                    _verify_chain(F, phi, chain)
                    return chain
                queue.append(nxt)
    raise DecompositionFailure(
        f"no factorization of {dom}->{target} through fully normalized"
        f" centric radical subgroups within depth {F.bounds.alperin_depth};"
        f" explored {len(depth)} composites"
    )


def _verify_chain(F: FusionSystem, phi: Morphism, chain: list[Factor]) -> None:
    cur = phi.domain
    for f in chain:
        domQ = F.domain_tuple(f.subgroup)
        if not frozenset(cur) <= f.subgroup:
            raise InternalCheckError("factor does not contain the running image")
        cur = _compose(domQ, f.automorphism.images, cur)
    if cur != phi.images:
        raise InternalCheckError("recomposed factorization differs from input")


def recompose(F: FusionSystem, domain: tuple[int, ...], chain: list[Factor]) -> Morphism:
    cur = domain
    for f in chain:
        cur = _compose(F.domain_tuple(f.subgroup), f.automorphism.images, cur)
    return Morphism(domain, cur)


# ---------------------------------------------------------------------------
# fusion-preserving isomorphism


def is_fusion_preserving(
    alpha: Morphism, F1: FusionSystem, F2: FusionSystem
) -> bool:
    """alpha: S_1 -> S_2 a group isomorphism; true when conjugating every
    morphism set of F1 by alpha gives exactly the corresponding set of F2."""
    if frozenset(alpha.domain) != F1.S or alpha.image() != F2.S:
        raise InputError("isomorphism endpoints do not match the two systems")
    A1, A2 = F1.ambient, F2.ambient
    pos0 = {x: i for i, x in enumerate(alpha.domain)}
    for i, x in enumerate(alpha.domain):
        for j, y in enumerate(alpha.domain):
            if alpha.images[pos0[A1.mult(x, y)]] != A2.mult(alpha.images[i], alpha.images[j]):
                raise InputError("alpha is not a group homomorphism")
    m = alpha.as_dict()
    for P in F1.objects:
        domP = F1.domain_tuple(P)
        imP = frozenset(m[x] for x in P)
        domImP = F2.domain_tuple(imP)
        # entry of alpha phi alpha^{-1} at y = alpha(x) is alpha(phi(x))
        back = {m[x]: x for x in domP}
        pos = {x: i for i, x in enumerate(domP)}
        translated = {
            tuple(m[t[pos[back[y]]]] for y in domImP) for t in F1.hom_to_S(P)
        }
        if translated != set(F2.hom_to_S(imP)):
            return False
    return True


def _iso_candidates(A1, S1, A2, S2):
    """Group isomorphisms S1 -> S2 by generator-image backtracking."""
    dom = sorted(S1)
    gens = gp.small_gens(A1, frozenset(S1))
    targets = sorted(S2)

    def words(A, S, gens):
        # BFS expressing every element as product of generators
        expr = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for k, g in enumerate(gens):
                    y = A.mult(x, g)
                    if y not in expr:
                        expr[y] = expr[x] + (k,)
                        nxt.append(y)
            frontier = nxt
        return expr

    expr = words(A1, S1, gens)

    def build(img_gens):
        out = {}
        for x in dom:
            v = 0
            for k in expr[x]:
                v = A2.mult(v, img_gens[k])
            if v not in S2:
                return None
            out[x] = v
        if len(set(out.values())) != len(dom):
            return None
        # homomorphism check on all pairs
        for x in dom:
            for y in dom:
                if out[A1.mult(x, y)] != A2.mult(out[x], out[y]):
                    return None
        return out

    for imgs in itertools.product(targets, repeat=len(gens)):
        ok = True
        for g, t in zip(gens, imgs):
            if A1.element_order(g) != A2.element_order(t):
                ok = False
                break
        if not ok:
            continue
        m = build(list(imgs))
        if m is not None:
            yield Morphism(tuple(dom), tuple(m[x] for x in dom))


def find_isomorphism(F1: FusionSystem, F2: FusionSystem) -> Morphism | None:
    """Brute-force search for a fusion-preserving isomorphism; None when the
    systems are not isomorphic."""
    if len(F1.S) > 64 or len(F2.S) > 64:
        raise BoundExceeded("find_isomorphism", max(len(F1.S), len(F2.S)), 64)
    if len(F1.S) != len(F2.S):
        return None
    for alpha in _iso_candidates(F1.ambient, F1.S, F2.ambient, F2.S):
        if is_fusion_preserving(alpha, F1, F2):
            return alpha
    return None


# ---------------------------------------------------------------------------
# the inner criterion


def inner_criterion(F: FusionSystem) -> bool:
    """For saturated F: true iff Aut_F(P) is a p-group for every fully
    normalized P.  Cross-checked against literal equality with the inner
    system, which is what the criterion characterizes."""
    _require_saturated(F)
    verdict = True
    for cls in F.classes():
        for P in cls:
            if F.is_fully_normalized(P):
                if not gp.is_p_group_order(len(F.aut(P)), F.p):
                    verdict = False
                break
        if not verdict:
            break
    inner = inner_system(F.ambient, F.S, F.p, F.bounds)
    direct = F._store == inner._store
    if verdict != direct:
        raise InternalCheckError(
            f"inner criterion ({verdict}) disagrees with direct comparison ({direct})"
        )
    return verdict
