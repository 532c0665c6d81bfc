"""Finite groups with three interchangeable representations.

Elements are always integer indices into a canonical ordering; subgroups are
frozensets of indices.  The three representations:

* permutation groups, elements stored as image tuples sorted
  lexicographically (the identity is always index 0);
* multiplication-table groups, where index 0 must be the identity;
* semidirect products V ⋊ H with V = (F_q)^d, which never materialize a
  multiplication table.  An element (v, h) has index rank(v)*|H| + idx(h)
  where rank(v) = sum v_i q^i.

Groups of order beyond the configured enumeration bound are rejected up
front rather than handled lazily: everything downstream assumes it can walk
the element list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .config import DEFAULT, Bounds
from .errors import BoundExceeded, InputError


class FiniteGroup:
    """Common interface: order, mult, inv, identity index 0, labels."""

    order: int

    def mult(self, i: int, j: int) -> int:
        raise NotImplementedError

    def inv(self, i: int) -> int:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    def element_label(self, i: int) -> str:
        return f"g{i}"

    @property
    def elements(self) -> range:
        return range(self.order)

    # generator indices; subclasses with a natural generating set override
    @property
    def generators(self) -> list[int]:
        return [i for i in self.elements if i != 0]

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.mult(self.mult(g, x), self.inv(g))

    def power(self, i: int, n: int) -> int:
        if n < 0:
            return self.power(self.inv(i), -n)
        acc, base = 0, i
        while n:
            if n & 1:
                acc = self.mult(acc, base)
            base = self.mult(base, base)
            n >>= 1
        return acc

    def element_order(self, i: int) -> int:
        cache = getattr(self, "_order_cache", None)
        if cache is None:
            cache = self._order_cache = {}
        if i in cache:
            return cache[i]
        n, x = 1, i
        while x != 0:
            x = self.mult(x, i)
            n += 1
        cache[i] = n
        return n

    def exponent_of(self, members: Iterable[int]) -> int:
        from math import lcm

        return lcm(*(self.element_order(x) for x in members)) if members else 1


def _validate_order(order: int, bounds: Bounds) -> None:
    if order > bounds.enumeration:
        raise BoundExceeded("enumeration", order, bounds.enumeration)


class PermGroup(FiniteGroup):
    """Group of permutations of {0..degree-1}, closed by BFS from generators.

    Image tuples sort the element list, which puts the identity at index 0:
    any non-identity permutation first differs from (0,1,...,n-1) at a point
    it moves upward.
    """

    def __init__(
        self,
        generators: Sequence[Sequence[int]],
        degree: int,
        bounds: Bounds = DEFAULT,
    ) -> None:
        self.degree = degree
        ident = tuple(range(degree))
        gens: list[tuple[int, ...]] = []
        for g in generators:
            t = tuple(g)
            if sorted(t) != list(range(degree)):
                raise InputError(f"not a permutation of 0..{degree-1}: {t}")
            if t != ident and t not in gens:
                gens.append(t)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = tuple(a[g[x]] for x in range(degree))
                    if c not in seen:
                        if len(seen) >= bounds.enumeration:
                            raise BoundExceeded(
                                "enumeration", f"> {len(seen)}", bounds.enumeration
                            )
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        self._elems: list[tuple[int, ...]] = sorted(seen)
        self._index = {t: i for i, t in enumerate(self._elems)}
        self.order = len(self._elems)
        self._gen_tuples = gens
        self._dense: list[list[int]] | None = None

    @property
    def generators(self) -> list[int]:
        return [self._index[t] for t in self._gen_tuples] or []

    def perm(self, i: int) -> tuple[int, ...]:
        return self._elems[i]

    def index_of(self, t: Sequence[int]) -> int:
        return self._index[tuple(t)]

    def mult(self, i: int, j: int) -> int:
        if self._dense is not None:
            return self._dense[i][j]
        a, b = self._elems[i], self._elems[j]
        return self._index[tuple(a[b[x]] for x in range(self.degree))]

    def inv(self, i: int) -> int:
        a = self._elems[i]
        out = [0] * self.degree
        for x, y in enumerate(a):
            out[y] = x
        return self._index[tuple(out)]

    def densify(self, limit: int = 2048) -> None:
        """Precompute the full multiplication table when small enough."""
        if self._dense is None and self.order <= limit:
            e, ix, n = self._elems, self._index, self.degree
            self._dense = [
                [ix[tuple(a[b[x]] for x in range(n))] for b in e] for a in e
            ]

    def element_label(self, i: int) -> str:
        return cycle_notation(self._elems[i])


def cycle_notation(t: Sequence[int]) -> str:
    seen: set[int] = set()
    parts = []
    for s in range(len(t)):
        if s in seen or t[s] == s:
            continue
        cyc = [s]
        seen.add(s)
        x = t[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = t[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


class TableGroup(FiniteGroup):
    """Explicit multiplication table; row/column 0 must be the identity."""

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        labels: Sequence[str] | None = None,
        generators: Sequence[int] | None = None,
        bounds: Bounds = DEFAULT,
        validate: bool = True,
    ) -> None:
        n = len(table)
        _validate_order(n, bounds)
        self.order = n
        self._table = [list(row) for row in table]
        self._labels = list(labels) if labels else None
        self._gens = list(generators) if generators is not None else None
        self._inv = [-1] * n
        if validate:
            self._validate()
        for i in range(n):
            for j in range(n):
                if self._table[i][j] == 0:
                    self._inv[i] = j
                    break
            if self._inv[i] < 0:
                raise InputError(f"element {i} has no inverse")

    def _validate(self) -> None:
        n = self.order
        rng = range(n)
        for i in rng:
            row = self._table[i]
            if len(row) != n or sorted(row) != list(rng):
                raise InputError(f"row {i} is not a permutation of 0..{n-1}")
            if row[0] != i or self._table[0][i] != i:
                raise InputError("element 0 is not a two-sided identity")
        # full associativity is cubic; exact below 128, sampled above
        if n <= 128:
            t = self._table
            for i in rng:
                for j in rng:
                    tij = t[i][j]
                    for k in rng:
                        if t[tij][k] != t[i][t[j][k]]:
                            raise InputError(
                                f"not associative at ({i},{j},{k})"
                            )
        else:
            import random

            rnd = random.Random(0x5EED)
            t = self._table
            for _ in range(500):
                i, j, k = (rnd.randrange(n) for _ in range(3))
                if t[t[i][j]][k] != t[i][t[j][k]]:
                    raise InputError(f"not associative at ({i},{j},{k})")

    def mult(self, i: int, j: int) -> int:
        return self._table[i][j]

    def inv(self, i: int) -> int:
        return self._inv[i]

    @property
    def generators(self) -> list[int]:
        if self._gens is not None:
            return list(self._gens)
        return [i for i in range(1, self.order)]

    def element_label(self, i: int) -> str:
        if self._labels:
            return self._labels[i]
        return f"g{i}"


class SemidirectGroup(FiniteGroup):
    """(F_q)^d ⋊ H for an explicit matrix action of H.

    ``action`` gives one invertible d×d matrix over F_q per generator of H
    (same order as H.generators); matrices for the remaining elements are
    filled in by walking H from the identity.  Multiplication is
    (v1, h1)(v2, h2) = (v1 + M(h1) v2, h1 h2), so M must be a left action:
    M(h1 h2) = M(h1) M(h2).
    """

    def __init__(
        self,
        q: int,
        dim: int,
        acting: FiniteGroup,
        action: Sequence[Sequence[Sequence[int]]],
        bounds: Bounds = DEFAULT,
    ) -> None:
        if q < 2:
            raise InputError("q must be at least 2")
        self.q = q
        self.dim = dim
        self.acting = acting
        order = q**dim * acting.order
        _validate_order(order, bounds)
        self.order = order
        gens = acting.generators
        if len(action) != len(gens):
            raise InputError(
                f"need one action matrix per generator: {len(gens)} generators,"
                f" {len(action)} matrices"
            )
        mats: dict[int, tuple[tuple[int, ...], ...]] = {
            0: tuple(
                tuple(1 if r == c else 0 for c in range(dim)) for r in range(dim)
            )
        }
        gen_mat = {}
        for g, m in zip(gens, action):
            mm = tuple(tuple(x % q for x in row) for row in m)
            if len(mm) != dim or any(len(r) != dim for r in mm):
                raise InputError("action matrix has wrong shape")
            gen_mat[g] = mm
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    hg = acting.mult(h, g)
                    if hg not in mats:
                        mats[hg] = _matmul(mats[h], gen_mat[g], q)
                        nxt.append(hg)
            frontier = nxt
        if len(mats) != acting.order:
            raise InputError("listed generators do not generate the acting group")
        for g, m in gen_mat.items():
            if mats[g] != m:
                raise InputError(
                    "action matrices are inconsistent on the generators"
                )
        self._mats = [mats[h] for h in range(acting.order)]
        for h in range(acting.order):
            # invertibility: M(h) M(h^{-1}) must be the identity
            if _matmul(self._mats[h], self._mats[acting.inv(h)], q) != mats[0]:
                raise InputError(f"action matrix of element {h} is not invertible")

    def decode(self, i: int) -> tuple[tuple[int, ...], int]:
        h = i % self.acting.order
        r = i // self.acting.order
        v = []
        for _ in range(self.dim):
            v.append(r % self.q)
            r //= self.q
        return tuple(v), h

    def encode(self, v: Sequence[int], h: int) -> int:
        r = 0
        for x in reversed(v):
            r = r * self.q + (x % self.q)
        return r * self.acting.order + h

    def act(self, h: int, v: Sequence[int]) -> tuple[int, ...]:
        m = self._mats[h]
        return tuple(
            sum(m[r][c] * v[c] for c in range(self.dim)) % self.q
            for r in range(self.dim)
        )

    def mult(self, i: int, j: int) -> int:
        v1, h1 = self.decode(i)
        v2, h2 = self.decode(j)
        w = self.act(h1, v2)
        v = tuple((a + b) % self.q for a, b in zip(v1, w))
        return self.encode(v, self.acting.mult(h1, h2))

    def inv(self, i: int) -> int:
        v, h = self.decode(i)
        hi = self.acting.inv(h)
        w = self.act(hi, v)
        return self.encode(tuple(-x % self.q for x in w), hi)

    @property
    def generators(self) -> list[int]:
        basis = [
            self.encode(tuple(1 if k == d else 0 for k in range(self.dim)), 0)
            for d in range(self.dim)
        ]
        return basis + [self.encode((0,) * self.dim, h) for h in self.acting.generators]

    def element_label(self, i: int) -> str:
        v, h = self.decode(i)
        return f"({list(v)}, {self.acting.element_label(h)})"


def _matmul(a, b, q):
    n = len(a)
    return tuple(
        tuple(sum(a[r][k] * b[k][c] for k in range(n)) % q for c in range(n))
        for r in range(n)
    )


# ---------------------------------------------------------------------------
# subgroup machinery


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    """Closure of gens under multiplication (inverses are free in a finite
    group: right-translation by a generator permutes the closure)."""
    gens = [g for g in gens]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = G.mult(a, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(seen)


def small_gens(G: FiniteGroup, H: frozenset[int]) -> list[int]:
    """Greedy generating set for H, usually far smaller than H itself."""
    gens: list[int] = []
    have = frozenset({0})
    for x in sorted(H):
        if x not in have:
            gens.append(x)
            have = subgroup_generated(G, gens)
            if have == H:
                return gens
    if have != H:
        raise InputError("subgroup set is not closed under multiplication")
    return gens


def is_subgroup(G: FiniteGroup, H: frozenset[int]) -> bool:
    if 0 not in H:
        return False
    return all(G.mult(a, b) in H for a in H for b in H)


def centralizer(
    G: FiniteGroup,
    H: Iterable[int],
    within: Iterable[int] | None = None,
) -> frozenset[int]:
    hs = list(H)
    pool = within if within is not None else G.elements
    return frozenset(
        g for g in pool if all(G.mult(g, h) == G.mult(h, g) for h in hs)
    )


def normalizer(
    G: FiniteGroup,
    H: frozenset[int],
    within: Iterable[int] | None = None,
) -> frozenset[int]:
    gens = small_gens(G, H)
    pool = within if within is not None else G.elements
    return frozenset(
        g for g in pool if all(G.conj(g, h) in H for h in gens)
    )


def transporter(
    G: FiniteGroup,
    A: frozenset[int],
    B: frozenset[int],
    within: Iterable[int] | None = None,
) -> list[int]:
    """All g (in ``within``, default G) with g A g^{-1} ≤ B."""
    gens = small_gens(G, A)
    pool = within if within is not None else G.elements
    return [g for g in pool if all(G.conj(g, a) in B for a in gens)]


def conjugate_subgroup(G: FiniteGroup, g: int, H: frozenset[int]) -> frozenset[int]:
    return frozenset(G.conj(g, h) for h in H)


def conjugates(
    G: FiniteGroup,
    H: frozenset[int],
    within_gens: Sequence[int] | None = None,
) -> list[frozenset[int]]:
    """Orbit of H under conjugation, BFS over generators."""
    gens = list(within_gens) if within_gens is not None else G.generators
    seen = {H}
    frontier = [H]
    while frontier:
        nxt = []
        for K in frontier:
            for g in gens:
                c = conjugate_subgroup(G, g, K)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen, key=sorted)


def sylow(G: FiniteGroup, p: int, bounds: Bounds = DEFAULT) -> frozenset[int]:
    """One Sylow p-subgroup, grown by the normalizer ladder: while P is not
    Sylow, N_G(P) contains a p-element outside P, and adjoining it keeps a
    p-group because P is normal in N_G(P)."""
    target = p_part(G.order, p)
    P = frozenset({0})
    gens: list[int] = []
    while len(P) < target:
        N = normalizer(G, P) if gens else G.elements
        grew = False
        for x in N:
            if x in P:
                continue
            ordx = G.element_order(x)
            if ordx % p == 0 and p_part(ordx, p) == ordx:
                cand = subgroup_generated(G, gens + [x])
                if len(cand) % p == 0 and p_part(len(cand), p) == len(cand):
                    gens.append(x)
                    P = cand
                    grew = True
                    break
        if not grew:
            raise InputError(
                f"failed to grow a p-subgroup past order {len(P)} (p={p})"
            )
    return P


def p_part(n: int, p: int) -> int:
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def all_subgroups(G: FiniteGroup, bounds: Bounds = DEFAULT) -> list[frozenset[int]]:
    """Every subgroup, by iterated one-generator extension.  Exponential in
    the worst case, hence the lattice bound."""
    if G.order > bounds.full_lattice:
        raise BoundExceeded("full_lattice", G.order, bounds.full_lattice)
    triv = frozenset({0})
    seen = {triv}
    frontier = [triv]
    while frontier:
        nxt = []
        for H in frontier:
            hgens = small_gens(G, H)
            for x in G.elements:
                if x in H:
                    continue
                K = subgroup_generated(G, hgens + [x])
                if K not in seen:
                    seen.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def subgroups_of_p_group(
    G: FiniteGroup, P: frozenset[int], bounds: Bounds = DEFAULT
) -> list[frozenset[int]]:
    """All subgroups of a p-subgroup P ≤ G (P itself small)."""
    if len(P) > bounds.full_lattice:
        raise BoundExceeded("full_lattice", len(P), bounds.full_lattice)
    triv = frozenset({0})
    seen = {triv}
    frontier = [triv]
    members = sorted(P)
    while frontier:
        nxt = []
        for H in frontier:
            hgens = small_gens(G, H)
            for x in members:
                if x in H:
                    continue
                K = subgroup_generated(G, hgens + [x])
                if K not in seen:
                    seen.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def p_subgroups(
    G: FiniteGroup,
    p: int,
    up_to_conjugacy: bool = False,
    bounds: Bounds = DEFAULT,
) -> list[frozenset[int]]:
    """All p-subgroups (or conjugacy class representatives).  Complete by
    Sylow's theorem: every p-subgroup lies in a conjugate of one Sylow."""
    P = sylow(G, p, bounds)
    inside = subgroups_of_p_group(G, P, bounds)
    if up_to_conjugacy:
        out = []
        covered: set[frozenset[int]] = set()
        for H in inside:
            if H in covered:
                continue
            orbit = conjugates(G, H)
            covered.update(o for o in orbit if o in set(inside))
            out.append(min(orbit, key=sorted))
        return sorted(out, key=lambda s: (len(s), sorted(s)))
    seen: set[frozenset[int]] = set()
    for H in inside:
        seen.update(conjugates(G, H))
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def p_residual(G: FiniteGroup, p: int) -> frozenset[int]:
    """Subgroup generated by all elements of order prime to p: the smallest
    normal subgroup with p-group quotient."""
    H = frozenset({0})
    gens: list[int] = []
    for x in G.elements:
        if G.element_order(x) % p != 0 and x not in H:
            gens.append(x)
            H = subgroup_generated(G, gens)
    return H


def has_normal_p_complement(G: FiniteGroup, p: int) -> bool:
    R = p_residual(G, p)
    return len(R) % p != 0


def is_normal(G: FiniteGroup, N: frozenset[int]) -> bool:
    gens = G.generators
    ngens = small_gens(G, N)
    return all(G.conj(g, x) in N for g in gens for x in ngens)


@dataclass
class QuotientMap:
    group: TableGroup
    projection: list[int]  # element of G -> element of G/N

    def __call__(self, i: int) -> int:
        return self.projection[i]


def quotient(G: FiniteGroup, N: frozenset[int]) -> QuotientMap:
    """G/N as a table group; coset of the identity is element 0 and cosets
    are ordered by their minimal member."""
    if not is_normal(G, N):
        raise InputError("quotient by a non-normal subgroup")
    nlist = sorted(N)
    coset_of = [-1] * G.order
    reps: list[int] = []
    for g in G.elements:
        if coset_of[g] >= 0:
            continue
        members = [G.mult(g, n) for n in nlist]
        rep = min(members)
        idx = len(reps)
        reps.append(rep)
        for m in members:
            coset_of[m] = idx
    # reorder so rep list is sorted; identity coset has rep 0, stays first
    order_map = sorted(range(len(reps)), key=lambda i: reps[i])
    newpos = [0] * len(reps)
    for new, old in enumerate(order_map):
        newpos[old] = new
    reps = [reps[i] for i in order_map]
    coset_of = [newpos[c] for c in coset_of]
    k = len(reps)
    table = [[coset_of[G.mult(reps[a], reps[b])] for b in range(k)] for a in range(k)]
    Q = TableGroup(table, labels=[f"[{G.element_label(r)}]" for r in reps])
    return QuotientMap(Q, coset_of)


def sub_as_group(G: FiniteGroup, members: Iterable[int]) -> tuple[TableGroup, list[int]]:
    """A subgroup of G as a standalone table group.

    Returns (H, to_ambient) where to_ambient[i] is the G-index of element
    i of H.  Members are sorted, which puts the identity first.
    """
    amb = sorted(set(members))
    if not amb or amb[0] != 0:
        raise InputError("subgroup does not contain the identity")
    local = {a: i for i, a in enumerate(amb)}
    try:
        table = [[local[G.mult(a, b)] for b in amb] for a in amb]
    except KeyError:
        raise InputError("subgroup set is not closed under multiplication") from None
    H = TableGroup(
        table,
        labels=[G.element_label(a) for a in amb],
        validate=False,
    )
    return H, amb


def torsion_layer(G: FiniteGroup, A: frozenset[int], p: int, n: int) -> frozenset[int]:
    """Elements of A killed by p^n.  A must be abelian for this to be a
    subgroup; trusted, not checked."""
    pn = p**n
    return frozenset(a for a in A if G.power(a, pn) == 0)


def is_abelian_subset(G: FiniteGroup, H: Iterable[int]) -> bool:
    hs = list(H)
    return all(
        G.mult(a, b) == G.mult(b, a) for a, b in itertools.combinations(hs, 2)
    )


def is_p_group_order(n: int, p: int) -> bool:
    return p_part(n, p) == n


# ---------------------------------------------------------------------------
# builders


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([], 1)
    return PermGroup([tuple((i + 1) % n for i in range(n))], n)


def dihedral(order: int) -> PermGroup:
    """Dihedral group of the given (even, ≥ 4) order."""
    if order % 2 or order < 4:
        raise InputError("dihedral order must be even and at least 4")
    n = order // 2
    if n == 2:
        return PermGroup([(1, 0, 2, 3), (0, 1, 3, 2)], 4)
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((n - i) % n for i in range(n))
    return PermGroup([rot, ref], n)


def symmetric(n: int) -> PermGroup:
    if n < 2:
        return PermGroup([], max(n, 1))
    transp = tuple([1, 0] + list(range(2, n)))
    cyc = tuple((i + 1) % n for i in range(n))
    return PermGroup([transp, cyc], n)


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup([], max(n, 1))
    threecyc = tuple([1, 2, 0] + list(range(3, n)))
    if n == 3:
        return PermGroup([threecyc], 3)
    if n % 2:
        rest = tuple((i + 1) % n for i in range(n))
    else:
        rest = tuple([0] + [1 + (i % (n - 1)) for i in range(1, n)])
    return PermGroup([threecyc, rest], n)


def quaternion8() -> TableGroup:
    """Q_8 with elements 1, -1, i, -i, j, -j, k, -k in that order."""
    units = ["1", "i", "j", "k"]
    # (sign, unit) product table for the quaternion units
    def umul(a: str, b: str) -> tuple[int, str]:
        if a == "1":
            return 1, b
        if b == "1":
            return 1, a
        if a == b:
            return -1, "1"
        cyc = {("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j"}
        if (a, b) in cyc:
            return 1, cyc[(a, b)]
        return -1, cyc[(b, a)]

    elems = [(s, u) for u in units for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s3, u3 = umul(u1, u2)
            row.append(index[(s1 * s2 * s3, u3)])
        table.append(row)
    labels = [("" if s == 1 else "-") + u for s, u in elems]
    return TableGroup(table, labels=labels, generators=[index[(1, "i")], index[(1, "j")]])


def semidihedral16() -> PermGroup:
    """Order 16: an 8-cycle r and s with s r s^{-1} = r^3."""
    rot = tuple((i + 1) % 8 for i in range(8))
    tw = tuple((3 * i) % 8 for i in range(8))
    G = PermGroup([rot, tw], 8)
    if G.order != 16:
        raise InputError("semidihedral construction is wrong")
    return G


def gl2_3() -> PermGroup:
    """GL_2(F_3) acting on the 8 nonzero vectors of (F_3)^2."""
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}

    def perm_of(m):
        return tuple(
            idx[((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)]
            for (a, b) in vecs
        )

    gens = [perm_of(((1, 1), (0, 1))), perm_of(((0, 2), (1, 0))), perm_of(((1, 0), (0, 2)))]
    G = PermGroup(gens, 8)
    if G.order != 48:
        raise InputError("GL_2(3) construction is wrong")
    return G


def as_perm_group(G: FiniteGroup) -> PermGroup:
    """Regular (Cayley) permutation representation."""
    if isinstance(G, PermGroup):
        return G
    gens = [tuple(G.mult(x, g) for x in G.elements) for g in G.generators]
    return PermGroup(gens, G.order)


def direct_product(*groups: FiniteGroup) -> PermGroup:
    """Direct product as a permutation group on the disjoint union of the
    factors' domains (factors converted to regular representations first
    when they are not permutation groups)."""
    perms = [as_perm_group(G) for G in groups]
    degs = [P.degree for P in perms]
    total = sum(degs)
    gens = []
    off = 0
    for P in perms:
        for g in P._gen_tuples:
            t = list(range(total))
            for x in range(P.degree):
                t[off + x] = off + g[x]
            gens.append(tuple(t))
        off += P.degree
    return PermGroup(gens, max(total, 1))


def elementary_abelian(p: int, rank: int) -> PermGroup:
    return direct_product(*(cyclic(p) for _ in range(rank)))
