"""Independent brute-force reference implementations used to freeze
expected values.  Everything here works on raw multiplication tables
(lists of lists) and deliberately avoids the package's own algorithms:
subgroups come from subset filtering, Sylow orders from arithmetic,
homomorphism sets from scanning all conjugators.
"""

from __future__ import annotations

import itertools
from math import gcd


def table_of(G) -> list[list[int]]:
    """Extract a plain multiplication table from any package group."""
    n = G.order
    return [[G.mult(i, j) for j in range(n)] for i in range(n)]


def brute_subgroups(table: list[list[int]]) -> list[frozenset[int]]:
    """All subgroups by subset filtering; exponential, for order ≤ 16 only."""
    n = len(table)
    assert n <= 16
    out = []
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            s = set(combo)
            if 0 not in s:
                continue
            if all(table[a][b] in s for a in s for b in s):
                out.append(frozenset(s))
    return out


def brute_subgroups_upto(table: list[list[int]], max_order: int) -> list[frozenset[int]]:
    n = len(table)
    out = []
    for r in range(1, max_order + 1):
        if n % r:
            continue
        for combo in itertools.combinations(range(n), r):
            s = set(combo)
            if 0 not in s:
                continue
            if all(table[a][b] in s for a in s for b in s):
                out.append(frozenset(s))
    return out


def brute_inverse(table: list[list[int]], a: int) -> int:
    return table[a].index(0)


def brute_conj(table: list[list[int]], g: int, x: int) -> int:
    return table[table[g][x]][brute_inverse(table, g)]


def brute_order(table: list[list[int]], a: int) -> int:
    n, x = 1, a
    while x != 0:
        x = table[x][a]
        n += 1
    return n


def brute_hom_tuples(
    table: list[list[int]], P: frozenset[int], S: frozenset[int], pool=None
) -> set[tuple[int, ...]]:
    """Conjugation-induced maps P -> S as image tuples over sorted(P)."""
    dom = sorted(P)
    out = set()
    candidates = range(len(table)) if pool is None else pool
    for g in candidates:
        imgs = tuple(brute_conj(table, g, x) for x in dom)
        if all(y in S for y in imgs):
            out.add(imgs)
    return out


def brute_centralizer(table, H, pool=None):
    candidates = range(len(table)) if pool is None else pool
    return frozenset(
        g for g in candidates if all(table[g][h] == table[h][g] for h in H)
    )


def brute_normalizer(table, H, pool=None):
    candidates = range(len(table)) if pool is None else pool
    return frozenset(
        g for g in candidates if {brute_conj(table, g, h) for h in H} == set(H)
    )


def brute_p_prime_closure(table: list[list[int]], p: int) -> frozenset[int]:
    """Subgroup generated by all elements of order coprime to p."""
    gens = [x for x in range(len(table)) if brute_order(table, x) % p != 0]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = table[a][g]
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(seen)


def abelianization_p_rank(table: list[list[int]], p: int) -> int:
    """dim_{F_p} of G / [G,G]G^p, the mod-p first cohomology dimension."""
    n = len(table)
    gens = []
    for a in range(n):
        for b in range(n):
            ai, bi = brute_inverse(table, a), brute_inverse(table, b)
            gens.append(table[table[a][b]][table[ai][bi]])
    for a in range(n):
        x = a
        for _ in range(p - 1):
            x = table[x][a]
        gens.append(x)
    seen = {0}
    frontier = [0]
    gens = sorted(set(gens))
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = table[a][g]
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    index = n // len(seen)
    rank = 0
    while index % p == 0:
        index //= p
        rank += 1
    assert index == 1, "quotient by [G,G]G^p is not elementary abelian"
    return rank


# --- cohomology oracle: unnormalized bar complex, pure-python elimination


def unnormalized_coboundary(table, deg, p):
    """Matrix of d: C^deg -> C^{deg+1} on the full (unnormalized) bar
    complex with F_p coefficients, rows indexed by (deg+1)-tuples."""
    n = len(table)
    cols = n**deg
    rows = n ** (deg + 1)

    def unrank(r, k):
        t = []
        for _ in range(k):
            t.append(r % n)
            r //= n
        return t

    def rank(t):
        r = 0
        for x in reversed(t):
            r = r * n + x
        return r

    mat = [dict() for _ in range(rows)]
    for r in range(rows):
        t = unrank(r, deg + 1)
        entries = mat[r]
        c = rank(t[1:])
        entries[c] = (entries.get(c, 0) + 1) % p
        for i in range(deg):
            tt = t[: i] + [table[t[i]][t[i + 1]]] + t[i + 2 :]
            c = rank(tt)
            entries[c] = (entries.get(c, 0) + (-1) ** (i + 1)) % p
        c = rank(t[:-1])
        entries[c] = (entries.get(c, 0) + (-1) ** (deg + 1)) % p
    return mat, rows, cols


def sparse_rank(rows_entries, ncols, p):
    """Row-reduction rank over F_p for a list of {col: val} rows."""
    rows = [dict(r) for r in rows_entries if r]
    pivots = {}
    rank = 0
    for row in rows:
        while row:
            c = min(row)
            if c in pivots:
                pr = pivots[c]
                factor = row[c] * pow(pr[c], p - 2, p) % p
                for cc, vv in pr.items():
                    nv = (row.get(cc, 0) - factor * vv) % p
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            else:
                pivots[c] = row
                rank += 1
                break
    return rank


def brute_h_dims(table, p, maxdeg):
    """Mod-p cohomology dimensions in degrees 0..maxdeg via the full bar
    complex: dim H^k = dim ker d^k - dim im d^{k-1}."""
    n = len(table)
    dims = []
    prev_rank = 0  # rank of d^{k-1}
    for k in range(maxdeg + 1):
        mat, rows, cols = unnormalized_coboundary(table, k, p)
        # transpose: we need rank of d^k as a map out of C^k (dimension n^k)
        by_col = [dict() for _ in range(cols)]
        for r, entries in enumerate(mat):
            for c, v in entries.items():
                if v:
                    by_col[c][r] = v
        rk = sparse_rank(by_col, rows, p)
        dim_ck = cols
        dims.append(dim_ck - rk - prev_rank)
        prev_rank = rk
    return dims
