"""Reading and writing the on-disk formats.

Group files are JSON with a ``kind`` tag:

* ``{"kind": "perm", "degree": n, "generators": [[[0,1,2]], ...]}``
  where each generator is a list of cycles (lists of points);
* ``{"kind": "table", "order": n, "table": [[...], ...]}``
  with element 0 the identity;
* ``{"kind": "semidirect", "q": q, "dim": d, "acting": <group>,
  "action": [<d×d matrix>, ...]}`` with one matrix per generator of the
  acting group.

The canonical element ordering (sorted image tuples for permutation groups,
table index for table groups, rank(v)*|H| + h for semidirect products) is
part of the format: reports refer to elements by these indices.

Tower files list the levels oldest first plus one embedding per step, given
by generator images; subgroup and sub-tower files reference elements by
canonical index.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

from .config import DEFAULT, Bounds
from .errors import InputError
from . import groups as gp


def _cycles_to_tuple(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        if not cyc:
            continue
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            if not (0 <= a < degree):
                raise InputError(f"cycle point {a} out of range 0..{degree-1}")
            img[a] = b
    return tuple(img)


def _tuple_to_cycles(t: Sequence[int]) -> list[list[int]]:
    seen: set[int] = set()
    out = []
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
        out.append(cyc)
    return out


def group_from_data(data: Any, bounds: Bounds = DEFAULT) -> gp.FiniteGroup:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("group data must be an object with a 'kind' field")
    kind = data["kind"]
    if kind == "perm":
        try:
            degree = int(data["degree"])
            gens = [_cycles_to_tuple(g, degree) for g in data["generators"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad perm group data: {e}") from None
        return gp.PermGroup(gens, degree, bounds)
    if kind == "table":
        try:
            table = data["table"]
            n = int(data["order"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad table group data: {e}") from None
        if len(table) != n:
            raise InputError(f"order field says {n} but table has {len(table)} rows")
        return gp.TableGroup(table, labels=data.get("labels"), bounds=bounds)
    if kind == "semidirect":
        try:
            acting = group_from_data(data["acting"], bounds)
            return gp.SemidirectGroup(
                int(data["q"]), int(data["dim"]), acting, data["action"], bounds
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad semidirect group data: {e}") from None
    raise InputError(f"unknown group kind {kind!r}")


def group_to_data(G: gp.FiniteGroup) -> dict:
    if isinstance(G, gp.PermGroup):
        return {
            "kind": "perm",
            "degree": G.degree,
            "generators": [_tuple_to_cycles(t) for t in G._gen_tuples],
        }
    if isinstance(G, gp.TableGroup):
        return {"kind": "table", "order": G.order, "table": G._table}
    if isinstance(G, gp.SemidirectGroup):
        return {
            "kind": "semidirect",
            "q": G.q,
            "dim": G.dim,
            "acting": group_to_data(G.acting),
            "action": [
                [list(row) for row in G._mats[h]] for h in G.acting.generators
            ],
        }
    raise InputError(f"cannot serialize group of type {type(G).__name__}")


def load_group(path: str | Path, bounds: Bounds = DEFAULT) -> gp.FiniteGroup:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e}") from None
    return group_from_data(data, bounds)


def save_group(G: gp.FiniteGroup, path: str | Path) -> None:
    Path(path).write_text(dumps(group_to_data(G)))


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def load_subgroup(
    path: str | Path, G: gp.FiniteGroup, bounds: Bounds = DEFAULT
) -> frozenset[int]:
    """Subgroup file: {"members": [...]} or {"gen_indices": [...]},
    indices into the parent group's canonical ordering."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e}") from None
    return subgroup_from_data(data, G)


def subgroup_from_data(data: Any, G: gp.FiniteGroup) -> frozenset[int]:
    if isinstance(data, dict) and "members" in data:
        members = frozenset(int(x) for x in data["members"])
        if any(not (0 <= x < G.order) for x in members):
            raise InputError("subgroup member index out of range")
        if not gp.is_subgroup(G, members):
            raise InputError("member set is not closed under multiplication")
        return members
    if isinstance(data, dict) and "gen_indices" in data:
        gens = [int(x) for x in data["gen_indices"]]
        if any(not (0 <= x < G.order) for x in gens):
            raise InputError("generator index out of range")
        return gp.subgroup_generated(G, gens)
    raise InputError("subgroup file needs a 'members' or 'gen_indices' field")


def load_seeds(path: str | Path) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Seed file for fusion generation: [{"domain": [...], "images": [...]}]
    with parallel arrays of element indices."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e}") from None
    if not isinstance(data, list):
        raise InputError("seed file must be a list")
    out = []
    for k, entry in enumerate(data):
        try:
            dom = tuple(int(x) for x in entry["domain"])
            img = tuple(int(x) for x in entry["images"])
        except (KeyError, TypeError, ValueError):
            raise InputError(f"seed {k}: needs 'domain' and 'images' arrays") from None
        if len(dom) != len(img):
            raise InputError(f"seed {k}: domain and images have different lengths")
        out.append((dom, img))
    return out


# named builders, for corpus generation and descriptor files


def named_group(name: str) -> gp.FiniteGroup:
    """Small-group zoo by name: Cn, Dn (n = order), Sn, An, Q8, SD16, V4,
    GL23, SL23, F20, F21, and x-products like 'C2xC2xS3'."""
    name = name.strip()
    if "x" in name:
        parts = name.split("x")
        return gp.direct_product(*(named_group(p) for p in parts))
    if name == "V4":
        return gp.direct_product(gp.cyclic(2), gp.cyclic(2))
    if name == "Q8":
        return gp.quaternion8()
    if name == "SD16":
        return gp.semidihedral16()
    if name == "GL23":
        return gp.gl2_3()
    if name == "SL23":
        return _sl2_3()
    if name == "F20":
        return gp.PermGroup([(1, 2, 3, 4, 0), (0, 2, 4, 1, 3)], 5)
    if name == "F21":
        return gp.PermGroup([(1, 2, 3, 4, 5, 6, 0), (0, 2, 4, 6, 1, 3, 5)], 7)
    if name.startswith("C") and name[1:].isdigit():
        return gp.cyclic(int(name[1:]))
    if name.startswith("D") and name[1:].isdigit():
        return gp.dihedral(int(name[1:]))
    if name.startswith("S") and name[1:].isdigit():
        return gp.symmetric(int(name[1:]))
    if name.startswith("A") and name[1:].isdigit():
        return gp.alternating(int(name[1:]))
    raise InputError(f"unknown group name {name!r}")


def _sl2_3() -> gp.PermGroup:
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}

    def perm_of(m):
        return tuple(
            idx[((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)]
            for (a, b) in vecs
        )

    G = gp.PermGroup([perm_of(((1, 1), (0, 1))), perm_of(((0, 2), (1, 0)))], 8)
    if G.order != 24:
        raise InputError("SL_2(3) construction is wrong")
    return G


def group_spec_from_data(data: Any) -> gp.FiniteGroup:
    """A group given either by name or inline."""
    if isinstance(data, str):
        return named_group(data)
    return group_from_data(data)


# tower files


def tower_to_data(T) -> dict:
    data = {
        "kind": "tower",
        "p": T.p,
        "tower_kind": T.kind,
        "levels": [group_to_data(T.level(i)) for i in range(T.depth)],
        "embeddings": [],
    }
    for i in range(T.depth - 1):
        m = T.element_map(i)
        gens = T.level(i).generators
        data["embeddings"].append(
            {"gen_indices": list(gens), "gen_images": [m[g] for g in gens]}
        )
    return data


def tower_from_data(data: Any, bounds: Bounds = DEFAULT):
    from . import towers

    if not isinstance(data, dict) or data.get("kind") != "tower":
        raise InputError("tower file needs kind 'tower'")
    try:
        p = int(data["p"])
        level_specs = data["levels"]
        emb_specs = data["embeddings"]
    except (KeyError, TypeError, ValueError):
        raise InputError("tower file needs 'p', 'levels' and 'embeddings'") from None
    levels = [group_spec_from_data(spec) for spec in level_specs]
    if len(emb_specs) != max(len(levels) - 1, 0):
        raise InputError("tower file needs one embedding per adjacent level pair")
    maps = []
    for i, spec in enumerate(emb_specs):
        try:
            gens = [int(x) for x in spec["gen_indices"]]
            imgs = [int(x) for x in spec["gen_images"]]
        except (KeyError, TypeError, ValueError):
            raise InputError(
                f"embedding {i}: needs 'gen_indices' and 'gen_images' arrays"
            ) from None
        if len(gens) != len(imgs):
            raise InputError(f"embedding {i}: index and image arrays differ in length")
        maps.append(towers.extend_hom(levels[i], levels[i + 1], dict(zip(gens, imgs))))
    kind = data.get("tower_kind", "ambient")
    return towers.TowerGroup(levels, maps, p, kind, bounds)


def load_tower(path: str | Path, bounds: Bounds = DEFAULT):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e}") from None
    return tower_from_data(data, bounds)


def save_tower(T, path: str | Path) -> None:
    Path(path).write_text(dumps(tower_to_data(T)))


def subtower_to_data(S) -> dict:
    return {
        "kind": "subtower",
        "members": [sorted(m) for m in S.members],
    }


def subtower_from_data(data: Any, T):
    from . import towers

    if not isinstance(data, dict) or data.get("kind") != "subtower":
        raise InputError("sub-tower file needs kind 'subtower'")
    members = data.get("members")
    if not isinstance(members, list):
        raise InputError("sub-tower file needs a 'members' list of lists")
    return towers.SubTower(T, [frozenset(int(x) for x in m) for m in members])


def load_subtower(path: str | Path, T):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e}") from None
    return subtower_from_data(data, T)


def save_subtower(S, path: str | Path) -> None:
    Path(path).write_text(dumps(subtower_to_data(S)))
