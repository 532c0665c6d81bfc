"""Enumeration and linear-algebra bounds.

All bounds are engineering knobs, not mathematical content.  Defaults are
sized for desk-scale experiments; every consumer raises
:class:`plocal.errors.BoundExceeded` rather than silently truncating.

Environment variables named ``PLOCAL_<FIELD>`` (upper-cased field name,
integer value) override the defaults, e.g. ``PLOCAL_ENUMERATION=20000``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass
class Bounds:
    # largest group whose elements we will fully enumerate
    enumeration: int = 10_000
    # largest group whose full subgroup lattice we will compute;
    # p-subgroups of larger groups go through a Sylow subgroup instead
    full_lattice: int = 512
    # group-order ceilings for cohomology in top degree 2 and 3
    cohomology_deg2: int = 100
    cohomology_deg3: int = 30
    # per-morphism-set size past which linking axiom (C) is checked on
    # generators only
    axiom_c_full: int = 2_000
    # factorization search depth for Alperin decompositions
    alperin_depth: int = 64
    # consecutive constant levels required before a tower-level quantity
    # is declared stabilized
    window: int = 2

    @classmethod
    def from_env(cls) -> "Bounds":
        kw = {}
        for f in fields(cls):
            raw = os.environ.get(f"PLOCAL_{f.name.upper()}")
            if raw is not None:
                try:
                    kw[f.name] = int(raw)
                except ValueError:
                    raise ValueError(
                        f"PLOCAL_{f.name.upper()} must be an integer, got {raw!r}"
                    ) from None
        return cls(**kw)


DEFAULT = Bounds()
