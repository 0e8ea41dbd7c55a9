"""Exact module checks for Schrodinger-Virasoro algebras.

Thin wrappers over the C++ core. Rationals are passed and returned as
strings ("3/2"); structured reports come back as dicts.
"""

import json

from . import _svir
from ._svir import UsageError, __version__, act, bracket, run, typo_ledger_hash

__all__ = [
    "UsageError",
    "act",
    "bracket",
    "deformation",
    "run",
    "solve_ansatz",
    "typo_ledger_hash",
    "verify_family",
]


def verify_family(family, params, window=12, genrange="3", sector="1/2"):
    return json.loads(_svir.verify_family(family, params, window, str(genrange), sector))


def solve_ansatz(a, b, bp=None, sector="1/2", window=8, genrange="2", f0="1", d0="0"):
    return json.loads(
        _svir.solve_ansatz(
            str(a), str(b), "" if bp is None else str(bp), sector, window, str(genrange), str(f0), str(d0)
        )
    )


def deformation(preset, alpha="1"):
    return json.loads(_svir.deformation(preset, str(alpha)))
