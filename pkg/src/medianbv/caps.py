"""Size caps for exhaustive scans.

Defaults can be overridden with the ``MEDIAN_BV_SIZE_CAPS`` environment
variable, e.g. ``MEDIAN_BV_SIZE_CAPS="subalgebras=24,shadow=14"``.

=================  =======  ==============================================
name               default  bounds
=================  =======  ==============================================
median_axioms      64       n for the n^5 M3 scan
pretree_axioms     64       n for the n^4 B3/A3 scan
subalgebras        12       n for subalgebra enumeration (total variation)
linear_subsets     12       n for brute-force linear subset enumeration
convex_subsets     16       n of the target in is_convexity_preserving
shadow             12       n for shadow_topology
fragmented         15       n for the 2^n fragmentability scan
violations         10       violations kept in an AxiomReport
=================  =======  ==============================================
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from .errors import InvalidInput, SizeCapExceeded

ENV_VAR = "MEDIAN_BV_SIZE_CAPS"

DEFAULTS = {
    "median_axioms": 64,
    "pretree_axioms": 64,
    "subalgebras": 12,
    "linear_subsets": 12,
    "convex_subsets": 16,
    "shadow": 12,
    "fragmented": 15,
    "violations": 10,
}

_overrides: dict[str, int] = {}


def _parse_env(text: str) -> dict[str, int]:
    out = {}
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULTS:
            raise InvalidInput(f"bad {ENV_VAR} entry: {item!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise InvalidInput(f"bad {ENV_VAR} entry: {item!r}") from None
    return out


def get(name: str) -> int:
    if name not in DEFAULTS:
        raise InvalidInput(f"unknown size cap {name!r}")
    if name in _overrides:
        return _overrides[name]
    env = os.environ.get(ENV_VAR)
    if env:
        parsed = _parse_env(env)
        if name in parsed:
            return parsed[name]
    return DEFAULTS[name]


def require(name: str, n: int, what: str | None = None) -> None:
    cap = get(name)
    if n > cap:
        raise SizeCapExceeded(what or name, n, cap)


@contextmanager
def override(**caps: int):
    """Temporarily raise or lower caps (process-wide, not thread-local)."""
    unknown = set(caps) - set(DEFAULTS)
    if unknown:
        raise InvalidInput(f"unknown caps: {sorted(unknown)}")
    saved = dict(_overrides)
    _overrides.update(caps)
    try:
        yield
    finally:
        _overrides.clear()
        _overrides.update(saved)
