"""Intra mode tables, MPM derivation, and the mode-bit surrogate."""

from __future__ import annotations

PLANAR = 0
DC = 1
VERTICAL = 26
N_MODES = 35

# Rough-mode-decision candidate count by depth: 3 for 64/32/16, 8 for 8/4.
RMD_PREFIX = (3, 3, 3, 8, 8)


def derive_mpm(left: int | None, above: int | None) -> tuple[int, int, int]:
    """Three most probable modes from the neighbor PU modes.

    Absent neighbors default to DC.  Equal angular neighbors yield the mode
    plus its two angular neighbors (wrapping within 2..34); equal
    non-angular neighbors yield {planar, DC, vertical}; distinct neighbors
    are kept and completed with the first unused of (planar, DC, vertical).
    """
    if left is None:
        left = DC
    if above is None:
        above = DC
    if left == above:
        if left < 2:
            return (PLANAR, DC, VERTICAL)
        m = left
        prev = 2 + (m - 2 - 1) % 33
        nxt = 2 + (m - 2 + 1) % 33
        return (m, prev, nxt)
    for extra in (PLANAR, DC, VERTICAL):
        if extra not in (left, above):
            return (left, above, extra)
    raise AssertionError("unreachable: three fillers, two neighbors")


def mode_bits(mode: int, mpms: tuple[int, int, int]) -> int:
    """Signaling-bit surrogate: 2 bits for an MPM, 6 otherwise."""
    return 2 if mode in mpms else 6
