"""Process kinds shared by every module.

Four irreversible processes run on a finite graph, all driven by i.i.d.
uniform event times on (0,1):

* blocking    -- monomer deposition with nearest-neighbor exclusion; one
                 arrival time per vertex, an arrival is accepted iff no
                 neighbor is already occupied.
* dimer       -- dimer deposition; one arrival time per edge, accepted iff
                 both endpoints are vacant, occupying both.
* annihilation -- all sites start occupied; at each edge's event time one
                 endpoint (fair coin) annihilates the other if both are
                 still occupied.
* map         -- multiple annihilation: a still-occupied site annihilates
                 all of its neighbors at its own event time.
"""
from __future__ import annotations

import enum


class ProcessKind(enum.Enum):
    BLOCKING = "blocking"
    DIMER = "dimer"
    ANNIHILATION = "annihilation"
    MAP = "map"

    @property
    def edge_driven(self) -> bool:
        """True when events live on edges (dimer, annihilation)."""
        return self in (ProcessKind.DIMER, ProcessKind.ANNIHILATION)

    @property
    def initial_state(self) -> int:
        """Site state at time 0: vacant (0) for deposition, occupied (1) otherwise."""
        return 1 if self in (ProcessKind.ANNIHILATION, ProcessKind.MAP) else 0


def parse_kind(name: str) -> ProcessKind:
    try:
        return ProcessKind(name.lower())
    except ValueError:
        valid = ", ".join(k.value for k in ProcessKind)
        raise ValueError(f"unknown process kind {name!r} (expected one of: {valid})") from None
