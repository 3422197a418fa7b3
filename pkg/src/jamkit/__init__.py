"""jamkit: irreversible deposition and annihilation processes on graphs.

Four processes (blocking deposition, dimer deposition, pairwise annihilation,
multiple annihilation) run to a jammed state by time 1.  The package provides
graph generators and surgery, exact trajectory simulation, closed-form tree
statistics with rigorous lattice bounds, an exact enumeration oracle for
small graphs, and seeded Monte Carlo estimation with CLT diagnostics.
"""
from .processes import ProcessKind, parse_kind

__version__ = "0.1.0"
__all__ = ["ProcessKind", "parse_kind", "__version__"]
