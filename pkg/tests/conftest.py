import pytest

from jamkit.graphs import complete, cycle, line, star


@pytest.fixture(scope="session")
def small_graphs():
    """Named fixture graphs used by oracle/simulation cross-checks."""
    return {
        "path2": line(2), "path3": line(3), "path4": line(4), "path5": line(5),
        "cycle3": cycle(3), "cycle4": cycle(4), "cycle5": cycle(5),
        "star3": star(3), "star4": star(4), "k4": complete(4),
    }
