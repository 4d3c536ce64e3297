import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tame_eisenstein.modular_symbols import CuspidalLattice, build_space, eisenstein_local  # noqa: E402
from tame_eisenstein.tame_group_ring import TameContext  # noqa: E402

FIXTURES = [(14, 5, 11), (10, 7, 29)]


@lru_cache(maxsize=None)
def space(N, k):
    return build_space(N, k)


@lru_cache(maxsize=None)
def lattice(N, k):
    return CuspidalLattice(space(N, k))


@lru_cache(maxsize=None)
def local_report(k, p, N):
    return eisenstein_local(space(N, k), p, lattice=lattice(N, k))


@pytest.fixture(params=FIXTURES, ids=lambda t: "k{}-p{}-N{}".format(*t))
def triple(request):
    k, p, N = request.param
    return k, TameContext(N, p, k=k)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
