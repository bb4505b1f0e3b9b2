from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pigdual import families as F
from pigdual.finalg import LATTICE, FinAlgebra, Signature, power, product, subalgebra, subuniverse_generated

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

UNARY = Signature((("meet", 2), ("join", 2), ("u", 1)))


def small_lattices() -> list[FinAlgebra]:
    return [F.chain(n) for n in range(1, 5)] + [F.boolean_lattice(2), product([F.chain(3), F.chain(2)], "3x2")]


@st.composite
def sublattices_of_cube(draw) -> FinAlgebra:
    """A random sublattice of 2^3 (every finite distributive lattice of
    width ≤ 3 with ≤ 8 elements arises this way)."""
    cube = F.boolean_lattice(3)
    seed = draw(st.lists(st.integers(0, 7), min_size=1, max_size=4))
    sub = subuniverse_generated(cube, seed)
    return subalgebra(cube, sub, f"L{''.join(map(str, sub.members))}")


@st.composite
def lattices(draw) -> FinAlgebra:
    return draw(st.one_of(st.sampled_from(small_lattices()), sublattices_of_cube()))


@st.composite
def with_unary(draw, base: FinAlgebra, max_size: int = 5) -> FinAlgebra:
    u = draw(st.lists(st.integers(0, base.size - 1), min_size=base.size, max_size=base.size))
    return FinAlgebra(base.id + "u", base.size, UNARY,
                      {"meet": base.meet, "join": base.join, "u": np.array(u)})


@st.composite
def hom_pairs(draw):
    """(A, B) with a common signature and |B|^|A| small enough to exhaust."""
    A = draw(lattices())
    B = draw(lattices())
    if B.size ** A.size > 5000:
        A = F.chain(min(A.size, 4))
        B = F.chain(min(B.size, 4))
    if draw(st.booleans()):
        A, B = draw(with_unary(A)), draw(with_unary(B))
    return A, B


@pytest.fixture(scope="session")
def kleene():
    return F.kleene_setup()


@pytest.fixture(scope="session")
def kleene_ego(kleene):
    return kleene.alter_ego()


@pytest.fixture(scope="session")
def odd1():
    return F.sugihara_setup("odd", 1)


@pytest.fixture(scope="session")
def odd2():
    return F.sugihara_setup("odd", 2)


@pytest.fixture(scope="session")
def even2():
    return F.sugihara_setup("even", 2)


@pytest.fixture(scope="session")
def K3():
    return F.kleene3()


@pytest.fixture(scope="session")
def K3sq(K3):
    return power(K3, 2)


def lattice_only(A: FinAlgebra) -> FinAlgebra:
    return FinAlgebra(A.id, A.size, LATTICE, {"meet": A.meet, "join": A.join})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
