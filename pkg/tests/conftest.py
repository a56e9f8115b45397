import pytest

from femtoreuse.config import ScenarioConfig
from femtoreuse.deployment import (
    Deployment, FapSite, Point, UserEquipment, build_cluster, neighbor_graph,
)
from femtoreuse.spectrum import Band
from femtoreuse.sweep import total_band


def make_deployment(positions, *, reference=(200.0, 0.0), ue_offset=5.0, threshold=60.0,
                    radius=10.0, inner=5.0):
    """Reference FAP 0 plus FAPs 1..n at ``positions`` under macrocell 0."""
    faps = [FapSite(0, Point(*reference), radius, inner, 0)]
    faps += [FapSite(k, Point(float(x), float(y)), radius, inner, 0)
             for k, (x, y) in enumerate(positions, start=1)]
    ue = UserEquipment(Point(reference[0] + ue_offset, reference[1]), serving_fap=0)
    return Deployment(
        macrocells=tuple(build_cluster(1000.0)),
        faps=tuple(faps),
        reference_ue=ue,
        neighbor_edges=neighbor_graph(faps, threshold),
        neighbor_threshold=threshold,
        walls_between_femtocells=1,
    )


@pytest.fixture
def total() -> Band:
    return total_band(ScenarioConfig())


@pytest.fixture
def small_total() -> Band:
    return Band.from_mhz(0, 30)


# Acceptance criteria record one line each here; the lines are echoed in the
# terminal summary so they appear in plain ``pytest -v`` output.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _report(criterion: int, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
