import pytest

from fano4.fan import product_fan, projective_space_fan, split_bundle_fan, star_subdivision

ACCEPTANCE_LINES: list[str] = []


def s4_fan():
    f = projective_space_fan(2)
    for cone in [(0, 1), (1, 2), (0, 2)]:
        f = star_subdivision(f, cone)
    return f


def k4_fan():
    return product_fan(projective_space_fan(2), s4_fan())


def d1_fan(b, c, order=(0, 1, 2)):
    cones = ((3, 4), (3, 5), (4, 5))
    f = split_bundle_fan((0, b, c))
    for k in order:
        f = star_subdivision(f, cones[k])
    return f


@pytest.fixture(scope="session")
def catalog_fans():
    """Every toric fourfold the catalog constructs, keyed by a label."""
    fans = {
        "P4": projective_space_fan(4),
        "P2xP2": product_fan(projective_space_fan(2), projective_space_fan(2)),
        "Bl_line_P4": star_subdivision(projective_space_fan(4), (0, 1, 2)),
        "K4": k4_fan(),
    }
    for d in [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2)]:
        fans[f"Z{d}"] = split_bundle_fan(d)
    for b, c in [(0, 1), (0, 2), (1, 2)]:
        fans[f"d1{(b, c)}"] = d1_fan(b, c)
    return fans


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
