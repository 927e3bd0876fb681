import json
from itertools import combinations

import pytest

from fano4.errors import DomainError, StructuralError
from fano4.fan import (
    Fan,
    product_fan,
    projective_space_fan,
    split_bundle_fan,
    star_subdivision,
    validate_fan,
)

from conftest import k4_fan, s4_fan


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_space(n):
    f = projective_space_fan(n)
    assert f.n_rays == n + 1 and len(f.max_cones) == n + 1
    v = validate_fan(f)
    assert v.smooth and v.complete and not v.diagnostics


def test_projective_plane_rays():
    assert set(projective_space_fan(2).rays) == {(1, 0), (0, 1), (-1, -1)}
    assert set(projective_space_fan(1).rays) == {(1,), (-1,)}


@pytest.mark.parametrize("n", [0, 5, -1])
def test_projective_space_out_of_range(n):
    with pytest.raises(DomainError):
        projective_space_fan(n)


def test_products():
    p1, p2 = projective_space_fan(1), projective_space_fan(2)
    f = product_fan(p2, p2)
    assert (f.n_rays, len(f.max_cones), f.picard_number) == (6, 9, 2)
    g = product_fan(p1, p1)
    assert (g.n_rays, len(g.max_cones)) == (4, 4)
    k4 = k4_fan()
    assert (k4.n_rays, len(k4.max_cones), k4.picard_number) == (9, 18, 5)
    for fan in (f, g, k4):
        v = validate_fan(fan)
        assert v.smooth and v.complete


def test_product_dimension_overflow():
    with pytest.raises(DomainError):
        product_fan(projective_space_fan(3), projective_space_fan(2))


def test_s4_is_hexagon():
    f = s4_fan()
    assert f.n_rays == 6 and len(f.max_cones) == 6 and f.picard_number == 4
    assert set(f.rays) == {(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0), (0, -1)}


@pytest.mark.parametrize("degrees", [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 2), (0, 3, 3), (0, 2)])
def test_split_bundle_fan(degrees):
    f = split_bundle_fan(degrees)
    r = len(degrees)
    assert f.n_rays == 3 + r and len(f.max_cones) == 3 * r and f.picard_number == 2
    assert f.dim == r + 1
    v = validate_fan(f)
    assert v.smooth and v.complete
    assert f.divisor("h")[0] == 1 and sum(f.divisor("xi")) == 1


@pytest.mark.parametrize("degrees", [(1, 1, 2), (0, 2, 1), (0, -1, 1), (0,), (0, 0, 0, 0)])
def test_split_bundle_fan_rejects(degrees):
    with pytest.raises(DomainError):
        split_bundle_fan(degrees)


def test_star_subdivision_p2():
    f = star_subdivision(projective_space_fan(2), (0, 1))
    assert f.n_rays == 4 and f.rays[-1] == (1, 1) and f.picard_number == 2
    assert len(f.max_cones) == 4


def test_star_subdivision_line_in_p4():
    f = star_subdivision(projective_space_fan(4), (0, 1, 2))
    assert f.n_rays == 6 and f.picard_number == 2
    v = validate_fan(f)
    assert v.smooth and v.complete


def test_star_subdivision_section_of_bundle():
    z = split_bundle_fan((0, 0, 2))
    f = star_subdivision(z, (3, 4))
    assert f.n_rays == 7 and f.picard_number == 3
    v = validate_fan(f)
    assert v.smooth and v.complete


def test_star_subdivision_rejects_non_cone():
    z = split_bundle_fan((0, 0, 2))
    with pytest.raises(DomainError):
        star_subdivision(z, (3, 4, 5))
    with pytest.raises(DomainError):
        star_subdivision(z, (0,))
    with pytest.raises(DomainError):
        star_subdivision(z, (0, 99))


def test_star_subdivision_pulls_back_named_classes():
    z = split_bundle_fan((0, 0, 2))
    f = star_subdivision(z, (3, 5))
    assert f.divisor("xi") == z.divisor("xi") + (1,)
    assert f.divisor("h") == z.divisor("h") + (0,)


def test_incomplete_fan_diagnostics():
    p4 = projective_space_fan(4)
    broken = Fan(4, p4.rays, p4.max_cones[1:])
    v = validate_fan(broken)
    assert v.smooth and not v.complete
    unmatched = [d for d in v.diagnostics if d.startswith("unmatched facet")]
    removed = p4.max_cones[0]
    expected = {f"unmatched facet {list(f)}" for f in combinations(removed, 3)}
    assert {d.split(" of cone")[0] for d in unmatched} == expected


def test_non_primitive_ray():
    p4 = projective_space_fan(4)
    rays = ((2, 0, 0, 0),) + p4.rays[1:]
    with pytest.raises(StructuralError, match="non-primitive ray"):
        validate_fan(Fan(4, rays, p4.max_cones))


def test_out_of_range_index():
    p2 = projective_space_fan(2)
    with pytest.raises(StructuralError, match="out-of-range"):
        validate_fan(Fan(2, p2.rays, p2.max_cones + ((0, 7),)))


def test_non_smooth_detected():
    # weighted projective plane P(1,1,2)
    f = Fan(2, ((1, 0), (1, 2), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    v = validate_fan(f)
    assert not v.smooth and v.complete
    assert any("non-smooth" in d for d in v.diagnostics)


def test_overlapping_cones_detected():
    # two copies of the positive quadrant's halves overlapping the first cone
    f = Fan(2, ((1, 0), (0, 1), (1, 1), (-1, -1)), ((0, 1), (0, 2), (1, 3), (0, 3)))
    v = validate_fan(f)
    assert not v.complete
    assert any("common face" in d for d in v.diagnostics)


def test_json_round_trip():
    f = split_bundle_fan((0, 1, 2))
    text = json.dumps(f.to_json())
    g = Fan.from_json(json.loads(text))
    assert g == f


def test_json_reader_accepts_any_ray_order():
    p2 = projective_space_fan(2)
    data = {"dim": 2, "rays": [[-1, -1], [1, 0], [0, 1]], "max_cones": [[0, 1], [1, 2], [0, 2]]}
    f = Fan.from_json(data)
    assert validate_fan(f).complete and set(f.rays) == set(p2.rays)


def test_json_reader_rejects_unsorted_cone():
    with pytest.raises(StructuralError):
        Fan.from_json({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 0], [1, 2], [0, 2]]})
