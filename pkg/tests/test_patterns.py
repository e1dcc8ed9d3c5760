import numpy as np
import pytest

from acsurf import (
    classify,
    compare_pattern_stats,
    dilate_region,
    hop_ball,
    localized_init,
    locality_score,
    random_init,
)
from acsurf.patterns import SupportRegion


def flood_fill_components(mesh, mask):
    """Independent python BFS component counter (oracle)."""
    seen = np.zeros(mesh.n_vertices, dtype=bool)
    count = 0
    for start in np.flatnonzero(mask):
        if seen[start]:
            continue
        count += 1
        stack = [int(start)]
        seen[start] = True
        while stack:
            v = stack.pop()
            for w in mesh.vertex_neighbors(v):
                w = int(w)
                if mask[w] and not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def twelve_caps_field(mesh, value=0.97):
    """Positive caps around the 12 original icosahedron vertices."""
    u = np.full(mesh.n_vertices, -value)
    for center in range(12):
        u[hop_ball(mesh, center, 2)] = value
    return u


# ------------------------------------------------------------ init fields


def test_random_init_deterministic(ico4):
    a = random_init(ico4, 5, 0.1)
    b = random_init(ico4, 5, 0.1)
    np.testing.assert_array_equal(a.values, b.values)


def test_random_init_range_and_mean(ico4):
    f = random_init(ico4, 5, 0.1)
    assert np.abs(f.values).max() <= 0.1
    n = ico4.n_vertices
    sigma = 0.1 / np.sqrt(3.0) / np.sqrt(n)
    assert abs(f.values.mean()) <= 3.0 * sigma


def test_random_init_seeds_differ(ico4):
    a = random_init(ico4, 1, 0.1).values
    b = random_init(ico4, 2, 0.1).values
    # continuous uniforms: equality at any vertex has probability ~0
    assert np.mean(a != b) > 0.99


def test_random_init_rejects_bad_amplitude(ico4):
    with pytest.raises(ValueError):
        random_init(ico4, 0, 0.0)


def test_localized_init_background_exact(ico4):
    f, region = localized_init(ico4, 3, 0, 4, 0.1, background=0.0)
    outside = np.ones(ico4.n_vertices, dtype=bool)
    outside[region.vertices] = False
    assert (f.values[outside] == 0.0).all()
    assert np.abs(f.values[region.vertices]).max() <= 0.1
    assert region.center_vertex == 0 and region.radius_hops == 4


def test_localized_init_whole_mesh_equals_random(ico4):
    f, region = localized_init(ico4, 3, 0, 10_000, 0.1, background=5.0)
    ref = random_init(ico4, 3, 0.1)
    np.testing.assert_array_equal(f.values, ref.values)
    assert len(region.vertices) == ico4.n_vertices


def test_localized_init_radius_guard(ico4):
    with pytest.raises(ValueError):
        localized_init(ico4, 3, 0, 0, 0.1)


def test_hop_ball_matches_bfs_oracle(ico2):
    ball = set(map(int, hop_ball(ico2, 7, 2)))
    frontier, seen = {7}, {7}
    for _ in range(2):
        nxt = set()
        for v in frontier:
            for w in ico2.vertex_neighbors(v):
                if int(w) not in seen:
                    nxt.add(int(w))
        seen |= nxt
        frontier = nxt
    assert ball == seen


# ------------------------------------------------------------- classifier


def test_uniform_label(ico4):
    rep = classify(ico4, np.full(ico4.n_vertices, 0.97))
    assert rep.label == "uniform"
    assert rep.fraction_positive == 1.0
    assert rep.n_components_negative == 0


def test_twelve_caps_classified_as_spotty(ico4):
    u = twelve_caps_field(ico4)
    rep = classify(ico4, u)
    assert rep.label == "inverted_spots"  # minority phase is positive
    assert rep.minority_phase == "positive"
    assert rep.n_components_positive == 12
    # independent flood-fill oracle agrees
    assert flood_fill_components(ico4, u >= rep.dead_band) == 12
    assert 0.02 < rep.minority_fraction < 0.35


def test_negated_caps_are_spots(ico4):
    u = twelve_caps_field(ico4)
    rep = classify(ico4, -u)
    assert rep.label == "spots"
    assert rep.minority_phase == "negative"
    assert rep.n_components_negative == 12


def test_negation_swaps_fractions(ico4):
    u = twelve_caps_field(ico4)
    a = classify(ico4, u)
    b = classify(ico4, -u)
    assert a.fraction_positive == b.fraction_negative
    assert a.n_components_positive == b.n_components_negative


def test_bands_classified_as_stripes(ico4):
    # alternating latitude bands, several edges wide; for band geometry
    # boundary^2/area = (2 L)^2 / (L w) = 4 L / w well above a disk's 4 pi
    z = ico4.vertices[:, 2]
    u = 0.95 * np.sign(np.sin(4.0 * np.pi * z))
    u[u == 0] = 0.95
    rep = classify(ico4, u)
    assert rep.label == "stripes"
    assert 0.35 < rep.fraction_positive < 0.65
    assert rep.elongation_minority > 60.0


def test_dead_band_excludes_interface(ico4):
    u = np.full(ico4.n_vertices, 0.05)  # everything inside the dead band
    rep = classify(ico4, u)
    assert rep.label == "indeterminate"
    assert rep.interface_fraction == 1.0


def test_classifier_deterministic(ico4):
    u = twelve_caps_field(ico4)
    a = classify(ico4, u).to_dict()
    b = classify(ico4, u).to_dict()
    assert a == b


def test_classify_rejects_bad_field(ico4):
    with pytest.raises(ValueError):
        classify(ico4, np.zeros(3))
    bad = np.zeros(ico4.n_vertices)
    bad[0] = np.nan
    with pytest.raises(ValueError):
        classify(ico4, bad)


def test_fractions_sum_to_one(ico4, rng):
    u = rng.uniform(-1, 1, ico4.n_vertices)
    rep = classify(ico4, u)
    assert abs(rep.fraction_positive + rep.fraction_negative - 1.0) < 1e-12
    assert 0.0 <= rep.interface_fraction <= 1.0


def test_report_text_format(ico4):
    rep = classify(ico4, twelve_caps_field(ico4))
    text = rep.to_text()
    assert "label = inverted_spots" in text
    assert "minority_fraction" in text


# --------------------------------------------------------------- locality


def test_locality_constant_field(ico4):
    region = SupportRegion(vertices=hop_ball(ico4, 0, 3), center_vertex=0, radius_hops=3)
    score = locality_score(ico4, np.full(ico4.n_vertices, 0.3), region)
    assert score.inside_variance < 1e-20
    assert score.outside_variance < 1e-20


def test_locality_random_inside_constant_outside(ico4):
    f, region = localized_init(ico4, 8, 0, 6, 0.5, background=0.0)
    score = locality_score(ico4, f.values, region, dilation_hops=0)
    assert score.outside_variance == 0.0
    assert score.inside_variance > 0.0


def test_locality_whole_mesh_region_flagged(ico4):
    region = SupportRegion(
        vertices=np.arange(ico4.n_vertices), center_vertex=0, radius_hops=99
    )
    score = locality_score(ico4, ico4.vertices[:, 2], region)
    assert score.outside_empty


def test_locality_uses_region_default_dilation(ico4):
    f, region = localized_init(ico4, 8, 0, 6, 0.5, background=0.0)
    assert region.dilation_hops == 3
    explicit = locality_score(ico4, f.values, region, dilation_hops=3)
    default = locality_score(ico4, f.values, region)
    assert default == explicit


def test_dilate_region_grows(ico4):
    region = SupportRegion(vertices=hop_ball(ico4, 0, 3), center_vertex=0, radius_hops=3)
    d0 = dilate_region(ico4, region, 0)
    d2 = dilate_region(ico4, region, 2)
    assert len(d2) > len(d0)
    assert set(map(int, d0)) <= set(map(int, d2))
    np.testing.assert_array_equal(np.sort(d2), np.sort(hop_ball(ico4, 0, 5)))


def test_empty_region_rejected():
    with pytest.raises(ValueError):
        SupportRegion(vertices=np.array([]), center_vertex=0, radius_hops=1)


# ------------------------------------------------------------- comparison


def test_compare_identical_reports(ico4):
    rep = classify(ico4, twelve_caps_field(ico4))
    assert compare_pattern_stats(rep, rep)


def test_compare_fraction_mismatch(ico4):
    a = classify(ico4, twelve_caps_field(ico4))
    import copy

    b = copy.deepcopy(a)
    b.fraction_positive = 0.45
    a.fraction_positive = 0.20
    assert not compare_pattern_stats(a, b, tol_fraction=0.05)


def test_compare_count_mismatch(ico4):
    a = classify(ico4, twelve_caps_field(ico4))
    import copy

    b = copy.deepcopy(a)
    b.n_components_positive = a.n_components_positive * 2
    assert not compare_pattern_stats(a, b, tol_count=0.2)
