import math

from treestats.plots import petersen_csv, petersen_layout, petersen_svg, spider_svg
from treestats.spider import SpiderPoint, SpiderSample, intrinsic_mean
from treestats.t4space import T4Point, T4Sample, all_splits


def spider_sample():
    return SpiderSample(3, (SpiderPoint(1, 0.5), SpiderPoint(2, 1.0), SpiderPoint(3, 0.2)))


def t4_sample():
    L = ("a", "b", "c", "d")
    pts = (
        T4Point(L, {frozenset(("a", "b")): 0.5}),
        T4Point(L, {frozenset(("a", "b")): 0.3, frozenset(("a", "b", "c")): 0.4}),
        T4Point(L, {}),
        T4Point(L, {frozenset(("a", "c")): 0.2, frozenset(("b", "d")): 0.2}),
    )
    return T4Sample(L, pts)


def test_spider_svg_deterministic():
    s = spider_sample()
    one = spider_svg(s, intrinsic_mean(s))
    two = spider_svg(s, intrinsic_mean(s))
    assert one == two
    assert one.startswith("<svg")
    assert one.count("<circle") == len(s) + 1  # points plus the center dot


def test_petersen_layout_places_all_axes():
    layout = petersen_layout(("a", "b", "c", "d"))
    assert len(layout) == 10
    assert set(layout) == set(all_splits(("a", "b", "c", "d")))
    radii = {round(math.hypot(x - 240.0, y - 240.0), 6) for x, y in layout.values()}
    assert len(radii) == 2  # outer pentagon and inner pentagram


def test_petersen_svg_renders_edges_and_points():
    svg = petersen_svg(t4_sample())
    assert svg.count("<line") == 15
    assert svg == petersen_svg(t4_sample())


def test_petersen_svg_with_origin_mean():
    L = ("a", "b", "c", "d")
    svg = petersen_svg(t4_sample(), mean=T4Point(L, {}))
    assert "origin" in svg


def test_petersen_csv():
    csv = petersen_csv(t4_sample())
    lines = csv.strip().splitlines()
    assert lines[0] == "kind,split1,split2,s,radius"
    assert lines[1].startswith("vertex,{a;b},,0,")
    assert lines[2].startswith("edge,{a;b},{a;b;c},")
    assert lines[3] == "origin,,,,0"
    assert lines[4].startswith("edge,{a;c},{b;d},0.5,")
