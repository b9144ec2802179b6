import math
import random

import pytest

from axoforge import geom
from axoforge import model as m
from axoforge.errors import EmptyArc, GeometryError
from axoforge.geom import Frame, Point
from axoforge.parser import parse_command, parse_document
from axoforge.stroker import (
    Fill,
    Stroke,
    Text,
    arrowhead,
    base_curve,
    realize,
    render_drawables,
    render_items,
)

from conftest import EXAMPLE_BODY, corpus_document, local_separation


def drawables_for(src, tol=0.05, state=m.DrawState()):
    item = parse_command(src)
    return realize(item, m.resolve_options(item.kind, item.options, state), tol)


def shoelace(points):
    return 0.5 * abs(sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(points, points[1:])))


class TestArrowhead:
    def test_example_vertices(self):
        out = drawables_for(r"\Line[arrow,arrowpos=0.8](0,2)(30,2)")
        head = out[-1]
        assert isinstance(head, Fill)
        pts = [tuple(p) for p in head.boundary.points]
        expected = [(29, 2), (19, 4), (21, 2), (19, 0), (29, 2)]
        for p, q in zip(pts, expected):
            assert p == pytest.approx(q, abs=1e-12)

    def test_area(self):
        spec = m.ArrowSpec(length=10, width=4, inset=0.2)
        head = arrowhead(Frame(Point(0, 0), (1, 0), (0, 1)), spec)
        assert shoelace(head.boundary.points) == pytest.approx(0.8 * 10 * 4 / 2, abs=1e-12)

    def test_flip_reverses(self):
        f = Frame(Point(0, 0), (1, 0), (0, 1))
        fwd = arrowhead(f, m.ArrowSpec())
        back = arrowhead(f, m.ArrowSpec(flipped=True))
        assert fwd.boundary.points[0] == (5, 0)
        assert back.boundary.points[0] == (-5, 0)

    def test_scale(self):
        f = Frame(Point(0, 0), (1, 0), (0, 1))
        head = arrowhead(f, m.ArrowSpec(scale=2))
        assert shoelace(head.boundary.points) == pytest.approx(0.8 * 20 * 8 / 2)

    def test_arc_arrow_on_curve(self):
        out = drawables_for(r"\Arc[arrow](100,50)(40,0,180)")
        tip, _, notch, _, _ = out[-1].boundary.points
        tol, r = 0.05, 40
        step = 2 * math.acos(1 - tol / r)
        axis = math.atan2(notch[1] - tip[1], notch[0] - tip[0])
        assert abs(axis) <= step or abs(abs(axis) - math.pi) <= step
        assert tip[0] < notch[0]
        # tip = at + L/2 t and notch = tip - L(1 - inset) t, so at = notch + 3 t
        t = ((tip[0] - notch[0]) / 8, (tip[1] - notch[1]) / 8)
        at = (notch[0] + 3 * t[0], notch[1] + 3 * t[1])
        assert math.dist(at, (100, 90)) <= tol


class TestLineLike:
    def test_plain_line(self):
        out = drawables_for(r"\Line(0,0)(10,10)")
        assert len(out) == 1 and isinstance(out[0], Stroke)
        assert out[0].width == m.DEFAULT_WIDTH and out[0].color == m.BLACK

    def test_double_line(self):
        out = drawables_for(r"\Line[double,sep=2.5](0,2)(35,2)")
        ys = sorted(s.pl.points[0].y for s in out)
        assert ys == [0.75, 3.25]

    def test_dash_then_double(self):
        out = drawables_for(r"\DashDoubleLine(0,0)(30,0){2}{3}")
        assert len(out) == 10
        assert all(isinstance(s, Stroke) for s in out)

    def test_dashed_gluon(self):
        out = drawables_for(r"\Gluon[dash,dsize=2](0,50)(60,50){5}{4}")
        assert len(out) > 5

    def test_double_gluon_keeps_loops(self):
        a, b = drawables_for(r"\Gluon[double,sep=2.5](0,50)(60,50){5}{4}")
        assert geom.self_intersections(a.pl) == geom.self_intersections(b.pl) == 3

    def test_state_color(self):
        red = m.color_lookup("Red")
        out = drawables_for(r"\Line(0,0)(1,1)", state=m.DrawState(color=red, width=2))
        assert out[0].color == red and out[0].width == 2

    def test_zero_length_line(self):
        with pytest.raises(GeometryError):
            drawables_for(r"\Line(1,1)(1,1)")

    def test_empty_arc_named(self):
        with pytest.raises(EmptyArc) as info:
            drawables_for(r"\Arc(0,0)(10,45,45)")
        assert "Arc" in str(info.value)

    @pytest.mark.parametrize("src", [
        r"\Line[double,sep=2.5](0,2)(35,2)",
        r"\Arc[double,sep=2.5](100,50)(40,0,180)",
        r"\Arc[double,sep=2.5](0,0)(20,-30,250)",
        r"\Gluon[double,sep=2.5](0,50)(60,50){5}{4}",
        r"\GluonArc[double,sep=2.5](100,50)(40,0,180){5}{4}",
        r"\Photon[double,sep=2.5](0,50)(60,50){5}{4}",
        r"\PhotonArc[double,sep=2.5](100,50)(40,0,180){3}{8}",
        r"\GluonArc[double,sep=2.5](100,50)(40,0,180){5}{6}",
        r"\GluonCircle[double,sep=2.5](0,0)(30){4}{10}",
        r"\Bezier[double,sep=2.5](0,0)(20,30)(40,-30)(60,0)",
    ])
    def test_double_separation(self, src):
        item = parse_command(src)
        base = base_curve(item, 0.05)
        a, b = drawables_for(src)
        seps = local_separation(base, a.pl, b.pl)
        assert len(seps) == 200
        assert min(seps) == pytest.approx(2.5, abs=0.1)
        assert max(seps) == pytest.approx(2.5, abs=0.1)


class TestShapes:
    def test_vertex(self):
        out = drawables_for(r"\Vertex(60,50){2}")
        assert len(out) == 1 and isinstance(out[0], Fill)
        for p in out[0].boundary.points:
            assert math.dist(p, (60, 50)) == pytest.approx(2)

    def test_filled_circle(self):
        fill, ring = drawables_for(r"\GCirc(10,10){5}{0.8}")
        assert fill.color == m.Color.gray(0.8)
        assert isinstance(ring, Stroke)

    def test_box(self):
        (stroke,) = drawables_for(r"\EBoxc(50,50){20}{10}")
        xs = [p.x for p in stroke.pl.points]
        ys = [p.y for p in stroke.pl.points]
        assert (min(xs), max(xs), min(ys), max(ys)) == (40, 60, 45, 55)
        assert stroke.pl.closed

    def test_rotated_box_corners(self):
        fill, stroke = drawables_for(r"\RBox(0,0){2}{2}{90}{Red}")
        assert {tuple(p) for p in stroke.pl.points} == {(1, -1), (1, 1), (-1, 1), (-1, -1)}
        assert fill.color == m.color_lookup("Red")

    def test_polygon_closed(self):
        (stroke,) = drawables_for(r"\Polygon(0,0)(10,0)(5,8)")
        assert stroke.pl.points[0] == stroke.pl.points[-1]
        assert len(stroke.pl.points) == 4

    def test_oval(self):
        (stroke,) = drawables_for(r"\Oval(50,50)(10,20)(0)")
        xs = [p.x for p in stroke.pl.points]
        ys = [p.y for p in stroke.pl.points]
        assert max(xs) - min(xs) == pytest.approx(40, abs=0.1)
        assert max(ys) - min(ys) == pytest.approx(20, abs=0.1)

    def test_grid(self):
        out = drawables_for(r"\AxoGrid(0,0)(10,10)(20,11)")
        assert len(out) == 21 + 12
        assert out[0].color == m.color_lookup("LightGray")
        out = drawables_for(r"\AxoGrid[color=Red](0,0)(5,5)(4,4)")
        assert out[0].color == m.color_lookup("Red")

    def test_text(self):
        (t,) = drawables_for(r"\Text(100,100){$\alpha$}")
        assert isinstance(t, Text) and t.content == r"$\alpha$"

    def test_two_line_box(self):
        out = drawables_for(r"\BTwoText(50,50){first}{second}")
        texts = [d for d in out if isinstance(d, Text)]
        assert [t.content for t in texts] == ["first", "second"]
        assert texts[0].anchor.y > texts[1].anchor.y
        assert out[0].color == m.WHITE


class TestDiagram:
    def test_example(self):
        items = render_items(parse_document(EXAMPLE_BODY))
        assert len(items) == 7
        red = m.color_lookup("Red")
        arc, label = items[0][1], items[1][1]
        assert all(d.color == red for d in arc + label)
        assert all(d.color == m.BLACK for d in items[2][1])

    def test_corpus_renders(self):
        out = render_drawables(parse_document(corpus_document()))
        assert out

    def test_canvas_scale(self):
        src = "\\begin{axopicture}(10,10)\n\\SetScale{2}\n\\Line(0,0)(3,0)\n\\end{axopicture}"
        (stroke,) = render_drawables(parse_document(src))
        assert stroke.pl.points[-1] == (6, 0)

    def test_random_arrow_frames(self):
        rng = random.Random(7)
        for _ in range(100):
            ang = rng.uniform(0, 2 * math.pi)
            t = (math.cos(ang), math.sin(ang))
            f = Frame(Point(rng.uniform(-100, 100), rng.uniform(-100, 100)), t, (-t[1], t[0]))
            spec = m.ArrowSpec(length=rng.uniform(1, 20), width=rng.uniform(1, 10),
                               inset=rng.uniform(0, 0.9))
            area = shoelace(arrowhead(f, spec).boundary.points)
            want = (1 - spec.inset) * spec.length * spec.width / 2
            assert area == pytest.approx(want, abs=1e-9)
