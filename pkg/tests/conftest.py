import bisect
import math
import sys

import pytest

from axoforge.geom import Polyline

EXAMPLE_BODY = r"""\begin{axopicture}(200,110)
  \SetColor{Red}
  \Arc[arrow](100,50)(40,0,180)
  \Text(100,100){$\alpha P_1 + \beta P_2 + k_\perp$}
  \SetColor{Black}
  \Arc[arrow](100,50)(40,180,360)
  \Gluon(0,50)(60,50){5}{4}
  \Vertex(60,50){2}
  \Gluon(140,50)(200,50){5}{4}
  \Vertex(140,50){2}
\end{axopicture}
"""

# one or more forms of every recognised command
COMMAND_CORPUS = [
    r"\Line(0,0)(10,10)",
    r"\Line[double,sep=2.5](0,2)(35,2)",
    r"\Line[arrow,arrowpos=0.8](0,2)(30,2)",
    r"\Line[arrow,arrowlength=6,arrowwidth=3,arrowinset=0.1,arrowscale=1.5,flip](0,0)(40,0)",
    r"\Line[color=Blue,width=1.5](0,0)(5,5)",
    r"\DashLine(0,0)(30,0){3}",
    r"\DoubleLine(0,0)(30,0){2}",
    r"\DashDoubleLine(0,0)(30,0){2}{3}",
    r"\ArrowLine(0,0)(30,0)",
    r"\LongArrow(0,0)(30,0)",
    r"\Arc(100,50)(40,0,180)",
    r"\Arc[arrow,dash,dsize=4](100,50)(40,180,360)",
    r"\CArc(0,0)(10,30,60)",
    r"\DashArc(0,0)(10,0,270){2}",
    r"\ArrowArc(0,0)(10,0,90)",
    r"\LongArrowArc(0,0)(10,0,90)",
    r"\Bezier(0,0)(0,10)(10,10)(10,0)",
    r"\DashBezier(0,0)(0,10)(10,10)(10,0){1.5}",
    r"\Gluon(0,50)(60,50){5}{4}",
    r"\Gluon[double,sep=2.5,dash](0,0)(60,0){4}{6}",
    r"\GluonArc(100,50)(40,0,180){5}{4}",
    r"\GlueArc(100,50)(40,0,180){5}{4}",
    r"\GluonCircle(50,50)(30){4}{10}",
    r"\Photon(0,0)(30,0){2}{6}",
    r"\Photon[double,sep=1.5](0,0)(30,0){2}{6}",
    r"\PhotonArc(0,0)(20,-30,210){2}{9}",
    r"\ZigZag(0,0)(30,0){2}{8}",
    r"\ZigZag[dash,dsize=2](0,0)(30,0){2}{8}",
    r"\Vertex(60,50){2}",
    r"\ECirc(10,10){5}",
    r"\GCirc(10,10){5}{0.8}",
    r"\GCirc(10,10){5}{Yellow}",
    r"\EBoxc(50,50){20}{10}",
    r"\Boxc(50,50){20}{10}",
    r"\GBoxc(50,50){20}{10}{0.9}",
    r"\RBox(50,50){20}{10}{30}",
    r"\RBox(50,50){20}{10}{-45}{LightBlue}",
    r"\Polygon(0,0)(10,0)(5,8)",
    r"\FPolygon(0,0)(10,0)(10,10)(0,10){LightRed}",
    r"\Oval(50,50)(10,20)(0)",
    r"\GOval(50,50)(10,20)(30){0.7}",
    r"\AxoGrid(0,0)(10,10)(20,11)",
    r"\AxoGrid[color=Red](0,0)(5,5)(4,4)",
    r"\Text(100,100){$\alpha P_1 + \beta P_2 + k_\perp$}",
    r"\BText(50,50){box}",
    r"\GText(50,50){0.9}{gray box}",
    r"\CText(50,50){oval}",
    r"\BTwoText(50,50){first}{second}",
    r"\GTwoText(50,50){LightYellow}{first}{second}",
    r"\CTwoText(50,50){first}{second}",
    r"\SetColor{Red}",
    r"\SetColor{0.2,0.4,0.6}",
    r"\SetWidth{1}",
    r"\SetScale{1.5}",
]


def corpus_document():
    body = "\n".join("  " + c for c in COMMAND_CORPUS)
    return "\\begin{axopicture}(200,120)(-10,-10)\n" + body + "\n\\end{axopicture}\n"


@pytest.fixture
def example_body():
    return EXAMPLE_BODY


def seg_dist(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    den = dx * dx + dy * dy
    if den == 0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / den))
    return math.dist(p, (a[0] + t * dx, a[1] + t * dy))


def dist_to_polyline(p, pl: Polyline, lo=0, hi=None):
    pts = pl.points
    hi = len(pts) - 1 if hi is None else hi
    return min(seg_dist(p, pts[i], pts[i + 1]) for i in range(max(lo, 0), min(hi, len(pts) - 1)))


def local_separation(base: Polyline, a: Polyline, b: Polyline, samples=200, window=6,
                     margin=0.05):
    """Gap between two offset strokes at ``samples`` points spread by arc length.

    Offsets keep the vertex count of their base curve, so a point at
    fraction s of the base lies on base segment i at parameter u; the same
    (i, u) picks the matching point of ``a``, whose distance to the nearby
    part of ``b`` (within ``window`` segments) is the local gap. A fraction
    ``margin`` of each end is skipped.
    """
    n = len(base.points)
    assert len(a.points) == len(b.points) == n
    total = base.cumlen[-1]
    out = []
    for k in range(samples):
        s = (margin + (1 - 2 * margin) * k / (samples - 1)) * total
        i = min(bisect.bisect_right(base.cumlen, s) - 1, n - 2)
        seg = base.cumlen[i + 1] - base.cumlen[i]
        u = (s - base.cumlen[i]) / seg if seg else 0.0
        p, q = a.points[i], a.points[i + 1]
        at = (p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1]))
        out.append(dist_to_polyline(at, b, i - window, i + 1 + window))
    return out


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
