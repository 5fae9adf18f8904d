"""Bundled benchmark frameworks.

* ``quad``          — planar fully-braced quadrilateral on four joints.
* ``four_r_loop``   — closed chain of four congruent tetrahedral elements
                      joined by hinges, with threefold reflection symmetry;
                      bar / panel / tetrahedron interpretations.
* ``siamese_dipyramid`` — two hexagonal dipyramids glued to a closed
                      triangulated surface; 30 unit edges, 20 faces.
* ``four_horn``     — the pentagonal counterpart built from congruent
                      isosceles triangles; three designs differing in
                      leg : base ratio.
* ``sg_decoupled``  — a position/orientation-decoupled Stewart-Gough
                      manipulator (semihexagonal platform, truncated-
                      pyramid base).

Each fixture returns the framework, the symmetric chart used for the
critical-point computations, and the published reference realizations.
Reference coordinate tables are data, not oracles — the test suite
recomputes everything from the intrinsic metric.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .model import Body, Chart, Framework

__all__ = [
    "Fixture",
    "quad",
    "four_r_loop",
    "siamese_dipyramid",
    "four_horn",
    "sg_decoupled",
    "QUAD_TABLE",
    "FOUR_R_SADDLES",
    "SD_TABLE",
    "FH_TABLES",
    "SG_TABLE",
    "write_fixture_files",
]

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)


@dataclass
class Fixture:
    framework: Framework
    chart: Chart
    minima: list[np.ndarray] = field(default_factory=list)  # chart coords
    saddle: np.ndarray | None = None
    extras: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Quad

QUAD_TABLE = {
    # name: (x1, x2, y2, x3, y3, u/E, kind)
    "V1": (3.0, 1.0, 1.0, -1.0, -1.0, 0.0, "minimum"),
    "V2": (3.0, 1.0, -1.0, -1.0, 1.0, 0.0, "minimum"),
    "V3": (2.873803815106, 1.264482434547, 1.435718952668,
           -1.264482434547, 1.435718952668, 0.014510412969, "minimum"),
    "V4": (2.873803815106, 1.264482434547, -1.435718952668,
           -1.264482434547, -1.435718952668, 0.014510412969, "minimum"),
    "V5": (2.984971064849, 1.262815500919, 1.420716567414,
           -1.110499467187, 0.662434022361, 0.017411595327, "saddle"),
    "V6": (2.984971064849, 1.262815500919, -1.420716567414,
           -1.110499467187, -0.662434022361, 0.017411595327, "saddle"),
    "V7": (2.984971064849, 1.110499467187, -0.662434022361,
           -1.262815500919, -1.420716567414, 0.017411595327, "saddle"),
    "V8": (2.984971064849, 1.110499467187, 0.662434022361,
           -1.262815500919, 1.420716567414, 0.017411595327, "saddle"),
    "V9": (3.139661485127, 1.152372944387, 0.0,
           -1.152372944387, 0.0, 0.029190294037, "saddle"),
    "V10": (1.023109368578, -0.801485412727, -1.942382880068,
            0.801485412727, -1.942382880068, 0.544598068230, "saddle"),
    "V11": (1.023109368578, -0.801485412727, 1.942382880068,
            0.801485412727, 1.942382880068, 0.544598068230, "saddle"),
    "V12": (0.377904764722, -1.656968246848, 0.0,
            1.656968246848, 0.0, 0.606663470611, "saddle"),
}

QUAD_SNAPPABILITY = 0.017411595327
QUAD_SINGULARITY_DISTANCE = 0.029190294037   # u/E at the shaky saddle V9

# The quad reference table above carries a legacy energy normalization: its
# u/E column equals exactly 8 times the density computed by this library
# (i.e. it was produced with U = E*Vol*(L'^2 - L^2)^2 / L^4, without the 1/8).
# Every other fixture's reference values use the same convention as the
# library.  Divide the quad table values by this factor before comparing.
QUAD_U_SCALE = 8.0

# directed transition edges saddle -> minima (solid flows)
# Saddle-to-minimum adjacency of the descent-flow graph.  V6/V8 follow from
# V5/V7 by the y-mirror symmetry (V1<->V2, V3<->V4, V5<->V6, V7<->V8): the
# two snap chains are V1 -> V5 -> V3 -> V8 -> V2 and V1 -> V7 -> V4 -> V6 -> V2.
QUAD_TRANSITIONS = {
    "V5": {"V1", "V3"},
    "V6": {"V2", "V4"},
    "V7": {"V1", "V4"},
    "V8": {"V2", "V3"},
    "V9": {"V1", "V2", "V3", "V4"},
}


def quad() -> Fixture:
    # joints A, B, C, D = 0, 1, 2, 3
    lengths = {
        (0, 1): 6.0,
        (2, 3): math.sqrt(8.0),
        (0, 2): math.sqrt(17.0),
        (1, 3): math.sqrt(17.0),
        (0, 3): math.sqrt(5.0),
        (1, 2): math.sqrt(5.0),
    }
    fw = Framework(dimension=2, n_joints=4,
                   bars=sorted(lengths), lengths=lengths, name="quad")
    names = ["x1", "x2", "y2", "x3", "y3"]
    chart = Chart.from_assignments(4, 2, names, {
        (0, 0): [0.0, ("x1", -1.0)],
        (1, 0): [0.0, ("x1", 1.0)],
        (2, 0): [0.0, ("x2", 1.0)],
        (2, 1): [0.0, ("y2", 1.0)],
        (3, 0): [0.0, ("x3", 1.0)],
        (3, 1): [0.0, ("y3", 1.0)],
    })
    minima = [np.array(QUAD_TABLE[k][:5]) for k in ("V1", "V2", "V3", "V4")]
    return Fixture(framework=fw, chart=chart, minima=minima,
                   extras={"table": QUAD_TABLE,
                           "transitions": QUAD_TRANSITIONS,
                           "s": QUAD_SNAPPABILITY,
                           "sigma": QUAD_SINGULARITY_DISTANCE})


# ---------------------------------------------------------------------------
# 4R loop

_DEN1 = (3 * SQ2 + 10) * SQ3 - 3 * SQ2 + 6
_DEN2 = (3 * SQ3 - 3) * SQ2 + 10 * SQ3 + 6
FOUR_R_LENGTHS = {
    "ring": (25 * SQ3 - 15) / _DEN1,      # A_i A_{i+1} and B_i B_{i+1}
    "cross_fwd": (15 + 5 * SQ3) / _DEN1,  # A_i B_{i+1}
    "cross_bwd": (45 - 5 * SQ3) / _DEN1,  # A_i B_{i-1}
    "hinge": 15 * SQ2 * (SQ3 - 1) / _DEN2,  # A_i B_i
}

FOUR_R_V1 = np.array([0.802729630788, 0.207761716516, 0.207761716516,
                      0.169636731183, 0.655425998948, 0.239902565915])
# V2: u1 <-> v2, v1 <-> u2, w1 <-> w2
FOUR_R_V2 = FOUR_R_V1[[4, 3, 5, 1, 0, 2]]

# saddle charts (u1 = v2, v1 = u2, w1 = w2): (u1, v1, w1) per mode
FOUR_R_SADDLES = {
    ("bar", 0.5): (0.733113570223, 0.186762548180, 0.226463240099),
    ("panel", 0.5): (0.733944401620, 0.187601517133, 0.226592028651),
    ("panel", 0.25): (0.733918350832, 0.187397874243, 0.226701242326),
    ("panel", 0.0): (0.733898439861, 0.187273478928, 0.226766038698),
    ("tetra", 0.5): (0.735389875237, 0.190335899873, 0.225439236330),
    ("tetra", 0.25): (0.735346467296, 0.190324665294, 0.225425929220),
    ("tetra", 0.0): (0.735317448771, 0.190317154629, 0.225417033375),
}

FOUR_R_S = {
    ("bar", 0.5): 6.762914466510e-7,
    ("panel", 0.5): 9.363722223978e-6,
    ("panel", 0.25): 1.052544771247e-5,
    ("panel", 0.0): 1.261816856140e-5,
    ("tetra", 0.5): 3.289330211161e-5,
    ("tetra", 0.25): 3.946472039856e-5,
    ("tetra", 0.0): 4.932700715589e-5,
}

FOUR_R_BAR_STATS = {
    "dL_max_abs": 0.002359150067,
    "dL_max_rel": 0.001715578691,
    "dL_avg_abs": 0.001064975188,
    "dL_avg_rel": 0.000993544934,
}


def _four_r_chart() -> Chart:
    # joints: A1..A4 = 0..3, B1..B4 = 4..7
    names = ["u1", "v1", "w1", "u2", "v2", "w2"]
    sig = {
        0: [("u1", 1), ("v1", 1), ("w1", 1)],     # A1
        1: [("u2", -1), ("v2", 1), ("w2", 1)],    # A2
        2: [("u1", -1), ("v1", -1), ("w1", 1)],   # A3
        3: [("u2", 1), ("v2", -1), ("w2", 1)],    # A4
        4: [("u1", 1), ("v1", -1), ("w1", -1)],   # B1
        5: [("u2", 1), ("v2", 1), ("w2", -1)],    # B2
        6: [("u1", -1), ("v1", 1), ("w1", -1)],   # B3
        7: [("u2", -1), ("v2", -1), ("w2", -1)],  # B4
    }
    table = {}
    for j, spec in sig.items():
        for a, (nm, s) in enumerate(spec):
            table[(j, a)] = [0.0, (nm, float(s))]
    return Chart.from_assignments(8, 3, names, table)


def four_r_loop(mode: str = "bar") -> Fixture:
    """Closed 4R chain.  mode: 'bar' | 'panel' | 'tetra'."""
    A = [0, 1, 2, 3]
    B = [4, 5, 6, 7]
    lengths = {}

    def put(i, j, val):
        lengths[(min(i, j), max(i, j))] = val

    for i in range(4):
        n = (i + 1) % 4
        put(A[i], A[n], FOUR_R_LENGTHS["ring"])
        put(B[i], B[n], FOUR_R_LENGTHS["ring"])
        put(A[i], B[n], FOUR_R_LENGTHS["cross_fwd"])
        put(A[n], B[i], FOUR_R_LENGTHS["cross_bwd"])
        put(A[i], B[i], FOUR_R_LENGTHS["hinge"])
    assert len(lengths) == 20

    tetras = [(A[i], B[i], A[(i + 1) % 4], B[(i + 1) % 4]) for i in range(4)]
    if mode == "bar":
        bodies, bars = [], sorted(lengths)
    elif mode == "tetra":
        bodies, bars = [Body("polyhedron", t) for t in tetras], []
    elif mode == "panel":
        faces = []
        for t in tetras:
            faces.extend(itertools.combinations(t, 3))
        bodies, bars = [Body("panel", f) for f in faces], []
    else:
        raise ValueError(f"unknown 4R mode {mode!r}")

    fw = Framework(dimension=3, n_joints=8, bars=bars, bodies=bodies,
                   lengths=lengths, name=f"4r-{mode}")
    chart = _four_r_chart()
    return Fixture(framework=fw, chart=chart,
                   minima=[FOUR_R_V1.copy(), FOUR_R_V2.copy()],
                   extras={"tetras": tetras, "saddles": FOUR_R_SADDLES,
                           "s": FOUR_R_S, "bar_stats": FOUR_R_BAR_STATS})


# ---------------------------------------------------------------------------
# Siamese dipyramid

# chart parameter order matches the published table
SD_NAMES = ["x1", "x2", "x3", "y1", "y2", "y3", "u1", "u2", "v1", "v2", "v3"]

SD_TABLE = {
    "V1": (-0.5, -0.940024410925, -0.327267375345, -1.245032582350,
           -0.347046770776, 0.443224584739, 1.245032582350, 0.347046770776,
           0.5, 0.940024410925, 0.327267375345),
    "V2": (-0.5, -0.997453425271, -0.492373245899, -1.296828963170,
           -0.429338277522, 0.433734148410, 1.146172627664, 0.205744933405,
           0.5, 0.839993752693, 0.071185256433),
    "Vp_bar": (-0.501499108259, -0.979262620688, -0.432379113707,
               -1.282364611843, -0.400464708308, 0.440320490435,
               1.193026874842, 0.273852988315, 0.498976790866,
               0.887603513697, 0.190566289070),
    "Vp_panel": (-0.501518680610, -0.979200605399, -0.432385909548,
                 -1.282380966624, -0.400381868195, 0.440337472811,
                 1.192998833484, 0.273969061570, 0.498943974578,
                 0.887698700553, 0.190551925851),
}

SD_S = {"bar": 1.661376004928e-6, "panel": 4.466362657431e-6}
SD_STATS = {"e_min": 1.996823079751e-2,
            "dL_avg": 1.673630072024e-3,
            "dL_max_rel": 2.998216519082e-3}


def _sd_swap(v):
    """x_i <-> -v_i, y_i <-> -u_i: maps V2 to V3 and V' to V''."""
    x1, x2, x3, y1, y2, y3, u1, u2, v1, v2, v3 = v
    # u3 = -y3 makes y3 a fixed point of the exchange
    return np.array([-v1, -v2, -v3, -u1, -u2, y3, -y1, -y2,
                     -x1, -x2, -x3])


def _sd_chart() -> Chart:
    # joints: A1 Ab1 A2 Ab2 B1 Bb1 B2 Bb2 C1 Cb1 C2 Cb2 = 0..11
    table = {
        (0, 0): [0.0, ("x1", 1)], (0, 1): [0.0, ("y1", 1)],
        (1, 0): [0.0, ("x1", -1)], (1, 1): [0.0, ("y1", 1)],
        (2, 1): [0.0, ("u1", 1)], (2, 2): [0.0, ("v1", 1)],
        (3, 1): [0.0, ("u1", 1)], (3, 2): [0.0, ("v1", -1)],
        (4, 0): [0.0, ("x2", 1)], (4, 1): [0.0, ("y2", 1)],
        (5, 0): [0.0, ("x2", -1)], (5, 1): [0.0, ("y2", 1)],
        (6, 1): [0.0, ("u2", 1)], (6, 2): [0.0, ("v2", 1)],
        (7, 1): [0.0, ("u2", 1)], (7, 2): [0.0, ("v2", -1)],
        (8, 0): [0.0, ("x3", 1)], (8, 1): [0.0, ("y3", 1)],
        (9, 0): [0.0, ("x3", -1)], (9, 1): [0.0, ("y3", 1)],
        (10, 1): [0.0, ("y3", -1)], (10, 2): [0.0, ("v3", 1)],
        (11, 1): [0.0, ("y3", -1)], (11, 2): [0.0, ("v3", -1)],
    }
    return Chart.from_assignments(12, 3, SD_NAMES, table)


def _surface_fixture(chart: Chart, theta1: np.ndarray, edge_lengths,
                     mode: str, name: str, n_edges: int, n_faces: int,
                     ) -> Framework:
    """Build a closed triangulated surface framework data-driven: edges are
    the vertex pairs realizing one of the design lengths at theta1, faces
    the triangles all of whose sides are edges."""
    V = chart.realize(theta1)
    n = V.shape[0]
    pairs = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist = float(np.linalg.norm(V[i] - V[j]))
            for L in edge_lengths:
                if abs(dist - L) < 1e-6:
                    pairs[(i, j)] = L
                    break
    assert len(pairs) == n_edges, (len(pairs), n_edges)
    tris = [t for t in itertools.combinations(range(n), 3)
            if all(tuple(sorted(p)) in pairs
                   for p in itertools.combinations(t, 2))]
    assert len(tris) == n_faces, (len(tris), n_faces)
    if mode == "bar":
        bodies, bars = [], sorted(pairs)
    elif mode == "panel":
        bodies, bars = [Body("panel", t) for t in tris], []
    else:
        raise ValueError(f"unknown surface mode {mode!r}")
    return Framework(dimension=3, n_joints=n, bars=bars, bodies=bodies,
                     lengths=dict(pairs), name=name)


def siamese_dipyramid(mode: str = "bar") -> Fixture:
    chart = _sd_chart()
    theta1 = np.array(SD_TABLE["V1"])
    fw = _surface_fixture(chart, theta1, [1.0], mode, f"sd-{mode}", 30, 20)
    saddle = np.array(SD_TABLE["Vp_bar" if mode == "bar" else "Vp_panel"])
    minima = [theta1, np.array(SD_TABLE["V2"]),
              _sd_swap(np.array(SD_TABLE["V2"]))]
    return Fixture(framework=fw, chart=chart, minima=minima, saddle=saddle,
                   extras={"s": SD_S[mode], "stats": SD_STATS,
                           "saddle2": _sd_swap(saddle)})


# ---------------------------------------------------------------------------
# Four-horn

FH_DESIGN_LENGTHS = {
    1: (3 * SQ2 + 6 - 1.5 * math.sqrt(20 + 14 * SQ2),
        3 * math.sqrt(20 + 14 * SQ2) - 6 * SQ2 - 9),
    2: (6 - 3 * SQ3, 6 * SQ3 - 9),
    3: (6 * SQ3 + 12 - (9 * SQ3 + 15) * SQ2 / 2,
        (9 * SQ3 + 15) * SQ2 - 12 * SQ3 - 21),
}

FH_NAMES = ["x1", "x3", "y1", "y2", "y3", "u1", "u2", "v1", "v3"]

FH_TABLES = {
    1: {
        "V1": (-0.439833121345, -0.402578359944, -1.045126760122,
               -0.401357155967, -0.266342733180, 1.045126760122,
               0.401357155968, 0.439833121346, 0.402578359945),
        "V2": (-0.551313194956, -0.551313194956, -1.055331194900,
               -0.504017999944, -0.275656597478, 1.055331194900,
               0.275656597478, 0.0, 0.0),
        "Vp_bar": (-0.514676938265, -0.496123528337, -1.049041632768,
                   -0.463165051665, -0.269426558812, 1.047880696191,
                   0.331798913977, 0.308030377883, 0.267213277407),
        "Vp_panel": (-0.513910947926, -0.495616858966, -1.047987400977,
                     -0.461829297096, -0.269389463808, 1.048797729978,
                     0.332716034007, 0.310260240907, 0.268392688481),
    },
    2: {
        "V1": (-0.610560396069, -0.514152040259, -0.969412109993,
               -0.446547949553, -0.171366775159, 0.969412109993,
               0.446547949553, 0.610560396069, 0.514152040259),
        "V2": (-0.696152422706, -0.696152422706, -1.004809471616,
               -0.602885682969, -0.200961894323, 1.004809471616,
               0.200961894323, 0.0, 0.0),
        "Vp_bar": (-0.674892191647, -0.629718504095, -0.984812341395,
                   -0.546021679456, -0.181083746571, 0.975854359558,
                   0.316170888257, 0.457391731880, 0.344387159440),
        "Vp_panel": (-0.673709307095, -0.630052932256, -0.981100971148,
                     -0.541654138725, -0.180980608226, 0.978589555099,
                     0.318169735899, 0.463293753345, 0.344641218655),
    },
    3: {
        "V1": (-0.284308975844, -0.274123668705, -1.091519316228,
               -0.383468247941, -0.328588016197, 1.091519316228,
               0.383468247944, 0.284308975853, 0.274123668714),
        "V2": (-0.381499642545, -0.381499642545, -1.093387667069,
               -0.432610903111, -0.330388381978, 1.093387667069,
               0.330388381978, 0.0, 0.0),
        "Vp_bar": (-0.346332965123, -0.341068732408, -1.092180085853,
                   -0.412298335661, -0.329187289575, 1.092099843041,
                   0.353323819879, 0.190684818526, 0.179953619106),
        "Vp_panel": (-0.345941194845, -0.340681988409, -1.092027657175,
                     -0.412002561558, -0.329179948495, 1.092235340815,
                     0.353582747289, 0.191590754090, 0.180744480102),
    },
}

FH_S = {
    (1, "bar"): 1.753810068479e-8,
    (2, "bar"): 2.035395987407e-7,
    (3, "bar"): 9.864008781699e-11,
    (1, "panel"): 1.748173013469e-6,
    (2, "panel"): 2.340885199965e-5,
    (3, "panel"): 6.288380657092e-8,
}

FH_STATS = {
    1: {"e_min": 2.503636587824e-3, "dL_avg_abs": 1.755195468044e-4,
        "dL_avg_rel": 1.684100667119e-4, "dL_max_abs": 2.932163649725e-4,
        "dL_max_rel": 2.318551827789e-4},
    2: {"e_min": 1.663070753397e-2, "dL_avg_abs": 1.219270735675e-3,
        "dL_avg_rel": 1.174975973629e-3, "dL_max_abs": 2.061810888944e-3,
        "dL_max_rel": 1.830418324804e-3},
    3: {"e_min": 1.944647875494e-4, "dL_avg_abs": 1.315683847557e-5,
        "dL_avg_rel": 1.257398895852e-5, "dL_max_abs": 2.221096435873e-5,
        "dL_max_rel": 1.598717509714e-5},
}


def _fh_swap(v):
    """x_j <-> -v_j (j=1,3), y_i <-> -u_i: maps V2 to V3, V' to V''."""
    x1, x3, y1, y2, y3, u1, u2, v1, v3 = v
    # u3 = -y3 makes y3 a fixed point of the exchange
    return np.array([-v1, -v3, -u1, -u2, y3, -y1, -y2, -x1, -x3])


def _fh_chart() -> Chart:
    # joints: A1 Ab1 B1 C1 Cb1 A2 Ab2 B2 C2 Cb2 = 0..9
    table = {
        (0, 0): [0.0, ("x1", 1)], (0, 1): [0.0, ("y1", 1)],
        (1, 0): [0.0, ("x1", -1)], (1, 1): [0.0, ("y1", 1)],
        (2, 1): [0.0, ("y2", 1)],
        (3, 0): [0.0, ("x3", 1)], (3, 1): [0.0, ("y3", 1)],
        (4, 0): [0.0, ("x3", -1)], (4, 1): [0.0, ("y3", 1)],
        (5, 1): [0.0, ("u1", 1)], (5, 2): [0.0, ("v1", 1)],
        (6, 1): [0.0, ("u1", 1)], (6, 2): [0.0, ("v1", -1)],
        (7, 1): [0.0, ("u2", 1)],
        (8, 1): [0.0, ("y3", -1)], (8, 2): [0.0, ("v3", 1)],
        (9, 1): [0.0, ("y3", -1)], (9, 2): [0.0, ("v3", -1)],
    }
    return Chart.from_assignments(10, 3, FH_NAMES, table)


def four_horn(design: int = 1, mode: str = "bar") -> Fixture:
    if design not in FH_DESIGN_LENGTHS:
        raise ValueError(f"unknown four-horn design {design}")
    chart = _fh_chart()
    theta1 = np.array(FH_TABLES[design]["V1"])
    a, b = FH_DESIGN_LENGTHS[design]
    fw = _surface_fixture(chart, theta1, [a, b], mode,
                          f"fh{design}-{mode}", 24, 16)
    saddle = np.array(FH_TABLES[design]["Vp_bar" if mode == "bar"
                                        else "Vp_panel"])
    v2 = np.array(FH_TABLES[design]["V2"])
    return Fixture(framework=fw, chart=chart,
                   minima=[theta1, v2, _fh_swap(v2)], saddle=saddle,
                   extras={"s": FH_S[(design, mode)],
                           "stats": FH_STATS[design],
                           "legs": (a, b),
                           "saddle2": _fh_swap(saddle)})


# ---------------------------------------------------------------------------
# Stewart-Gough manipulator

SG_BASE = np.array([
    [0.0, 0.0, 0.0],
    [SQ3 / 2, 0.5, 0.5],
    [2 * SQ3, 0.0, 0.0],
    [3 * SQ3 / 2, 0.5, 0.5],
    [SQ3, 3.0, 0.0],
    [SQ3, 2.0, 0.5],
])

SG_PLATFORM_SIDES = {"23": 2.0, "31": 3.0, "12": 2.0 - SQ3}

SG_AFFINE = np.array([
    [-(SQ3 + 1) / 2, (SQ3 + 1) / 2, 0.0],
    [-3 * (SQ3 + 1) / 2, (SQ3 + 1) / 2, 0.0],
    [-SQ3 - 2, 1.0, 0.0],
])

SG_LEGS = np.array([3.1, 2.5, 3.2, 2.6, 3.15, 2.55])

# columns: (x1, x2, x3, y1, y2, y3, z1, z2, z3)
SG_TABLE = {
    "V1": (0.842928302224, 1.227117667465, 2.571092053711,
           0.505604311407, 0.158839883661, 0.594205901934,
           2.940040162536, 2.950147373651, 3.014872015394),
    "V2": (1.722185861193, 2.215337180628, 2.516815584869,
           0.043791592870, 0.201000858188, 1.582339155201,
           2.577238474600, 2.583256403538, 2.615119877650),
    "Vp_rel": (1.225741950663, 1.731161637163, 2.684588070901,
               0.160342690355, 0.048866028718, 1.092093613851,
               2.814950790353, 2.823499874485, 2.875019201615),
    "Vp_abs": (1.221043138727, 1.726370305617, 2.680372134138,
               0.156045184954, 0.044256807218, 1.086968370169,
               2.824067090458, 2.833916224311, 2.885230039892),
}

SG_S = {"rel": 3.324106490339e-5, "abs": 1.024890249080e-1}


def sg_decoupled() -> dict:
    """Input data of the decoupled Stewart-Gough example as a JSON-ready
    dict (the SG module consumes this format)."""
    return {
        "base": SG_BASE.tolist(),
        "platform_triangle": {k: float(v) for k, v in
                              SG_PLATFORM_SIDES.items()},
        "affine_coords": SG_AFFINE.tolist(),
        "legs": SG_LEGS.tolist(),
    }


# ---------------------------------------------------------------------------
# File export for the CLI


def write_fixture_files(directory: str) -> list[str]:
    import os
    os.makedirs(directory, exist_ok=True)
    written = []

    def dump(name, obj):
        path = os.path.join(directory, name)
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2)
        written.append(path)

    dump("quad.json", quad().framework.to_json())
    for mode in ("bar", "panel", "tetra"):
        dump(f"4r-{mode}.json", four_r_loop(mode).framework.to_json())
    for mode in ("bar", "panel"):
        dump(f"sd-{mode}.json", siamese_dipyramid(mode).framework.to_json())
        for design in (1, 2, 3):
            dump(f"fh{design}-{mode}.json",
                 four_horn(design, mode).framework.to_json())
    dump("sg-decoupled.json", sg_decoupled())
    return written
