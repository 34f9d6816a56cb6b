import random

import pytest
from hypothesis import given, settings, strategies as st

from sheafrig.errors import PreconditionError
from sheafrig.extensions import check_motion_extension, extend_motion
from sheafrig.graphs import ExtensionMove, Multigraph, generate_tight
from sheafrig.lie import EuclideanModel, Framework, bar_joint_spec, point_on_line, point_stabilizer_algebra, sample_framework
from sheafrig.motion import motion_cohomology

from conftest import seeds, triangle

E2 = EuclideanModel(2)


def tri_spec():
    fw = Framework(triangle(), 2, {0: [0, 0], 1: [4, 0], 2: [1, 3]})
    return fw, bar_joint_spec(E2, fw)


def test_zero_extension_generic_point():
    fw, spec = tri_spec()
    move = ExtensionMove(2, 0, (), 3, (0, 1))
    cert = check_motion_extension(spec, move, point_stabilizer_algebra(E2, [2, 5]))
    assert cert.valid
    out = extend_motion(spec, cert)
    assert motion_cohomology(out).h1 == 0


def test_zero_extension_collinear_attach_fails():
    fw, spec = tri_spec()
    move = ExtensionMove(2, 0, (), 3, (0, 1))
    cert = check_motion_extension(spec, move, point_stabilizer_algebra(E2, [8, 0]))
    assert not cert.valid
    with pytest.raises(PreconditionError):
        extend_motion(spec, cert)


def test_one_extension_needs_collinear_point():
    fw, spec = tri_spec()
    move = ExtensionMove(2, 1, (0,), 3, (2,))  # delete edge 01, attach 2
    on_line = point_stabilizer_algebra(E2, [2, 0])
    off_line = point_stabilizer_algebra(E2, [2, 1])
    good = check_motion_extension(spec, move, on_line)
    bad = check_motion_extension(spec, move, off_line)
    assert good.valid and motion_cohomology(extend_motion(spec, good)).h1 == 0
    assert not bad.valid and bad.pair_conditions == (False,)


def test_parallel_edges_rejected():
    fw, spec = tri_spec()
    with pytest.raises(PreconditionError):
        check_motion_extension(spec, ExtensionMove(2, 0, (), 3, (0, 0)), point_stabilizer_algebra(E2, [2, 5]))


def test_certificate_json():
    fw, spec = tri_spec()
    cert = check_motion_extension(spec, ExtensionMove(2, 0, (), 3, (0, 1)), point_stabilizer_algebra(E2, [2, 5]))
    js = cert.to_json()
    assert js["valid"] and js["attach_conditions"] == [True, True]


def laman_framework(k, seed):
    g = generate_tight(3, k, seed).graph
    return sample_framework(g, 2, seed)


@settings(max_examples=20)
@given(st.integers(3, 6), seeds)
def test_random_one_extensions(k, seed):
    rng = random.Random(seed)
    fw = laman_framework(k, seed)
    spec = bar_joint_spec(E2, fw)
    assert motion_cohomology(spec).h1 == 0
    g = fw.graph
    e = rng.randrange(g.n_edges)
    u, w = g.edges[e]
    third = rng.choice([v for v in g.vertices if v not in (u, w)])
    move = ExtensionMove(2, 1, (e,), k, (third,))
    p = point_on_line(fw.point(u), fw.point(w), rng)
    cert = check_motion_extension(spec, move, point_stabilizer_algebra(E2, p))
    assert cert.valid  # generic positions: only the placement on the line matters
    assert motion_cohomology(extend_motion(spec, cert)).h1 == 0
    off = [p[0] + 1, p[1]] if fw.point(u)[1] != fw.point(w)[1] else [p[0], p[1] + 1]
    assert not check_motion_extension(spec, move, point_stabilizer_algebra(E2, off)).pair_conditions[0]
