from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckc.chain import (
    TWO_PI,
    ChainPrefixState,
    CKCError,
    DegenerateError,
    DiagonalVector,
    JointAngles,
    LinkLengths,
    NonClosableError,
    arg,
    diagonal_lengths,
    endpoint_map,
    planar_phase,
    prefix_sums,
    polar_phase,
    squared_norm_expanded,
)

from conftest import closable_links


def _loop_endpoint(a, alpha, beta, k):
    # plain python loop, the textbook definition
    x = y = z = 0.0
    for j in range(k):
        x += a[j] * math.sin(beta[j]) * math.cos(alpha[j])
        y += a[j] * math.sin(beta[j]) * math.sin(alpha[j])
        z += a[j] * math.cos(beta[j])
    return x, y, z


angle_vectors = st.integers(3, 12).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(0.1, 5.0), min_size=n, max_size=n),
        st.lists(st.floats(0.0, TWO_PI), min_size=n - 1, max_size=n - 1),
        st.lists(st.floats(0.0, math.pi), min_size=n - 1, max_size=n - 1),
    )
)


class TestLinkLengths:
    def test_valid(self):
        a = LinkLengths([1, 2, 3, 4])
        assert a.n == 4
        assert a.total == 10
        assert a.link(3) == 3.0
        assert a.sum_squares(2) == 5.0

    def test_unit(self):
        assert LinkLengths.unit(5) == LinkLengths([1, 1, 1, 1, 1])

    def test_non_closable(self):
        with pytest.raises(NonClosableError):
            LinkLengths([5, 1, 1])

    def test_boundary_closable(self):
        # 2 max == sum is allowed: the degenerate flat chain
        assert LinkLengths([2, 1, 1]).n == 3

    @pytest.mark.parametrize("bad", [[1, 1], [1, 0, 1], [1, -1, 1, 1], [1, math.nan, 1]])
    def test_rejects(self, bad):
        with pytest.raises(CKCError):
            LinkLengths(bad)

    def test_read_only(self):
        a = LinkLengths([1, 1, 1])
        with pytest.raises(ValueError):
            a.a[0] = 2.0

    def test_link_index(self):
        with pytest.raises(IndexError):
            LinkLengths([1, 1, 1]).link(0)


class TestJointAngles:
    def test_alpha_reduced(self):
        ang = JointAngles([TWO_PI + 1.0, -1.0], [0.5, 0.5])
        assert ang.alpha[0] == pytest.approx(1.0)
        assert ang.alpha[1] == pytest.approx(TWO_PI - 1.0)

    def test_tiny_negative_alpha(self):
        ang = JointAngles([-1e-300], [1.0])
        assert 0.0 <= ang.alpha[0] < TWO_PI

    @pytest.mark.parametrize("beta", [-1e-9, math.pi + 1e-9])
    def test_beta_range(self, beta):
        with pytest.raises(CKCError):
            JointAngles([0.0], [beta])

    def test_shape_mismatch(self):
        with pytest.raises(CKCError):
            JointAngles([0.0, 1.0], [0.5])


class TestArg:
    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
    def test_addition_identity(self, a, b, x):
        if math.hypot(a, b) < 1e-6:
            return
        t = arg(a, b)
        assert 0.0 <= t < TWO_PI
        lhs = a * math.sin(x) + b * math.cos(x)
        assert lhs == pytest.approx(math.hypot(a, b) * math.sin(x + t), abs=1e-9)

    def test_quadrants(self):
        assert arg(1.0, 0.0) == pytest.approx(0.0)
        assert arg(0.0, 1.0) == pytest.approx(math.pi / 2)
        assert arg(-1.0, 0.0) == pytest.approx(math.pi)
        assert arg(0.0, -1.0) == pytest.approx(3 * math.pi / 2)

    def test_origin(self):
        with pytest.raises(DegenerateError):
            arg(0.0, 0.0)


class TestEndpointMap:
    @given(angle_vectors)
    def test_matches_loop(self, data):
        a, al, be = data
        if 2 * max(a) > sum(a):
            return
        links = LinkLengths(a)
        ang = JointAngles(al, be)
        for k in range(len(al) + 1):
            got = endpoint_map(links, ang, k)
            exp = _loop_endpoint(a, al, be, k)
            assert np.allclose(got, exp, atol=1e-12 * sum(a))

    @given(angle_vectors)
    def test_expanded_norm(self, data):
        a, al, be = data
        if 2 * max(a) > sum(a):
            return
        links = LinkLengths(a)
        ang = JointAngles(al, be)
        for k in range(1, len(al) + 1):
            direct = endpoint_map(links, ang, k).norm() ** 2
            assert squared_norm_expanded(links, ang, k) == pytest.approx(direct, abs=1e-10 * sum(a) ** 2)

    def test_square(self):
        links = LinkLengths.unit(4)
        ang = JointAngles([0, math.pi / 2, math.pi], [math.pi / 2] * 3)
        end = endpoint_map(links, ang)
        assert end.x == pytest.approx(0.0, abs=1e-15)
        assert end.y == pytest.approx(1.0)


class TestPrefixState:
    @given(angle_vectors)
    def test_states_match_endpoints(self, data):
        a, al, be = data
        if 2 * max(a) > sum(a):
            return
        links = LinkLengths(a)
        ang = JointAngles(al, be)
        for k, s in enumerate(prefix_sums(links, ang), start=1):
            assert s.k == k
            assert np.allclose(s.point(), endpoint_map(links, ang, k), atol=1e-12 * sum(a))

    def test_compensated_long_sum(self):
        # 10^6 links of length 0.1 along x; naive summation drifts by ~1e-6
        state = ChainPrefixState()
        for _ in range(1_000_000):
            state = state.advance(0.1, 0.0, math.pi / 2)
        assert abs(state.X - 100_000.0) < 1e-9

    def test_phase_angles(self):
        s = ChainPrefixState(1.0, 1.0, 0.0, 2)
        assert planar_phase(s) == pytest.approx(math.pi / 4)
        assert polar_phase(0.0, s) == pytest.approx(arg(math.sin(math.pi / 4) * math.sqrt(2), 0.0))
        axis = ChainPrefixState(0.0, 0.0, 2.0, 1)
        assert polar_phase(1.3, axis) == pytest.approx(math.pi / 2)
        with pytest.raises(DegenerateError):
            planar_phase(axis)


class TestDiagonalVector:
    def test_square_diagonals(self):
        links = LinkLengths.unit(4)
        ang = JointAngles([0, math.pi / 2, math.pi], [math.pi / 2] * 3)
        dv = diagonal_lengths(links, ang)
        assert dv.first == 1.0
        assert dv.values[0] == pytest.approx(math.sqrt(2))
        assert dv.last == pytest.approx(1.0)
        assert dv.n == 4
        assert dv.at(1) == 1.0 and dv.at(2) == dv.values[0] and dv.at(3) == dv.last

    def test_for_links_size(self):
        with pytest.raises(CKCError):
            DiagonalVector.for_links(LinkLengths.unit(5), [1.0])

    def test_negative(self):
        with pytest.raises(CKCError):
            DiagonalVector([-1.0], 1.0, 1.0)

    @given(closable_links())
    def test_full(self, links):
        dv = DiagonalVector.for_links(links, np.ones(links.n - 3))
        full = dv.full()
        assert full[0] == links.a[0] and full[-1] == links.a[-1]
        assert len(full) == links.n - 1
