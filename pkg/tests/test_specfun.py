"""Special-function kernel against independent oracles."""

import math

import numpy as np
import pytest

from qbattery.specfun import (
    Accuracy,
    arcsinh,
    debruijn_w_approx,
    erf,
    erfinv,
    lambert_w0,
)

from oracles import erf_series, erfinv_bisect, lambert_bisect


class TestAccuracy:
    def test_defaults(self):
        acc = Accuracy()
        assert acc.abs_tol == 1e-12 and acc.rel_tol == 1e-12

    @pytest.mark.parametrize("bad", [(0.0, 1e-12), (1e-12, -1.0), (-1e-3, 1e-3)])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            Accuracy(*bad)


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_saturation(self):
        # erfc(6) ~ 2e-17, so the limit is reached well within 1e-12
        assert abs(erf(6.0) - 1.0) < 1e-12

    def test_reference_point(self):
        # frozen from the 60-digit series oracle
        assert erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-15)

    def test_matches_series_oracle(self):
        for x in np.linspace(-6.0, 6.0, 241):
            want = erf_series(float(x))
            assert erf(float(x)) == pytest.approx(want, abs=1e-12, rel=1e-12)

    def test_odd_increasing_bounded(self):
        # erf saturates to 1.0 in double precision just below 5.9, so the
        # strict open bound is asserted where the mantissa can still see it
        grid = np.linspace(-6.0, 6.0, 1001)
        vals = np.array([erf(float(x)) for x in grid])
        assert np.all(np.abs(vals) <= 1.0)
        assert np.all(np.abs(vals[np.abs(grid) <= 5.8]) < 1.0)
        assert np.all(np.diff(vals) >= 0.0)
        assert np.any(np.diff(vals) > 0.0)
        flipped = np.array([erf(float(-x)) for x in grid])
        assert np.allclose(vals, -flipped, atol=0.0, rtol=0.0)

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_rejects_nonfinite(self, bad):
        with pytest.raises(ValueError):
            erf(bad)


class TestErfinv:
    def test_zero(self):
        assert erfinv(0.0) == 0.0

    def test_forward_roundtrip_contract(self):
        for p in np.linspace(-0.999999, 0.999999, 801):
            assert erf(erfinv(float(p))) == pytest.approx(float(p), abs=1e-10)

    def test_inverse_identity_roundtrip(self):
        assert erfinv(erf(0.7)) == pytest.approx(0.7, abs=1e-10)

    def test_reference_point(self):
        # frozen from the bisection oracle: erfinv(0.8427007929) = 0.999999999880...
        assert erfinv(0.8427007929) == pytest.approx(1.0, abs=1e-9)

    def test_matches_bisection_oracle(self):
        for p in (-0.99, -0.6, -0.123, 0.05, 0.5, 0.9, 0.999):
            assert erfinv(p) == pytest.approx(erfinv_bisect(p), abs=1e-12)

    def test_strictly_increasing(self):
        grid = np.linspace(-0.995, 0.995, 399)
        vals = [erfinv(float(p)) for p in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_identity_where_conditioning_permits(self):
        # The roundtrip x -> erf -> erfinv is limited by the conditioning
        # (sqrt(pi)/2) e^(x^2) ulp(erf x): strict 1e-9 holds on [-4, 4],
        # beyond that only the conditioning-scaled bound can.
        for x in np.linspace(-4.0, 4.0, 401):
            x = float(x)
            assert erfinv(erf(x)) == pytest.approx(x, abs=1e-9)
        for x in np.linspace(4.0, 5.0, 51):
            x = float(x)
            assert abs(erfinv(erf(x)) - x) < 20.0 * math.exp(x * x) * 2.3e-16

    @pytest.mark.parametrize("bad", [1.0, -1.0, 1.5, -2.0, math.nan])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            erfinv(bad)


class TestLambertW:
    def test_trivial_points(self):
        assert lambert_w0(0.0) == 0.0
        assert lambert_w0(math.e) == pytest.approx(1.0, rel=1e-14)

    def test_defining_equation(self):
        for x in np.logspace(-6.0, 6.0, 49):
            w = lambert_w0(float(x))
            assert w >= 0.0
            assert w * math.exp(w) == pytest.approx(float(x), rel=1e-12)

    def test_reference_point(self):
        # frozen from the bisection oracle at 2 * 10^2 / pi
        x = 2.0 * 10.0**2 / math.pi
        assert lambert_w0(x) == pytest.approx(3.041301825028391, rel=1e-12)
        assert lambert_w0(x) == pytest.approx(lambert_bisect(x), rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            lambert_w0(-0.1)
        with pytest.raises(ValueError):
            lambert_w0(math.inf)


class TestDeBruijn:
    def test_exact_at_e_to_e(self):
        u = math.exp(math.e)
        want = math.e - 1.0 + 1.0 / math.e
        assert debruijn_w_approx(u) == pytest.approx(want, rel=1e-14)

    def test_reference_point(self):
        # 4.6052 - 1.5272 + 0.3316 = 3.4096
        assert debruijn_w_approx(100.0) == pytest.approx(3.4096, abs=2e-4)
        l1 = math.log(100.0)
        l2 = math.log(l1)
        assert debruijn_w_approx(100.0) == pytest.approx(l1 - l2 + l2 / l1, rel=1e-15)

    def test_consistency_with_lambert(self):
        for u in np.logspace(math.log10(50.0), 6.0, 60):
            w = lambert_w0(float(u))
            assert abs(debruijn_w_approx(float(u)) - w) / w < 0.05

    def test_endpoint_accuracy(self):
        # < 5% at u = 50 improving to < 1% at u = 1e4
        for u, bound in ((50.0, 0.05), (1e4, 0.01)):
            w = lambert_w0(u)
            assert abs(debruijn_w_approx(u) - w) / w < bound

    @pytest.mark.parametrize("bad", [math.e, 1.0, 0.0, -3.0])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            debruijn_w_approx(bad)


class TestArcsinh:
    def test_trivia(self):
        assert arcsinh(0.0) == 0.0
        assert arcsinh(math.sinh(2.0)) == pytest.approx(2.0, abs=1e-12)

    def test_reference_point(self):
        # ln(1 + sqrt(2))
        assert arcsinh(1.0) == pytest.approx(0.8813735870195429, abs=1e-15)

    def test_log_formula_and_oddness(self):
        for x in np.linspace(-30.0, 30.0, 301):
            x = float(x)
            want = math.log(x + math.sqrt(x * x + 1.0)) if x >= 0 else -math.log(
                -x + math.sqrt(x * x + 1.0)
            )
            assert arcsinh(x) == pytest.approx(want, rel=1e-13, abs=1e-15)
            assert arcsinh(-x) == -arcsinh(x)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            arcsinh(math.inf)
