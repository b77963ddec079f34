import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bigreedy import (
    BlackBoxObjective,
    DimensionError,
    DomainError,
    QuadraticModel,
    SoftmaxModel,
    eval_quadratic,
    eval_softmax,
    gen_nqp,
    gen_softmax,
    load_instance,
    partial,
    save_instance,
    validate_submodularity,
)
from bigreedy.objective import corner_sum, estimate_hessian, model_from_dict, model_to_dict
from oracles import central_difference, hessian_fd


@pytest.fixture
def bowl():
    return QuadraticModel([[-2.0]], [1.0], 0.0)


@pytest.fixture
def cut():
    # x1 + x2 - 2 x1 x2
    return QuadraticModel([[0.0, -2.0], [-2.0, 0.0]], [1.0, 1.0], 0.0)


class TestEvalQuadratic:
    def test_bowl_optimum(self, bowl):
        assert eval_quadratic(bowl, [0.5]) == 0.25

    @pytest.mark.parametrize("x, expected", [((1, 0), 1.0), ((0, 1), 1.0), ((0.5, 0.5), 0.5)])
    def test_cut(self, cut, x, expected):
        # brute check of x1 + x2 - 2 x1 x2 by hand
        assert eval_quadratic(cut, x) == pytest.approx(x[0] + x[1] - 2 * x[0] * x[1], abs=0)
        assert eval_quadratic(cut, x) == expected

    def test_dimension_mismatch_names_both(self, cut):
        with pytest.raises(DimensionError, match="n=2.*\\(3,\\)"):
            cut([0.1, 0.2, 0.3])

    def test_box_membership(self, cut):
        assert cut([1 + 1e-13, 0]) == 1.0
        with pytest.raises(DomainError):
            cut([1.001, 0])

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            QuadraticModel([[0, 1], [0, 0]], [0, 0])


class TestEvalSoftmax:
    def test_origin_is_zero(self):
        model = gen_softmax(6, 3)
        assert eval_softmax(model, np.zeros(6)) == 0.0

    def test_scalar_e(self):
        assert eval_softmax(SoftmaxModel([[math.e]]), [1.0]) == pytest.approx(1.0, abs=1e-15)

    def test_diag(self):
        # diag(0.5, 1) diag(1, 1) + I = diag(1.5, 2), determinant 3
        expected = math.log(1.5 * 2.0)
        assert eval_softmax(SoftmaxModel(np.diag([2.0, 2.0])), [0.5, 1.0]) == pytest.approx(
            expected, abs=1e-14
        )

    def test_full_point_is_logdet(self):
        model = gen_softmax(5, 11)
        assert model(np.ones(5)) == pytest.approx(np.linalg.slogdet(model.L)[1], abs=1e-12)

    def test_not_positive_definite(self):
        from bigreedy import NotPositiveDefiniteError

        bad = SoftmaxModel([[-1.0]], lipschitz=1.0)
        with pytest.raises(NotPositiveDefiniteError, match="not positive definite at x"):
            bad([1.0])


class TestPartial:
    def test_bowl(self, bowl):
        assert partial(bowl, [0.5], 0) == 0.0
        assert partial(bowl, [0.0], 0) == 1.0

    def test_softmax_origin_matches_fd(self):
        model = SoftmaxModel(np.diag([2.0, 2.0]))
        fd = (model([1e-6, 0]) - model([0, 0])) / 1e-6
        assert fd == pytest.approx(1.0, abs=1e-5)
        assert partial(model, [0, 0], 0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("make", [
        lambda: gen_nqp(8, 1, "strong"),
        lambda: gen_nqp(8, 2, "weak"),
        lambda: gen_softmax(8, 3),
    ])
    def test_analytic_vs_central_difference(self, make):
        model = make()
        rng = np.random.default_rng(0)
        tol = 1e-5 * max(1.0, model.lipschitz)
        for _ in range(20):
            x = rng.uniform(1e-4, 1 - 1e-4, model.n)
            for i in range(model.n):
                assert model.partial(x, i) == pytest.approx(
                    central_difference(model, x, i), abs=tol
                )

    def test_gradient_matches_partials(self):
        model = gen_softmax(5, 9)
        x = np.linspace(0.1, 0.9, 5)
        np.testing.assert_allclose(model.gradient(x), [model.partial(x, i) for i in range(5)],
                                   atol=1e-12)

    def test_blackbox_fd_one_sided_at_boundary(self):
        obj = BlackBoxObjective(lambda x: x[0] - x[0] ** 2, 1, 1.0)
        assert not obj.has_analytic_partial
        assert obj.partial([0.0], 0) == pytest.approx(1.0, abs=1e-4)
        assert obj.partial([1.0], 0) == pytest.approx(-1.0, abs=1e-4)
        assert obj.partial([0.5], 0) == pytest.approx(0.0, abs=1e-9)

    def test_blackbox_analytic_hook(self):
        obj = BlackBoxObjective(lambda x: x[0], 1, 1.0, partial=lambda x, i: 1.0)
        assert obj.has_analytic_partial
        assert obj.partial([0.3], 0) == 1.0


class TestLineAndDelta:
    @pytest.mark.parametrize("make", [lambda: gen_nqp(6, 4, "weak"), lambda: gen_softmax(6, 4)])
    def test_eval_line_matches_pointwise(self, make):
        model = make()
        x = np.random.default_rng(1).uniform(size=6)
        zs = np.linspace(0, 1, 11)
        direct = []
        for z in zs:
            y = x.copy()
            y[2] = z
            direct.append(model(y))
        np.testing.assert_allclose(model.eval_line(x, 2, zs), direct, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("make", [lambda: gen_nqp(5, 4, "weak"), lambda: gen_softmax(5, 4)])
    def test_eval_delta_matches_difference(self, make):
        model = make()
        x = np.full(5, 0.5)
        D = np.random.default_rng(2).uniform(-0.1, 0.1, (7, 5))
        D[0] = 0
        D[1, 2:] = 0
        expected = [model(x + d) - model(x) for d in D]
        np.testing.assert_allclose(model.eval_delta(x, D), expected, rtol=0, atol=1e-10)

    def test_eval_many(self):
        model = gen_softmax(4, 5)
        P = np.random.default_rng(3).uniform(size=(9, 4))
        np.testing.assert_allclose(model.eval_many(P), [model(p) for p in P], atol=1e-12)


class TestGenerators:
    @pytest.mark.parametrize("variant", ["strong", "weak"])
    def test_nqp_invariants(self, variant):
        model = gen_nqp(100, 5, variant)
        assert np.array_equal(model.H, model.H.T)
        off = model.H[~np.eye(100, dtype=bool)]
        assert off.max() <= 0
        diag = np.diag(model.H)
        if variant == "strong":
            assert diag.max() <= 0
        else:
            assert diag.min() >= 0
        assert 0 <= model.h.min() and model.h.max() <= 1
        assert abs(corner_sum(model)) <= 1e-9

    def test_nqp_lipschitz_formula(self):
        model = gen_nqp(7, 8, "weak")
        expected = max(abs(model.h[i]) + np.abs(model.H[i]).sum() for i in range(7))
        assert model.lipschitz == pytest.approx(expected)

    def test_nqp_lipschitz_probe_invariant(self):
        model = gen_nqp(6, 9, "weak")
        rng = np.random.default_rng(4)
        for _ in range(200):
            x = rng.uniform(size=6)
            i = rng.integers(6)
            z1, z2 = rng.uniform(size=2)
            vals = model.eval_line(x, i, [z1, z2])
            assert abs(vals[0] - vals[1]) <= model.lipschitz * abs(z1 - z2) + 1e-12

    @pytest.mark.parametrize("variant", ["strong", "weak"])
    def test_nqp_deterministic(self, variant):
        a, b = gen_nqp(30, 42, variant), gen_nqp(30, 42, variant)
        assert a.H.tobytes() == b.H.tobytes() and a.h.tobytes() == b.h.tobytes() and a.c == b.c

    def test_nqp_seeds_differ(self):
        assert not np.array_equal(gen_nqp(5, 1).H, gen_nqp(5, 2).H)

    def test_softmax_eigenvalues(self):
        model = gen_softmax(100, 6)
        eig = np.linalg.eigvalsh(model.L)
        assert eig.min() >= math.exp(-0.5) - 1e-8
        assert eig.max() <= math.e + 1e-8
        np.testing.assert_allclose(np.sort(eig), model.eigenvalues, atol=1e-8)

    def test_softmax_full_point_is_sum_of_exponents(self):
        model = gen_softmax(50, 7)
        assert model(np.ones(50)) == pytest.approx(np.log(model.eigenvalues).sum(), abs=1e-8)

    def test_softmax_deterministic(self):
        assert gen_softmax(20, 1).L.tobytes() == gen_softmax(20, 1).L.tobytes()

    def test_softmax_lipschitz_bounds_probes(self):
        model = gen_softmax(10, 2)
        rng = np.random.default_rng(5)
        worst = max(np.abs(model.gradient(rng.uniform(size=10))).max() for _ in range(50))
        assert worst <= model.lipschitz


class TestValidator:
    def test_strong_nqp_passes(self):
        assert validate_submodularity(gen_nqp(20, 3, "strong"), "strong", probes=3).passed

    def test_weak_nqp_passes_weak_fails_strong(self):
        model = gen_nqp(20, 3, "weak")
        assert validate_submodularity(model, "weak", probes=2).passed
        assert not validate_submodularity(model, "strong", probes=2).passed

    def test_positive_diagonal_vacuous_for_weak(self):
        report = validate_submodularity(QuadraticModel([[1.0]], [0.0]), "weak", probes=2)
        assert report.passed
        assert report.worst_violation == -math.inf

    def test_positive_off_diagonal(self):
        model = QuadraticModel([[0, 0.5], [0.5, 0]], [0, 0])
        report = validate_submodularity(model, "weak", probes=3)
        assert not report.passed
        assert report.worst_violation == pytest.approx(0.5, abs=1e-6)

    def test_softmax_is_strong(self):
        assert validate_submodularity(gen_softmax(12, 1), "strong", probes=3).passed

    def test_hessian_estimate_matches_plain_fd(self):
        model = gen_softmax(4, 8)
        x = np.array([0.2, 0.4, 0.6, 0.8])
        np.testing.assert_allclose(estimate_hessian(model, x), hessian_fd(model, x), atol=1e-5)


class TestSerialization:
    @pytest.mark.parametrize("make", [
        lambda: gen_nqp(7, 1, "strong"), lambda: gen_nqp(7, 1, "weak"), lambda: gen_softmax(7, 1)
    ])
    def test_round_trip_bit_exact(self, make, tmp_path):
        model = make()
        path = tmp_path / "inst.json"
        save_instance(model, path)
        back = load_instance(path)
        assert type(back) is type(model) and back.kind == model.kind
        for attr in ("H", "h", "L"):
            if hasattr(model, attr):
                assert getattr(back, attr).tobytes() == getattr(model, attr).tobytes()
        x = np.linspace(0, 1, 7)
        assert back(x) == model(x)
        data = json.loads(path.read_text())
        assert {"kind", "n", "seed"} <= set(data)

    def test_dimension_check(self):
        data = model_to_dict(gen_nqp(3, 1))
        data["n"] = 4
        with pytest.raises(DimensionError):
            model_from_dict(data)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            model_from_dict({"kind": "nope", "n": 1})


def test_concurrent_evaluation_is_consistent():
    model = gen_softmax(30, 2)
    pts = np.random.default_rng(0).uniform(size=(64, 30))
    serial = [model(p) for p in pts]
    with ThreadPoolExecutor(8) as pool:
        parallel = list(pool.map(model, pts))
    assert serial == parallel


def test_arrays_are_read_only():
    model = gen_nqp(3, 0)
    with pytest.raises(ValueError):
        model.H[0, 0] = 1.0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_nqp_corner_balance_property(n, seed):
    model = gen_nqp(n, seed, "weak")
    assert abs(model(np.zeros(n)) + model(np.ones(n))) <= 1e-9
