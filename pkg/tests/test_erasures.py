import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import framelab as fl
from conftest import plane_better_dual, random_dual_pair, random_frame, random_profile


def enumerated_measure(pair, profile, m, kind):
    """Independent oracle: build the full error operator for every set."""
    evaluate = fl.spectral_radius if kind == "spectral" else fl.operator_norm
    best = -np.inf
    for combo in itertools.combinations(range(1, pair.count + 1), m):
        lam = fl.ErasureSet.of(combo, pair.count)
        best = max(best, evaluate(fl.error_operator(pair, profile, lam)))
    return best


def test_error_operator_single_index(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    operator = fl.error_operator(pair, plane_profile, fl.ErasureSet.of([3], 3))
    assert_allclose(operator, np.full((2, 2), 2 / 3), atol=1e-12)
    assert_allclose(fl.spectral_radius(operator), 4 / 3, atol=1e-12)


def test_error_operator_empty_set(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    operator = fl.error_operator(pair, plane_profile, fl.ErasureSet(()))
    assert_allclose(operator, np.zeros((2, 2)), atol=0)


def test_error_operator_tight_first_index(tight_frame, tight_profile):
    pair = fl.canonical_dual(tight_frame)
    operator = fl.error_operator(pair, tight_profile, fl.ErasureSet.of([1], 4))
    assert_allclose(fl.spectral_radius(operator), 1.0, atol=1e-12)
    assert np.linalg.matrix_rank(operator) == 1


def test_error_operator_shape_mismatch(plane_frame, tight_profile):
    pair = fl.canonical_dual(plane_frame)
    with pytest.raises(fl.ShapeMismatch):
        fl.error_operator(pair, tight_profile, fl.ErasureSet.of([1], 4))


def test_spectral_radius_basics():
    assert fl.spectral_radius([[2, 0], [0, 1]]) == pytest.approx(2.0)
    assert fl.spectral_radius([[0, 1], [0, 0]]) == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(0)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    q = 1.7
    outer = q * np.outer(g, f.conj())
    assert fl.spectral_radius(outer) == pytest.approx(q * abs(f.conj() @ g), rel=1e-12)


def test_operator_norm_basics():
    assert fl.operator_norm(np.eye(3)) == pytest.approx(1.0)
    assert fl.operator_norm([[0, 1], [0, 0]]) == pytest.approx(1.0)
    rng = np.random.default_rng(1)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    q = 0.9
    outer = q * np.outer(g, f.conj())
    assert fl.operator_norm(outer) == pytest.approx(
        q * np.linalg.norm(f) * np.linalg.norm(g), rel=1e-12
    )


def test_spectral_measure_plane_canonical(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    report = fl.spectral_measure(pair, plane_profile, 1)
    assert report.value == pytest.approx(4 / 3, abs=1e-12)
    per_index = [report.value_of([i]) for i in (1, 2, 3)]
    assert_allclose(per_index, [8 / 9, 8 / 9, 4 / 3], atol=1e-12)
    assert report.argmax_sets == (fl.ErasureSet((3,)),)


def test_spectral_measure_better_dual(plane_frame, plane_profile):
    report = fl.spectral_measure(plane_better_dual(plane_frame), plane_profile, 1)
    assert report.value == pytest.approx(10 / 9, abs=1e-12)


def test_spectral_measure_mercedes_two(mercedes_frame, mercedes_profile):
    pair = fl.canonical_dual(mercedes_frame)
    report = fl.spectral_measure(pair, mercedes_profile, 2)
    assert report.value == pytest.approx(1.5, abs=1e-12)
    # brute-force oracle over the full operators and the weight-only formula
    assert report.value == pytest.approx(
        enumerated_measure(pair, mercedes_profile, 2, "spectral"), abs=1e-12
    )
    assert fl.optimal_values(mercedes_profile).spectral_two == pytest.approx(1.5, abs=1e-12)


def test_norm_measure_values(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    assert fl.norm_measure(pair, plane_profile, 1).value == pytest.approx(4 / 3, abs=1e-12)
    better = plane_better_dual(plane_frame)
    assert fl.norm_measure(better, plane_profile, 1).value == pytest.approx(
        2 * math.sqrt(26) / 9, abs=1e-12
    )


def test_norm_measure_orthonormal_self_dual():
    frame = fl.build_frame(3, np.eye(3))
    profile = fl.uniform_profile(3, 3)
    pair = fl.DualPair(frame, frame)
    # a uniform square profile has q_i = N/n = 1 and every block has unit norm
    assert_allclose(profile.weights, np.ones(3), atol=1e-14)
    assert fl.norm_measure(pair, profile, 1).value == pytest.approx(1.0, abs=1e-12)


def test_measures_reject_bad_m(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    with pytest.raises(ValueError):
        fl.spectral_measure(pair, plane_profile, 0)
    with pytest.raises(ValueError):
        fl.norm_measure(pair, plane_profile, 4)


def test_combinatorial_cap(tight_frame, tight_profile):
    pair = fl.canonical_dual(tight_frame)
    with pytest.raises(fl.CombinatorialLimit):
        fl.spectral_measure(pair, tight_profile, 2, max_sets=3)


def test_two_erasure_eigenvalues_mercedes(mercedes_frame, mercedes_profile):
    pair = fl.canonical_dual(mercedes_frame)
    for i, j in itertools.combinations((1, 2, 3), 2):
        roots = fl.two_erasure_eigenvalues(pair, mercedes_profile, i, j)
        assert_allclose(sorted(r.real for r in roots), [0.5, 1.5], atol=1e-12)
        assert max(abs(r.imag) for r in roots) <= 1e-12


def test_two_erasure_eigenvalues_triangular_block():
    frame = fl.build_frame(2, [(1, 0), (0, 1)])
    profile = fl.weights_from_probabilities([0.3, 0.7], 2)
    pair = fl.DualPair(frame, frame)
    roots = fl.two_erasure_eigenvalues(pair, profile, 1, 2)
    assert_allclose(
        sorted(r.real for r in roots), sorted(profile.weights), atol=1e-12
    )


def test_two_erasure_eigenvalues_match_eigensolver():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        count = int(rng.integers(n, 9))
        frame = random_frame(rng, n, count)
        profile = random_profile(rng, n, count)
        pair = random_dual_pair(rng, frame)
        i, j = rng.choice(np.arange(1, count + 1), size=2, replace=False)
        roots = fl.two_erasure_eigenvalues(pair, profile, int(i), int(j))
        lam = fl.ErasureSet.of([int(i), int(j)], count)
        direct = np.linalg.eigvals(fl.error_operator(pair, profile, lam))
        direct = direct[np.argsort(-np.abs(direct))][:2]
        assert_allclose(
            sorted(roots, key=lambda z: (z.real, z.imag)),
            sorted(direct, key=lambda z: (z.real, z.imag)),
            atol=1e-10,
        )
    with pytest.raises(ValueError):
        fl.two_erasure_eigenvalues(pair, profile, 1, 1)


def test_block_measures_match_full_operator_enumeration():
    rng = np.random.default_rng(29)
    for _ in range(15):
        n = int(rng.integers(2, 6))
        count = int(rng.integers(n, 11))
        frame = random_frame(rng, n, count)
        profile = random_profile(rng, n, count)
        pair = random_dual_pair(rng, frame)
        for m in (1, 2, 3):
            if m > count:
                continue
            report = fl.spectral_measure(pair, profile, m)
            assert report.value == pytest.approx(
                enumerated_measure(pair, profile, m, "spectral"), abs=1e-9
            )
            norm_report = fl.norm_measure(pair, profile, m)
            assert norm_report.value == pytest.approx(
                enumerated_measure(pair, profile, m, "norm"), abs=1e-9
            )
            assert report.value <= norm_report.value + 1e-9


def test_per_index_closed_forms_match_operators(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    for i in (1, 2, 3):
        lam = fl.ErasureSet.of([i], 3)
        operator = fl.error_operator(pair, plane_profile, lam)
        spectral = fl.spectral_measure(pair, plane_profile, 1).value_of([i])
        norm = fl.norm_measure(pair, plane_profile, 1).value_of([i])
        assert spectral == pytest.approx(fl.spectral_radius(operator), abs=1e-10)
        assert norm == pytest.approx(fl.operator_norm(operator), abs=1e-10)


def test_simulation_respects_worst_case(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    stats = fl.simulate_erasure_channel(pair, plane_profile, m=1, trials=2000, seed=7)
    bound = fl.norm_measure(pair, plane_profile, 1).value
    assert stats.max_error <= bound + 1e-9
    assert stats.mean_error <= stats.max_error
    assert sum(stats.histogram_counts) == stats.trials


def test_simulation_zero_erasures(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    stats = fl.simulate_erasure_channel(pair, plane_profile, m=0, trials=50, seed=1)
    assert stats.max_error == 0.0


def test_simulation_zero_mass_indices_only_when_needed(tight_frame, tight_profile):
    pair = fl.canonical_dual(tight_frame)
    # support has two indices; m=2 must stay within it
    stats = fl.simulate_erasure_channel(pair, tight_profile, m=2, trials=500, seed=3)
    support_bound = fl.operator_norm(
        fl.error_operator(pair, tight_profile, fl.ErasureSet.of([1, 2], 4))
    )
    assert stats.max_error <= support_bound + 1e-9
    # m=3 exceeds the support and must draw a zero-mass index
    stats3 = fl.simulate_erasure_channel(pair, tight_profile, m=3, trials=200, seed=3)
    assert stats3.max_error <= fl.norm_measure(pair, tight_profile, 3).value + 1e-9


def test_simulation_is_deterministic(tight_frame, tight_profile):
    pair = fl.canonical_dual(tight_frame)
    a = fl.simulate_erasure_channel(pair, tight_profile, m=1, trials=300, seed=42)
    b = fl.simulate_erasure_channel(pair, tight_profile, m=1, trials=300, seed=42)
    assert a == b
    c = fl.simulate_erasure_channel(pair, tight_profile, m=1, trials=300, seed=43)
    assert c.max_error != a.max_error or c.mean_error != a.mean_error


def test_simulation_argument_errors(plane_frame, plane_profile):
    pair = fl.canonical_dual(plane_frame)
    with pytest.raises(ValueError):
        fl.simulate_erasure_channel(pair, plane_profile, m=1, trials=0, seed=0)
    with pytest.raises(fl.InsufficientSupport):
        fl.simulate_erasure_channel(pair, plane_profile, m=4, trials=10, seed=0)


def test_erasure_set_validation():
    with pytest.raises(ValueError):
        fl.ErasureSet.of([1, 1], 3)
    with pytest.raises(ValueError):
        fl.ErasureSet.of([0, 1], 3)
    with pytest.raises(ValueError):
        fl.ErasureSet.of([4], 3)
    assert fl.ErasureSet.of([3, 1], 3).indices == (1, 3)
