import numpy as np
import pytest

from conftest import sparse_dataset
from stabsgd.data import Dataset
from stabsgd.metrics import (cohens_kappa, dataset_margins, selected_set,
                             selection_by_density, sparsity_pct,
                             stability_score)
from stabsgd.metrics import test_error as classification_error


def brute_kappa(s1, s2, p):
    a = np.zeros(p, bool)
    a[list(s1)] = True
    b = np.zeros(p, bool)
    b[list(s2)] = True
    p11 = int(np.sum(a & b))
    p12 = int(np.sum(a & ~b))
    p21 = int(np.sum(~a & b))
    p22 = int(np.sum(~a & ~b))
    q_o = (p11 + p22) / p
    q_e = ((p11 + p12) * (p11 + p21) + (p12 + p22) * (p21 + p22)) / (p * p)
    if q_e == 1.0:
        return 1.0
    return (q_o - q_e) / (1.0 - q_e)


class TestError:
    def test_perfect_classifier(self):
        ds = Dataset.from_rows([1.0, -1.0], [[(0, 1.0)], [(0, -1.0)]], dim=1)
        assert classification_error(np.array([1.0]), ds) == 0.0

    def test_zero_weights_predict_plus_one(self):
        ds = Dataset.from_rows([1.0, -1.0, -1.0], [[(0, 1.0)]] * 3, dim=1)
        assert classification_error(np.zeros(1), ds) == pytest.approx(2 / 3)

    def test_flipped_sign_on_separable(self):
        ds = Dataset.from_rows([1.0, -1.0], [[(0, 2.0)], [(0, -3.0)]], dim=1)
        assert classification_error(np.array([-1.0]), ds) == 1.0

    def test_margins_empty_rows(self):
        ds = Dataset.from_rows([1.0, -1.0], [[], [(0, 2.0)]], dim=1)
        m = dataset_margins(np.array([0.5]), ds)
        assert m.tolist() == [0.0, 1.0]


def test_sparsity_pct():
    assert sparsity_pct(np.zeros(10)) == 0.0
    assert sparsity_pct(np.ones(10)) == 100.0
    w = np.zeros(10000)
    w[:50] = 1.0
    assert sparsity_pct(w) == 0.5


class TestKappa:
    def test_identical_nontrivial(self):
        assert cohens_kappa([0, 1], [0, 1], 4) == 1.0

    def test_balanced_complete_disagreement(self):
        assert cohens_kappa([0, 1], [2, 3], 4) == -1.0

    def test_worked_example(self):
        # p11 = p12 = p21 = p22 = 1 -> q_o = q_e = 0.5 -> kappa = 0
        assert cohens_kappa([0, 1], [0, 2], 4) == 0.0

    def test_degenerate_marginals(self):
        assert cohens_kappa([], [], 5) == 1.0
        assert cohens_kappa(range(5), range(5), 5) == 1.0

    def test_symmetry_and_complement_invariance(self, rng):
        for _ in range(100):
            p = int(rng.integers(2, 40))
            s1 = np.flatnonzero(rng.random(p) < 0.4)
            s2 = np.flatnonzero(rng.random(p) < 0.4)
            k12 = cohens_kappa(s1, s2, p)
            assert k12 == cohens_kappa(s2, s1, p)
            c1 = np.setdiff1d(np.arange(p), s1)
            c2 = np.setdiff1d(np.arange(p), s2)
            assert cohens_kappa(c1, c2, p) == pytest.approx(k12, abs=1e-12)
            assert -1.0 <= k12 <= 1.0

    def test_self_kappa_one(self, rng):
        for _ in range(20):
            p = int(rng.integers(3, 30))
            s = np.flatnonzero(rng.random(p) < 0.5)
            if 0 < s.size < p:
                assert cohens_kappa(s, s, p) == 1.0

    def test_brute_force_oracle(self, rng):
        for _ in range(500):
            p = int(rng.integers(1, 100))
            s1 = np.flatnonzero(rng.random(p) < rng.random())
            s2 = np.flatnonzero(rng.random(p) < rng.random())
            assert cohens_kappa(s1, s2, p) == brute_kappa(s1, s2, p)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cohens_kappa(np.ones(3, bool), np.ones(4, bool), 4)


class TestStabilityScore:
    def test_identical_sets(self):
        assert stability_score([[0, 2], [0, 2], [0, 2]], 5) == 1.0

    def test_two_sets_is_kappa(self):
        s1, s2 = [0, 1], [1, 2]
        assert stability_score([s1, s2], 6) == cohens_kappa(s1, s2, 6)

    def test_mean_over_ordered_pairs(self, rng):
        sets = [np.flatnonzero(rng.random(12) < 0.4) for _ in range(3)]
        kappas = [cohens_kappa(sets[i], sets[j], 12)
                  for i in range(3) for j in range(3) if i != j]
        assert stability_score(sets, 12) == pytest.approx(np.mean(kappas))
        # unordered mean coincides by symmetry
        unordered = [cohens_kappa(sets[i], sets[j], 12)
                     for i in range(3) for j in range(i + 1, 3)]
        assert stability_score(sets, 12) == pytest.approx(np.mean(unordered))

    def test_requires_two(self):
        with pytest.raises(ValueError):
            stability_score([[0]], 3)

    def test_bounds(self, rng):
        sets = [np.flatnonzero(rng.random(20) < 0.5) for _ in range(5)]
        assert -1.0 <= stability_score(sets, 20) <= 1.0


class TestSelectionByDensity:
    def test_full_and_empty_selection(self):
        ds = sparse_dataset(40, 15, density=0.3, seed=2)
        frac, counts, edges = selection_by_density(np.arange(15), ds, bins=10)
        assert np.all(frac[counts > 0] == 1.0)
        frac, _, _ = selection_by_density([], ds, bins=10)
        assert np.all(frac == 0.0)

    def test_two_feature_example(self):
        rows = []
        for i in range(10):
            r = []
            if i < 1:
                r.append((0, 1.0))      # density 0.1
            if i < 9:
                r.append((1, 1.0))      # density 0.9
            rows.append(r)
        ds = Dataset.from_rows([1.0] * 10, rows, dim=2)
        frac, counts, _ = selection_by_density([1], ds, bins=2)
        assert frac.tolist() == [0.0, 1.0]
        assert counts.tolist() == [1, 1]

    def test_counts_sum_to_dim(self):
        ds = sparse_dataset(30, 25, density=0.4, seed=3)
        _, counts, edges = selection_by_density([0, 1], ds, bins=20)
        assert counts.sum() == 25
        assert edges.size == 21

    def test_density_one_in_last_bin(self):
        ds = Dataset.from_rows([1.0, -1.0], [[(0, 1.0)], [(0, 2.0)]], dim=1)
        frac, counts, _ = selection_by_density([0], ds, bins=4)
        assert counts.tolist() == [0, 0, 0, 1]
        assert frac[3] == 1.0


def test_selected_set():
    assert selected_set(np.array([0.0, -2.0, 0.0, 1e-300])).tolist() == [1, 3]
