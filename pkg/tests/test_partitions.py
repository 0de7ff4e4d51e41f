import numpy as np
import pytest

from corona_lab import (
    HorizonTooSmall,
    IntervalPartition,
    PreconditionViolation,
    SparseSet,
    TorusElement,
    TruncationExceeded,
    almost_subset,
    coarsen_map,
    constant_one,
    delta_one,
    fx_profile,
    interval,
    n_of,
)


def test_sparse_set_validation():
    with pytest.raises(PreconditionViolation):
        SparseSet(np.array([5]))
    with pytest.raises(PreconditionViolation):
        SparseSet(np.array([3, 3, 5]))
    with pytest.raises(PreconditionViolation):
        SparseSet(np.array([-1, 2]))


def test_enumeration_prepends_zero():
    X = SparseSet(np.array([2, 5, 9]))
    assert n_of(X, 0) == 0
    assert n_of(X, 1) == 2
    assert n_of(X, 2) == 5
    Y = SparseSet(np.array([0, 3]))
    assert n_of(Y, 0) == 0 and n_of(Y, 1) == 3
    evens = SparseSet(np.arange(2, 20, 2))
    for j in range(1, 9):
        assert n_of(evens, j) == 2 * j


def test_intervals():
    X = SparseSet(np.array([2, 5, 9]))
    assert interval(X, 0) == range(0, 2)
    assert interval(X, 1) == range(2, 5)
    assert interval(X, 2) == range(5, 9)
    # adjacency and covering
    part = IntervalPartition(X)
    ivs = list(part)
    for a, b in zip(ivs, ivs[1:]):
        assert a.stop == b.start
    covered = [i for iv in ivs for i in iv]
    assert covered == list(range(9))


def test_truncation_errors():
    X = SparseSet(np.array([2, 5]))
    with pytest.raises(TruncationExceeded):
        n_of(X, 3)
    with pytest.raises(TruncationExceeded):
        interval(X, 2)


def test_almost_subset():
    X = SparseSet(np.arange(2, 100, 2))
    rep = almost_subset(X, X)
    assert rep["holds"] and rep["exceptions"] == []
    Y = SparseSet(np.sort(np.append(np.arange(2, 100, 2), 3)))
    rep = almost_subset(Y, X)
    assert rep["holds"] and rep["exceptions"] == [3]
    odds = SparseSet(np.arange(1, 100, 2))
    rep = almost_subset(odds, X)
    assert not rep["holds"] and len(rep["exceptions"]) > 20


def test_coarsen_map():
    X = SparseSet(np.arange(1, 20))
    Y = SparseSet(np.arange(2, 20, 2))
    m = coarsen_map(Y, Y)
    assert all(v == [k] for k, v in m.items())
    m = coarsen_map(Y, X)
    for j, ks in m.items():
        assert len(ks) == 2
        lo = min(interval(X, ks[0]))
        hi = max(interval(X, ks[-1]))
        assert range(lo, hi + 1) == interval(Y, j)
    with pytest.raises(PreconditionViolation):
        coarsen_map(SparseSet(np.array([3, 7])), SparseSet(np.array([2, 8])))


def test_coarsen_delta_domination_fuzz():
    # coarse-interval distance dominates each constituent fine interval
    rng = np.random.default_rng(0)
    for _ in range(20):
        xs = np.sort(rng.permutation(np.arange(1, 60))[:20])
        X = SparseSet(xs)
        keep = np.sort(rng.permutation(xs.size)[: xs.size // 2])
        Y = SparseSet(xs[keep]) if keep.size >= 2 else X
        alpha = TorusElement(rng.uniform(0, 2 * np.pi, 64))
        for j, ks in coarsen_map(Y, X).items():
            dj = delta_one(alpha, interval(Y, j))
            for k in ks:
                assert dj >= delta_one(alpha, interval(X, k)) - 1e-12


def test_fx_profile_constant():
    X = SparseSet(np.array([3, 6, 9, 12]))
    prof = fx_profile(constant_one(20), X)
    assert np.all(prof.d == 0.0)
    assert prof.in_fx(0.0, 0)


def test_fx_profile_matches_brute_force():
    rng = np.random.default_rng(1)
    alpha = TorusElement(rng.uniform(0, 2 * np.pi, 40))
    X = SparseSet(np.array([2, 7, 11, 20, 33]))
    prof = fx_profile(alpha, X, split=True)
    pts = X.enumeration
    for j in range(pts.size - 2):
        d = delta_one(alpha, range(int(pts[j]), int(pts[j + 2])))
        assert prof.d[j] == pytest.approx(d, abs=1e-12)
    # split/joint consistency (union bound instance)
    for j in range(pts.size - 2):
        assert prof.d_single[j] <= prof.d[j] + 1e-12
        assert prof.d_single[j + 1] <= prof.d[j] + 1e-12
        assert prof.d_endpoints[j] <= prof.d[j] + 1e-12
        assert (
            prof.d[j]
            <= prof.d_single[j] + prof.d_single[j + 1] + prof.d_endpoints[j] + 1e-12
        )


def test_fx_profile_horizon_guard():
    X = SparseSet(np.array([5, 50]))
    with pytest.raises(HorizonTooSmall) as exc:
        fx_profile(constant_one(10), X)
    assert exc.value.min_horizon == 50


def test_subset_profile_domination_fuzz():
    # sparser Y gives pointwise-larger membership obstructions: any alpha flat
    # along Y double-intervals is flat along X double-intervals they contain
    rng = np.random.default_rng(2)
    for _ in range(20):
        xs = np.sort(rng.permutation(np.arange(1, 80))[:30])
        X = SparseSet(xs)
        keep = np.unique(np.append(rng.permutation(xs.size)[: xs.size // 3], xs.size - 1))
        if keep.size < 2:
            continue
        Y = SparseSet(xs[keep])
        alpha = TorusElement(rng.uniform(0, 2 * np.pi, 128))
        px = fx_profile(alpha, X)
        py = fx_profile(alpha, Y)
        assert px.d.max() <= py.d.max() + 1e-12


def test_json():
    X = SparseSet(np.array([2, 5, 9]))
    assert SparseSet.loads(X.dumps()).elements.tolist() == [2, 5, 9]
    alpha = TorusElement(np.linspace(0, 1, 12))
    prof = fx_profile(alpha, X, split=True)
    doc = prof.to_json(eps=0.1, j0=1)
    assert doc["verdict"]["eps"] == 0.1 and "d_single" in doc
