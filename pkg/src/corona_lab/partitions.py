"""Sparse subsets of the naturals and the interval partitions they induce.

A sparse set X yields enumerators n(X, j) (the j-th element of {0} ∪ X) and
half-open intervals I(X, j) = [n(X, j), n(X, j+1)).  Profiles of a torus
element over consecutive double intervals are the finite-horizon membership
evidence for the subgroup of sequences that flatten out along X.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import HorizonTooSmall, PreconditionViolation, TruncationExceeded
from .torus import SLACK, TorusElement, circle_diameter


@dataclass(frozen=True)
class SparseSet:
    """Strictly increasing finite truncation of an infinite subset of ℕ."""

    elements: np.ndarray

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=np.int64)
        if el.ndim != 1 or el.size < 2:
            raise PreconditionViolation("need at least 2 elements")
        if el[0] < 0:
            raise PreconditionViolation("elements must be naturals")
        if np.any(np.diff(el) <= 0):
            raise PreconditionViolation("elements must be strictly increasing")
        el.setflags(write=False)
        object.__setattr__(self, "elements", el)

    @property
    def enumeration(self) -> np.ndarray:
        """Increasing enumeration of {0} ∪ X (0 prepended unless present)."""
        el = self.elements
        if el[0] == 0:
            return el
        return np.concatenate([[0], el])

    @property
    def num_points(self) -> int:
        return int(self.enumeration.size)

    @property
    def num_intervals(self) -> int:
        return self.num_points - 1

    @property
    def last(self) -> int:
        return int(self.elements[-1])

    def __len__(self):
        return int(self.elements.size)

    def __contains__(self, x):
        i = int(np.searchsorted(self.elements, int(x)))
        return i < len(self.elements) and int(self.elements[i]) == int(x)

    def to_json(self) -> dict:
        return {"elements": [int(x) for x in self.elements]}

    @classmethod
    def from_json(cls, doc: dict) -> "SparseSet":
        return cls(np.asarray(doc["elements"], dtype=np.int64))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "SparseSet":
        return cls.from_json(json.loads(text))


def n_of(X: SparseSet, j: int) -> int:
    """The j-th point of the enumeration of {0} ∪ X."""
    pts = X.enumeration
    if j < 0 or j >= pts.size:
        raise TruncationExceeded(f"j={j} beyond truncation ({pts.size} points)")
    return int(pts[j])


def interval(X: SparseSet, j: int) -> range:
    """The j-th interval [n(X,j), n(X,j+1)) of the induced partition."""
    pts = X.enumeration
    if j < 0 or j + 1 >= pts.size:
        raise TruncationExceeded(f"interval {j} beyond truncation")
    return range(int(pts[j]), int(pts[j + 1]))


@dataclass(frozen=True)
class IntervalPartition:
    """Read-only view of all intervals induced by a sparse set."""

    X: SparseSet

    def __len__(self):
        return self.X.num_intervals

    def __getitem__(self, j) -> range:
        return interval(self.X, j)

    def __iter__(self):
        for j in range(len(self)):
            yield interval(self.X, j)


def almost_subset(Y: SparseSet, X: SparseSet, cutoff: int | None = None) -> dict:
    """Almost-inclusion diagnostic at truncation.

    ``exceptions`` is Y∖X within the common horizon; ``holds`` means all
    exceptions lie below ``cutoff`` (default: half the common horizon), i.e.
    they are plausibly a finite head rather than a growing tail.
    """
    common = min(Y.last, X.last)
    if cutoff is None:
        cutoff = common // 2
    ys = Y.elements[Y.elements <= common]
    exceptions = sorted(set(int(y) for y in ys) - set(int(x) for x in X.elements))
    holds = all(e < cutoff for e in exceptions)
    return {"holds": holds, "exceptions": exceptions, "cutoff": int(cutoff)}


def coarsen_map(Y: SparseSet, X: SparseSet) -> dict:
    """For Y ⊆ X, write each Y-interval as a union of consecutive X-intervals.

    Returns a map j -> sorted list of X-interval indices k with
    I(Y, j) = ∪ I(X, k).
    """
    ypts = Y.enumeration
    xpts = X.enumeration
    if ypts[-1] > xpts[-1]:
        raise PreconditionViolation("Y extends beyond the truncation of X")
    xset = set(int(x) for x in xpts)
    missing = [int(y) for y in ypts if int(y) not in xset]
    if missing:
        raise PreconditionViolation(f"Y not contained in X: {missing[:5]}")
    pos = {int(x): k for k, x in enumerate(xpts)}
    out = {}
    for j in range(ypts.size - 1):
        lo, hi = pos[int(ypts[j])], pos[int(ypts[j + 1])]
        out[j] = list(range(lo, hi))
    return out


def _window_diameters(phases: np.ndarray, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Value-set diameter of exp(i*phases[s:e]) for each window, batched.

    Windows are grouped by length; short windows go through one padded
    pairwise computation per length, long ones through a direct loop.
    """
    values = np.exp(1j * phases)
    lengths = ends - starts
    out = np.empty(starts.size, dtype=float)
    for L in np.unique(lengths):
        sel = np.nonzero(lengths == L)[0]
        if L <= 1:
            out[sel] = 0.0
            continue
        if L <= 64:
            idx = starts[sel][:, None] + np.arange(L)[None, :]
            v = values[idx]
            out[sel] = np.abs(v[:, :, None] - v[:, None, :]).max(axis=(1, 2))
        else:
            for s in sel:
                out[s] = circle_diameter(values[starts[s] : ends[s]])
    return out


@dataclass(frozen=True)
class FxProfile:
    """Double-interval profile of a torus element against a sparse set.

    ``d[j]`` is the distance to constant-one over I(X,j) ∪ I(X,j+1).  The
    split form additionally records the single-interval and endpoint-pair
    distances.  The (eps, j0) verdict is a finite-horizon proxy only: it says
    nothing about the limit condition past the truncation.
    """

    d: np.ndarray
    d_single: np.ndarray | None = None
    d_endpoints: np.ndarray | None = None

    def in_fx(self, eps: float, j0: int) -> bool:
        return bool(np.all(self.d[j0:] <= eps))

    def to_json(self, eps: float | None = None, j0: int | None = None) -> dict:
        doc = {"d": [float(x) for x in self.d]}
        if self.d_single is not None:
            doc["d_single"] = [float(x) for x in self.d_single]
            doc["d_endpoints"] = [float(x) for x in self.d_endpoints]
        if eps is not None:
            doc["verdict"] = {
                "eps": eps,
                "j0": j0,
                "in_fx": self.in_fx(eps, j0),
            }
        return doc


def fx_profile(alpha: TorusElement, X: SparseSet, split: bool = False) -> FxProfile:
    """All double-interval distances of ``alpha`` to one, computable at horizon."""
    pts = X.enumeration
    if int(pts[-1]) > alpha.horizon:
        raise HorizonTooSmall(
            f"sparse set ends at {int(pts[-1])} past horizon {alpha.horizon}",
            min_horizon=int(pts[-1]),
        )
    phases = np.asarray(alpha.phases)
    starts = pts[:-2].astype(np.int64)
    ends = pts[2:].astype(np.int64)
    d = _window_diameters(phases, starts, ends)
    if not split:
        return FxProfile(d=d)
    d_single = _window_diameters(phases, pts[:-1].astype(np.int64), pts[1:].astype(np.int64))
    d_end = np.abs(
        np.exp(1j * phases[pts[:-2]]) - np.exp(1j * phases[pts[1:-1]])
    )
    return FxProfile(d=d, d_single=d_single, d_endpoints=d_end)
