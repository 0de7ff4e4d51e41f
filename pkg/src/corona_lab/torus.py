"""Pseudometric calculus on finite-horizon unimodular sequences.

A sequence is stored as an array of phases, so every represented value has
modulus one by construction.  The distance between two sequences over a finite
index set is the largest deviation of their relative phases over pairs of
indices; against the constant-one sequence it is the diameter of the value set
on those indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import IndexOutOfRange, PreconditionViolation

TWO_PI = 2.0 * np.pi

#: default slack for floating-point inequality checks
SLACK = 1e-12

TAIL_CONSTANT = "constant"
TAIL_NONE = "none"


@dataclass(frozen=True)
class TorusElement:
    """Finite-horizon sequence of points on the unit circle, stored as phases.

    ``tail`` controls queries past the horizon: ``"constant"`` repeats the
    last phase, ``"none"`` raises :class:`IndexOutOfRange`.
    """

    phases: np.ndarray
    tail: str = TAIL_CONSTANT

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float)
        if ph.ndim != 1 or ph.size < 1:
            raise PreconditionViolation("phases must be a 1-D array of length >= 1")
        if self.tail not in (TAIL_CONSTANT, TAIL_NONE):
            raise PreconditionViolation(f"unknown tail convention {self.tail!r}")
        ph = np.mod(ph, TWO_PI)
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @property
    def horizon(self) -> int:
        return int(self.phases.size)

    def phase(self, i: int) -> float:
        if i < 0:
            raise IndexOutOfRange(f"negative index {i}")
        if i >= self.horizon:
            if self.tail == TAIL_CONSTANT:
                return float(self.phases[-1])
            raise IndexOutOfRange(f"index {i} beyond horizon {self.horizon}")
        return float(self.phases[i])

    def phase_at(self, indices) -> np.ndarray:
        """Phases at the given indices, honoring the tail convention."""
        idx = np.asarray(indices, dtype=int)
        if idx.size and idx.min() < 0:
            raise IndexOutOfRange("negative index")
        if idx.size and idx.max() >= self.horizon:
            if self.tail != TAIL_CONSTANT:
                raise IndexOutOfRange(
                    f"index {int(idx.max())} beyond horizon {self.horizon}"
                )
            idx = np.minimum(idx, self.horizon - 1)
        return self.phases[idx]

    def value(self, i: int) -> complex:
        return complex(np.exp(1j * self.phase(i)))

    def values(self, indices) -> np.ndarray:
        return np.exp(1j * self.phase_at(indices))

    # --- group structure (pointwise multiplication on the circle) ---

    def mul(self, other: "TorusElement") -> "TorusElement":
        h = max(self.horizon, other.horizon)
        a = self.phase_at(np.arange(h))
        b = other.phase_at(np.arange(h))
        return TorusElement(a + b, tail=self.tail)

    def inverse(self) -> "TorusElement":
        return TorusElement(-self.phases, tail=self.tail)

    def scaled(self, c: float) -> "TorusElement":
        """Multiply by the unimodular constant with phase ``c``."""
        return TorusElement(self.phases + c, tail=self.tail)

    # --- serialization ---

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "phases": [float(p) for p in self.phases],
            "tail": self.tail,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TorusElement":
        return cls(np.asarray(doc["phases"], dtype=float), tail=doc["tail"])

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "TorusElement":
        return cls.from_json(json.loads(text))


def constant_one(horizon: int) -> TorusElement:
    """The zero-phase sequence of the given horizon."""
    return TorusElement(np.zeros(horizon))


@dataclass(frozen=True)
class IndexSet:
    """Nonempty finite set of naturals, kept sorted and duplicate-free."""

    indices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if not idx:
            raise PreconditionViolation("index set must be nonempty")
        if any(i < 0 for i in idx):
            raise PreconditionViolation("indices must be naturals")
        if len(set(idx)) != len(idx):
            raise PreconditionViolation("duplicate indices forbidden")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return int(i) in self.indices

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(tuple(set(self.indices) | set(other.indices)))


def _as_indices(I) -> np.ndarray:
    if isinstance(I, IndexSet):
        return np.asarray(I.indices, dtype=int)
    return np.asarray(sorted(set(int(i) for i in I)), dtype=int)


def delta_pair(alpha: TorusElement, beta: TorusElement, i: int, j: int) -> float:
    """|alpha(i) conj(alpha(j)) - beta(i) conj(beta(j))|."""
    a = np.exp(1j * (alpha.phase(i) - alpha.phase(j)))
    b = np.exp(1j * (beta.phase(i) - beta.phase(j)))
    return float(abs(a - b))


def delta_set(alpha: TorusElement, beta: TorusElement, I) -> float:
    """Max of :func:`delta_pair` over all pairs drawn from ``I``."""
    idx = _as_indices(I)
    pa = alpha.phase_at(idx)
    pb = beta.phase_at(idx)
    ra = np.exp(1j * (pa[:, None] - pa[None, :]))
    rb = np.exp(1j * (pb[:, None] - pb[None, :]))
    return float(np.abs(ra - rb).max())


def circle_diameter(values: np.ndarray) -> float:
    """Diameter of a finite subset of the unit circle, by brute force."""
    v = np.asarray(values)
    return float(np.abs(v[:, None] - v[None, :]).max())


def delta_one(alpha: TorusElement, I) -> float:
    """Distance to the constant-one sequence; the value-set diameter on ``I``."""
    return circle_diameter(alpha.values(_as_indices(I)))


def lij_bound_check(
    alpha: TorusElement,
    beta: TorusElement,
    I,
    J,
    i0: int,
    j0: int,
    slack: float = SLACK,
) -> dict:
    """Check the union bound relating distances over I, J, and I ∪ J.

    Returns both sides and a ``holds`` verdict; ``holds`` is expected to be
    true always, up to the floating slack.
    """
    Iset = I if isinstance(I, IndexSet) else IndexSet(tuple(I))
    Jset = J if isinstance(J, IndexSet) else IndexSet(tuple(J))
    if i0 not in Iset:
        raise PreconditionViolation(f"i0={i0} not in I")
    if j0 not in Jset:
        raise PreconditionViolation(f"j0={j0} not in J")
    lhs = delta_set(alpha, beta, Iset.union(Jset))
    rhs = (
        delta_set(alpha, beta, Iset)
        + delta_set(alpha, beta, Jset)
        + delta_pair(alpha, beta, i0, j0)
    )
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs + slack}


def fuzz_lij(n: int, seed: int = 0, horizon: int = 16, set_size: int = 3) -> int:
    """Vectorized fuzz of the union bound; returns the number of violations.

    Duplicated indices in the concatenation of I and J do not change maxima,
    so the union distance is computed over the raw concatenation.
    """
    rng = np.random.default_rng(seed)
    pa = rng.uniform(0.0, TWO_PI, size=(n, horizon))
    pb = rng.uniform(0.0, TWO_PI, size=(n, horizon))
    I = np.stack(
        [rng.permutation(horizon)[:set_size] for _ in range(n)]
    )
    J = np.stack(
        [rng.permutation(horizon)[:set_size] for _ in range(n)]
    )
    rows = np.arange(n)[:, None]

    def pair_max(idx):
        # max over index pairs from idx (per row) of the pair distance
        a = np.exp(1j * pa[rows, idx])
        b = np.exp(1j * pb[rows, idx])
        ra = a[:, :, None] * a.conj()[:, None, :]
        rb = b[:, :, None] * b.conj()[:, None, :]
        return np.abs(ra - rb).max(axis=(1, 2))

    lhs = pair_max(np.concatenate([I, J], axis=1))
    d_pair = np.abs(
        np.exp(1j * (pa[rows[:, 0], I[:, 0]] - pa[rows[:, 0], J[:, 0]]))
        - np.exp(1j * (pb[rows[:, 0], I[:, 0]] - pb[rows[:, 0], J[:, 0]]))
    )
    rhs = pair_max(I) + pair_max(J) + d_pair
    return int(np.sum(lhs > rhs + SLACK))
