"""Positive approximate units and the witness machinery built on them.

The unit is a finite sequence of positive contractions r_i whose partial sums
p_n satisfy p_{n+1} p_n = p_n; consequently r_i r_j = 0 once |i - j| >= 2.
Two realizations are provided: diagonal units (sampled nonnegative functions
on a grid, including the piecewise-linear tent model) and dense positive
semidefinite matrix units.  In both cases the ambient algebra is the full
matrix algebra on the underlying coordinates, optionally restricted to a
direct sum of corners to model the degenerate case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstructionError,
    PreconditionViolation,
    WitnessNotFound,
)
from .operators import BlockStructure, op_norm
from .torus import TorusElement, delta_one

PLATEAU_TOL = 1e-12


@dataclass(frozen=True)
class PositiveUnit:
    """Sequence of positive contractions with interlocking partial sums.

    ``rs`` has shape (count, D) for diagonal units and (count, D, D) for
    matrix units.  ``ambient`` optionally lists coordinate groups; when set,
    the ambient algebra is the direct sum of the corresponding corners.
    """

    rs: np.ndarray
    diagonal: bool = True
    ambient: tuple | None = None

    def __post_init__(self):
        rs = np.asarray(self.rs)
        if self.diagonal and rs.ndim != 2:
            raise PreconditionViolation("diagonal unit needs a (count, D) array")
        if not self.diagonal and rs.ndim != 3:
            raise PreconditionViolation("matrix unit needs a (count, D, D) array")
        rs.setflags(write=False)
        object.__setattr__(self, "rs", rs)

    @property
    def count(self) -> int:
        return int(self.rs.shape[0])

    @property
    def dim(self) -> int:
        return int(self.rs.shape[1])

    def r(self, i: int) -> np.ndarray:
        """r_i as a dense matrix."""
        if self.diagonal:
            return np.diag(self.rs[i]).astype(complex)
        return np.asarray(self.rs[i], dtype=complex)

    def spectrum(self, i: int) -> np.ndarray:
        if self.diagonal:
            return np.asarray(self.rs[i], dtype=float)
        return np.linalg.eigvalsh(self.rs[i])

    def p(self, n: int) -> np.ndarray:
        """Partial sum p_n = r_0 + ... + r_{n-1} in the unit's own shape."""
        return self.rs[:n].sum(axis=0)

    def sandwich(self, i: int, a: np.ndarray, j: int, k: int = 1) -> np.ndarray:
        """r_i^k a r_j^k."""
        if self.diagonal:
            return (self.rs[i] ** k)[:, None] * a * (self.rs[j] ** k)[None, :]
        ri = np.linalg.matrix_power(self.rs[i], k)
        rj = np.linalg.matrix_power(self.rs[j], k)
        return ri @ a @ rj

    def peak_vector(self, i: int):
        """Unit vector (nearly) fixed by r_i, with its r_i-eigenvalue."""
        if self.diagonal:
            p = int(np.argmax(self.rs[i]))
            v = np.zeros(self.dim, dtype=complex)
            v[p] = 1.0
            return v, float(self.rs[i][p])
        w, vecs = np.linalg.eigh(self.rs[i])
        return vecs[:, -1].astype(complex), float(w[-1])

    def check_invariants(self, tol: float = 1e-12) -> dict:
        devs = {"order": 0.0, "interlock": 0.0, "far_products": 0.0}
        prev = None
        for n in range(self.count + 1):
            pn = self.p(n)
            spec = pn if self.diagonal else np.linalg.eigvalsh(pn)
            devs["order"] = max(
                devs["order"], float(max(-spec.min(), spec.max() - 1.0, 0.0))
            )
            if prev is not None:
                d = pn * prev - prev if self.diagonal else pn @ prev - prev
                devs["interlock"] = max(devs["interlock"], float(np.abs(d).max()))
            prev = pn
        for i in range(self.count):
            for j in range(i + 2, self.count):
                d = (
                    self.rs[i] * self.rs[j]
                    if self.diagonal
                    else self.rs[i] @ self.rs[j]
                )
                devs["far_products"] = max(devs["far_products"], float(np.abs(d).max()))
        devs["ok"] = all(v <= tol for k, v in devs.items() if k != "ok")
        return devs


@dataclass(frozen=True)
class TentModel:
    """Piecewise-linear tent unit on a uniform grid over [0, 2*count].

    p_n equals 1 on [0, 2n-1], ramps linearly to 0 on [2n-1, 2n]; each tent
    r_i = p_{i+1} - p_i then ramps up exactly where r_{i-1} ramps down, so the
    interlocking identities hold pointwise with no tolerance.
    """

    grid: np.ndarray
    unit: PositiveUnit

    @property
    def breakpoints(self) -> list:
        return [float(2 * n - 1) for n in range(1, self.unit.count + 1)]

    def to_json(self) -> dict:
        return {
            "grid_start": float(self.grid[0]),
            "grid_step": float(self.grid[1] - self.grid[0]),
            "grid_points": int(self.grid.size),
            "count": self.unit.count,
            "breakpoints": self.breakpoints,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _p_profile(x: np.ndarray, n: int) -> np.ndarray:
    return np.clip(2.0 * n - x, 0.0, 1.0)


def build_tent_unit(count: int, grid_step: float) -> TentModel:
    if count < 2:
        raise PreconditionViolation("need at least 2 tents")
    if grid_step <= 0:
        raise PreconditionViolation("grid_step must be positive")
    T = 2.0 * count
    npts = int(np.floor(T / grid_step)) + 1
    x = np.arange(npts) * grid_step
    ps = np.stack([_p_profile(x, n) for n in range(count + 1)])
    rs = np.diff(ps, axis=0)
    return TentModel(grid=x, unit=PositiveUnit(rs=rs, diagonal=True))


def projection_unit(blocks: BlockStructure) -> PositiveUnit:
    """Mutually orthogonal coordinate-block indicator projections."""
    rs = np.zeros((blocks.num_blocks, blocks.dim))
    off = blocks.offsets
    for i in range(blocks.num_blocks):
        rs[i, off[i] : off[i + 1]] = 1.0
    return PositiveUnit(rs=rs, diagonal=True)


def degenerate_sum_unit(blocks: BlockStructure) -> PositiveUnit:
    """Projection unit whose ambient algebra is the direct sum of its own
    corners, so every off-diagonal corner of the ambient algebra vanishes."""
    base = projection_unit(blocks)
    off = blocks.offsets
    ambient = tuple(
        tuple(range(off[i], off[i + 1])) for i in range(blocks.num_blocks)
    )
    return PositiveUnit(rs=base.rs, diagonal=True, ambient=ambient)


def power_gap(r, k: int, continuous_range: tuple | None = None) -> float:
    """Norm of r^{k+1} - r^k for a positive contraction r.

    Equals the max of t^k (1 - t) over the spectrum.  ``continuous_range``
    declares that the spectrum fills an interval (the tent model's ramps do),
    in which case the max is taken analytically over that interval.
    """
    if k < 0:
        raise PreconditionViolation("k must be a natural number")
    if continuous_range is not None:
        lo, hi = float(continuous_range[0]), float(continuous_range[1])
        if lo < -PLATEAU_TOL or hi > 1.0 + PLATEAU_TOL:
            raise PreconditionViolation("range outside [0, 1]")
        cands = [lo, hi]
        if k > 0:
            t_star = k / (k + 1.0)
            if lo <= t_star <= hi:
                cands.append(t_star)
        return max(t**k * (1.0 - t) for t in cands)
    r = np.asarray(r)
    spec = r.astype(float) if r.ndim == 1 else np.linalg.eigvalsh(r)
    if spec.min() < -1e-9 or spec.max() > 1.0 + 1e-9:
        raise PreconditionViolation("r is not a positive contraction")
    spec = np.clip(spec, 0.0, 1.0)
    return float((spec**k * (1.0 - spec)).max())


def tent_power_gap(model: TentModel, i: int, k: int) -> float:
    """Gap for tent i using its full continuous range [0, 1]."""
    return power_gap(model.unit.rs[i], k, continuous_range=(0.0, 1.0))


def _rank_one(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.outer(x, y.conj())


def epsilon_witness(unit: PositiveUnit, i: int, j: int, eps: float) -> dict:
    """Unit-norm a with a large (i, j)-corner that the corner barely moves.

    Recipe: pick k with both power gaps below eps/4, start from a rank-one
    a_0 built on (near-)fixed vectors of r_i and r_j, then compress by r_i^k
    and r_j^k and renormalize.  All three certified norms are recomputed from
    the result; failure to meet them reports the model as violating the
    hypothesis rather than returning an uncertified witness.
    """
    if not (0 <= i < unit.count and 0 <= j < unit.count):
        raise PreconditionViolation("tent indices out of range")
    if eps <= 0:
        raise PreconditionViolation("eps must be positive")
    delta = min(eps, 1.0) / 4.0
    k = None
    for cand in range(1, 65):
        gi = power_gap(unit.spectrum(i), cand)
        gj = power_gap(unit.spectrum(j), cand)
        if max(gi, gj) <= delta:
            k = cand
            break
    if k is None:
        raise WitnessNotFound("power gaps do not fall below eps/4 for k <= 64")
    vi, li = unit.peak_vector(i)
    vj, lj = unit.peak_vector(j)
    if (li * lj) ** (k + 1) < 1.0 - delta:
        raise WitnessNotFound(
            f"no corner of norm >= {1 - delta} at pair ({i}, {j})"
        )
    a0 = _rank_one(vi, vj)
    a = unit.sandwich(i, a0, j, k)
    na = op_norm(a)
    if na == 0.0:
        raise WitnessNotFound(f"compressed witness vanished at pair ({i}, {j})")
    a = a / na
    corner = unit.sandwich(i, a, j, 1)
    norms = {
        "k": k,
        "norm_a": op_norm(a),
        "corner": op_norm(corner),
        "defect": op_norm(corner - a),
    }
    ok = (
        abs(norms["norm_a"] - 1.0) <= 1e-9
        and norms["corner"] >= 1.0 - eps - 1e-9
        and norms["defect"] < eps
    )
    if not ok:
        raise WitnessNotFound(f"certification failed at pair ({i}, {j}): {norms}")
    return {"a": a, "norms": norms}


def quasi_unitary_residual(alpha: TorusElement, unit: PositiveUnit, N: int) -> dict:
    """Tail norm of sum_{i > N} 2 [Re(alpha(i) conj(alpha(i+1))) - 1] r_i r_{i+1}
    against the bound 3 eps_N; the overlap supports meet at most three terms."""
    idx = np.arange(unit.count - 1)
    vals = alpha.values(idx) * alpha.values(idx + 1).conj()
    c = 2.0 * (np.real(vals) - 1.0)
    sel = idx > N
    if not np.any(sel):
        return {"tail_norm": 0.0, "eps_N": 0.0, "bound": 0.0}
    eps_N = float(np.abs(c[sel]).max())
    if unit.diagonal:
        s = np.zeros(unit.dim)
        for i in idx[sel]:
            s += c[i] * unit.rs[i] * unit.rs[i + 1]
        tail = float(np.abs(s).max())
    else:
        s = np.zeros((unit.dim, unit.dim))
        for i in idx[sel]:
            s += c[i] * (unit.rs[i] @ unit.rs[i + 1])
        tail = op_norm(s)
    return {"tail_norm": tail, "eps_N": eps_N, "bound": 3.0 * eps_N}


def _plateau_coords(unit: PositiveUnit, i: int) -> np.ndarray:
    if not unit.diagonal:
        raise PreconditionViolation("plateau probing needs a diagonal unit")
    return np.nonzero(unit.rs[i] >= 1.0 - PLATEAU_TOL)[0]


def weak_sandwich(
    alpha: TorusElement,
    unit: PositiveUnit,
    I,
    eps_probe: float = 0.1,
    samples: int = 10,
    seed: int = 0,
) -> dict:
    """Sandwich estimate for conjugation by u = sum alpha(i) r_i, probed on
    the corner where the selected units act as the identity."""
    idx = sorted(set(int(x) for x in I))
    if any(x < 0 or x >= unit.count for x in idx):
        raise PreconditionViolation("index set outside the unit range")
    coords = []
    owner = []
    for x in idx:
        pc = _plateau_coords(unit, x)
        if pc.size == 0:
            raise PreconditionViolation(f"unit {x} has no plateau to probe")
        coords.append(pc)
        owner.append(np.full(pc.size, x))
    coords = np.concatenate(coords)
    owner = np.concatenate(owner)
    d = alpha.values(owner)
    coeff = d[:, None] * d.conj()[None, :] - 1.0
    delta = delta_one(alpha, idx)
    # probe with the epsilon witnesses between peak coordinates
    achieved = 0.0
    for a_i in idx:
        for a_j in idx:
            w = epsilon_witness(unit, a_i, a_j, eps_probe)["a"]
            sub = w[np.ix_(coords, coords)]
            moved = op_norm(coeff * sub)
            achieved = max(achieved, moved)
    rng = np.random.default_rng(seed)
    n = coords.size
    sampled = 0.0
    for _ in range(samples):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a /= op_norm(a)
        sampled = max(sampled, op_norm(coeff * a))
    return {
        "delta": delta,
        "achieved": achieved,
        "sampled_max": sampled,
        "lower_slack": (len(idx) + 2) * eps_probe,
    }


def hyp_check(
    unit: PositiveUnit,
    mode: str,
    eps: float = 0.1,
    k_max: int = 8,
    pair_cap: int = 6,
) -> dict:
    """Verdict on the unit's structural hypothesis.

    ``"HypA"``: every r_i is a projection and every ambient corner
    r_i A r_j is nonzero.  ``"HypWeak"``: for every pair up to the cap and
    every power up to k_max, some ambient element has a compressed corner of
    norm >= 1 - eps.
    """
    if mode not in ("HypA", "HypWeak"):
        raise PreconditionViolation(f"unknown mode {mode!r}")
    cap = min(unit.count, pair_cap)
    failures = []
    if mode == "HypA":
        for i in range(unit.count):
            r = unit.rs[i]
            d = r * r - r if unit.diagonal else r @ r - r
            if np.abs(d).max() > 1e-9:
                failures.append({"kind": "not_projection", "i": i})
        for i in range(cap):
            for j in range(cap):
                if _corner_sup(unit, i, j, 1) <= PLATEAU_TOL:
                    failures.append({"kind": "zero_corner", "i": i, "j": j})
    else:
        for i in range(cap):
            for j in range(cap):
                for k in range(1, k_max + 1):
                    if _corner_sup(unit, i, j, k) < 1.0 - eps:
                        failures.append({"kind": "small_corner", "i": i, "j": j, "k": k})
                        break
    return {"mode": mode, "holds": not failures, "failures": failures, "k_max": k_max}


def _corner_sup(unit: PositiveUnit, i: int, j: int, k: int) -> float:
    """sup over unit-norm ambient a of the norm of r_i^k a r_j^k."""
    if unit.diagonal:
        ri = unit.rs[i] ** k
        rj = unit.rs[j] ** k
        if unit.ambient is None:
            return float(ri.max() * rj.max())
        best = 0.0
        for block in unit.ambient:
            b = np.asarray(block, dtype=int)
            best = max(best, float(ri[b].max() * rj[b].max()))
        return best
    ri = np.linalg.matrix_power(unit.rs[i], k)
    rj = np.linalg.matrix_power(unit.rs[j], k)
    if unit.ambient is None:
        return op_norm(ri) * op_norm(rj)
    best = 0.0
    for block in unit.ambient:
        b = np.ix_(block, block)
        best = max(best, op_norm(ri[b]) * op_norm(rj[b]))
    return best


def tensor_unit(unitA: PositiveUnit, qs) -> PositiveUnit:
    """Kronecker unit s_i = p_{i+1} (x) q_{i+1} - p_i (x) q_i.

    ``qs`` is a list of count+1 matrices with q_0 = 0 allowed implicitly by
    passing count entries q_1..q_count; they must be increasing interlocking
    contractions for the output to satisfy the unit invariants.
    """
    qs = [np.asarray(q, dtype=complex) for q in qs]
    if len(qs) != unitA.count:
        raise PreconditionViolation("need one q per unit element (q_1..q_count)")
    dq = qs[0].shape[0]
    for q in qs:
        if q.shape != (dq, dq):
            raise PreconditionViolation("q sizes must agree")
    for a, b in zip(qs, qs[1:]):
        spec = np.linalg.eigvalsh(b - a)
        if spec.min() < -1e-12:
            raise PreconditionViolation("q sequence must be increasing")
    top = np.linalg.eigvalsh(qs[-1])
    if top.max() > 1.0 + 1e-12 or np.linalg.eigvalsh(qs[0]).min() < -1e-12:
        raise PreconditionViolation("q sequence must stay within [0, 1]")
    ss = []
    prev = np.zeros((unitA.dim * dq, unitA.dim * dq), dtype=complex)
    for n in range(1, unitA.count + 1):
        pn = unitA.p(n)
        pn_mat = np.diag(pn).astype(complex) if unitA.diagonal else pn
        cur = np.kron(pn_mat, qs[n - 1])
        ss.append(cur - prev)
        prev = cur
    out = PositiveUnit(rs=np.stack(ss), diagonal=False)
    inv = out.check_invariants(tol=1e-9)
    if not inv["ok"]:
        raise ConstructionError(f"tensor unit violates invariants: {inv}")
    return out


def slice_identity_check(
    unitA: PositiveUnit,
    s_unit: PositiveUnit,
    v: np.ndarray,
    a: np.ndarray,
    i: int,
    j: int,
    k: int = 1,
) -> dict:
    """Contract the second tensor factor with the state given by v and compare
    s_i^k (a (x) 1) s_j^k against r_i^k a r_j^k."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    dq = v.size
    da = unitA.dim
    eye_q = np.eye(dq, dtype=complex)
    si = np.linalg.matrix_power(s_unit.rs[i], k)
    sj = np.linalg.matrix_power(s_unit.rs[j], k)
    big = si @ np.kron(np.asarray(a, dtype=complex), eye_q) @ sj
    W = np.kron(np.eye(da, dtype=complex), v[:, None])
    sliced = W.conj().T @ big @ W
    expect = unitA.sandwich(i, np.asarray(a, dtype=complex), j, k)
    dev = float(np.abs(sliced - expect).max())
    return {"deviation": dev, "holds": dev <= 1e-12 * max(1.0, float(np.abs(a).max()))}
