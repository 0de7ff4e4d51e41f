"""Finite-depth coherent binary trees of torus sequences.

A chain of nested sparse sets provides, at each level transition, scheduled
blocks coarse enough to contain many finer intervals.  Successor witnesses
rotate slowly across those blocks: each one flattens out against the finer
level while swinging through antipodal values inside every scheduled block of
the coarser level.  The tree multiplies witnesses along branches; every
ancestor pair carries a coherence certificate, every sibling pair a
divergence certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstructionError,
    HorizonTooSmall,
    InsufficientBlock,
    PreconditionViolation,
)
from .partitions import SparseSet, fx_profile, n_of
from .torus import TorusElement, constant_one

DIVERGENCE_TOL = 1e-9


@dataclass(frozen=True)
class ScheduleEntry:
    """One scheduled block: the coarse interval ``block`` holds >= m+1 fine
    intervals, i.e. m interior boundaries for the witness to jump at."""

    m: int
    block: int

    def jump_size(self) -> float:
        return 2.0 * float(np.sin(np.pi / (2.0 * self.m)))


@dataclass(frozen=True)
class Chain:
    """Nested levels X_0 ⊇ X_1 ⊇ ... with per-transition block schedules."""

    levels: tuple
    schedules: tuple  # schedules[t] is a tuple of ScheduleEntry for X_t -> X_{t+1}

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def horizon(self) -> int:
        return self.levels[0].last + 1

    def check_invariants(self) -> None:
        for t in range(self.depth):
            lo, hi = self.levels[t], self.levels[t + 1]
            lo_set = set(int(x) for x in lo.elements)
            if not set(int(x) for x in hi.elements) <= lo_set:
                raise ConstructionError(f"level {t + 1} not contained in level {t}")
            if len(hi) >= len(lo):
                raise ConstructionError(f"level {t + 1} not strictly sparser")
            for entry in self.schedules[t]:
                a, b = n_of(hi, entry.block), n_of(hi, entry.block + 1)
                interior = np.count_nonzero(
                    (lo.enumeration > a) & (lo.enumeration < b)
                )
                if interior + 1 < entry.m:
                    raise ConstructionError(
                        f"block {entry.block} at level {t} holds "
                        f"{interior + 1} intervals < m={entry.m}"
                    )

    def min_jump_m(self) -> int:
        return min(e.m for sched in self.schedules for e in sched)


def _try_build_chain(depth, horizon, m_schedule):
    """One construction attempt; returns a Chain or raises HorizonTooSmall
    without a horizon estimate."""
    if horizon < 4:
        raise HorizonTooSmall("horizon too small for any chain")
    x0 = SparseSet(np.arange(1, horizon, dtype=np.int64))
    levels = [x0]
    schedules = []
    region_pos = 1
    for _t in range(depth):
        pts = levels[-1].enumeration
        bounds = []
        cur = 0
        # pair-merge up to the start of this transition's scheduled region
        a = int(np.searchsorted(pts, region_pos))
        if a >= pts.size:
            raise HorizonTooSmall("no room before scheduled region")
        while cur < a:
            nxt = min(cur + 2, a)
            bounds.append(int(pts[nxt]))
            cur = nxt
        sched = []
        for m in m_schedule:
            if m < 1:
                raise PreconditionViolation("schedule entries must be >= 1")
            nxt = cur + m + 1
            if nxt >= pts.size:
                raise HorizonTooSmall("scheduled region does not fit")
            block_index = len(bounds)
            bounds.append(int(pts[nxt]))
            sched.append(ScheduleEntry(m=int(m), block=block_index))
            cur = nxt
        region_pos = int(pts[cur]) + 1
        # pair-merge the remainder, always keeping the final point
        last = pts.size - 1
        while cur < last:
            nxt = min(cur + 2, last)
            bounds.append(int(pts[nxt]))
            cur = nxt
        if len(bounds) < 2:
            raise HorizonTooSmall("too few intervals after merging")
        levels.append(SparseSet(np.asarray(bounds, dtype=np.int64)))
        schedules.append(tuple(sched))
    chain = Chain(levels=tuple(levels), schedules=tuple(schedules))
    chain.check_invariants()
    return chain


def min_sufficient_horizon(depth: int, m_schedule) -> int:
    """Smallest horizon for which the chain construction succeeds."""
    lo, hi = 4, 8
    while True:
        try:
            _try_build_chain(depth, hi, m_schedule)
            break
        except HorizonTooSmall:
            lo, hi = hi, hi * 2
            if hi > 1 << 30:
                raise
    while lo < hi:
        mid = (lo + hi) // 2
        try:
            _try_build_chain(depth, mid, m_schedule)
            hi = mid
        except HorizonTooSmall:
            lo = mid + 1
    return hi


def generate_chain(depth: int, horizon: int, m_schedule) -> Chain:
    """Build a nested chain with the same block schedule at every transition.

    The scheduled regions of distinct transitions occupy disjoint stretches of
    the horizon, so witnesses of distinct levels never jump at the same point.
    """
    if depth < 0:
        raise PreconditionViolation("depth must be >= 0")
    try:
        return _try_build_chain(depth, horizon, m_schedule)
    except HorizonTooSmall:
        need = min_sufficient_horizon(depth, m_schedule)
        raise HorizonTooSmall(
            f"horizon {horizon} too small; need >= {need}", min_horizon=need
        )


def successor_witness(
    X_lo: SparseSet,
    X_hi: SparseSet,
    schedule,
    z_variant: bool = False,
    horizon: int | None = None,
) -> TorusElement:
    """Element constant on the fine intervals, rotating by pi/m across each
    scheduled coarse block; constant elsewhere.

    With ``z_variant`` the schedule must have nondecreasing m, so consecutive
    jump sizes shrink along the construction.
    """
    if horizon is None:
        horizon = X_lo.last + 1
    if z_variant:
        ms = [e.m for e in schedule]
        if any(b < a for a, b in zip(ms, ms[1:])):
            raise PreconditionViolation(
                "z-variant requires a nondecreasing jump schedule"
            )
    jumps = np.zeros(horizon)
    lo_pts = X_lo.enumeration
    for entry in schedule:
        a = n_of(X_hi, entry.block)
        b = n_of(X_hi, entry.block + 1)
        interior = lo_pts[(lo_pts > a) & (lo_pts < b)]
        if interior.size < entry.m:
            raise InsufficientBlock(
                f"block {entry.block} has {interior.size} interior boundaries, "
                f"need {entry.m}"
            )
        jumps[interior] += np.pi / entry.m
    return TorusElement(np.cumsum(jumps))


@dataclass(frozen=True)
class LimitSparsification:
    """Output of :func:`sparsify_limit`: the sparse set plus the exhaustive
    per-block verification of both closeness conditions."""

    x_inf: SparseSet
    checks: tuple
    max_ratio: float  # largest observed (distance * k); must be < 1


def _pair_profiles(alpha_k, alpha_n, X_n):
    diff = alpha_k.mul(alpha_n.inverse())
    return fx_profile(diff, X_n, split=True)


def sparsify_limit(
    alphas,
    Xs,
    horizon: int,
    eps: float = 0.1,
    j0: int = 10,
) -> LimitSparsification:
    """Pick block boundaries so sparse that inside block k, every fine
    interval of every earlier level is (1/k)-close between the k-th and the
    earlier element, in both the interval and endpoint-pair senses.

    Boundaries are chosen greedily left to right; both conditions are then
    re-verified exhaustively and attached.
    """
    K = len(alphas)
    if K != len(Xs) or K == 0:
        raise PreconditionViolation("need matching nonempty alphas and levels")
    # coherence precondition between all pairs
    for n in range(K):
        for k in range(n + 1, K):
            prof = fx_profile(alphas[k].mul(alphas[n].inverse()), Xs[n])
            if not prof.in_fx(eps, j0):
                raise PreconditionViolation(
                    f"inputs {n} and {k} not coherent at eps={eps}, j0={j0}"
                )
    last_pts = Xs[-1].elements
    if K == 1:
        x_inf = Xs[0]
        return LimitSparsification(x_inf=x_inf, checks=(), max_ratio=0.0)

    profiles = {}
    for k in range(K):
        for n in range(k + 1):
            profiles[(n, k)] = _pair_profiles(alphas[k], alphas[n], Xs[n])

    bounds = []
    prev = 0
    for k in range(1, K):
        th = 1.0 / k
        last_bad = 0
        for n in range(k + 1):
            prof = profiles[(n, k)]
            pts = Xs[n].enumeration
            bad = np.nonzero(
                (prof.d_single[:-1] >= th) | (prof.d_endpoints >= th)
            )[0]
            if bad.size:
                last_bad = max(last_bad, int(pts[bad.max() + 1]))
        cands = last_pts[(last_pts > prev) & (last_pts > last_bad)]
        if cands.size == 0:
            raise HorizonTooSmall(
                f"no boundary candidate for block {k} within horizon"
            )
        prev = int(cands[0])
        bounds.append(prev)
    final = int(last_pts[-1])
    if final <= prev:
        raise HorizonTooSmall("horizon exhausted before the final block")
    bounds.append(final)
    x_inf = SparseSet(np.asarray(bounds, dtype=np.int64))

    # exhaustive recheck of both conditions
    checks = []
    worst = 0.0
    inf_pts = x_inf.enumeration
    for k in range(1, K):
        lo, hi = int(inf_pts[k]), int(inf_pts[k + 1])
        th = 1.0 / k
        for n in range(k + 1):
            prof = profiles[(n, k)]
            pts = Xs[n].enumeration
            inside = np.nonzero((pts[:-2] >= lo) & (pts[1:-1] <= hi))[0]
            if inside.size == 0:
                continue
            worst_d = float(prof.d_single[inside].max())
            worst_e = float(prof.d_endpoints[inside].max())
            checks.append(
                {"k": k, "n": n, "max_interval": worst_d, "max_endpoint": worst_e}
            )
            worst = max(worst, worst_d * k, worst_e * k)
            if worst_d >= th or worst_e >= th:
                raise HorizonTooSmall(
                    f"conditions unattainable in block {k} for level {n}"
                )
    return LimitSparsification(x_inf=x_inf, checks=tuple(checks), max_ratio=worst)


def merge_limit(alphas, x_inf: SparseSet, horizon: int | None = None) -> TorusElement:
    """Glue the sequence of elements along the blocks of ``x_inf``.

    Block n copies the n-th element up to a unimodular constant fixed by
    agreement at the block's left boundary with the previous block's right
    extension; the first constant is one.
    """
    K = len(alphas)
    pts = x_inf.enumeration
    if pts.size - 1 < K:
        raise PreconditionViolation("fewer blocks than elements to merge")
    if horizon is None:
        horizon = max(a.horizon for a in alphas)
    out = np.zeros(horizon)
    gamma = 0.0
    gammas = [0.0]
    for n in range(K):
        lo = int(pts[n])
        hi = int(pts[n + 1]) if n < K - 1 else horizon
        idx = np.arange(lo, min(hi, horizon))
        out[idx] = gamma + alphas[n].phase_at(idx)
        if n < K - 1:
            p = int(pts[n + 1])
            gamma = gamma + alphas[n].phase(p) - alphas[n + 1].phase(p)
            gammas.append(gamma)
    return TorusElement(out)


@dataclass(frozen=True)
class Certificate:
    kind: str  # "coherence" | "divergence" | "jump_bound"
    payload: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.payload}


@dataclass(frozen=True)
class TreeNode:
    label: str
    alpha: TorusElement

    @property
    def level(self) -> int:
        return len(self.label)


@dataclass(frozen=True)
class CoherenceTree:
    nodes: dict
    certificates: tuple
    eps: float
    j0: int
    z_variant: bool

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "j0": self.j0,
            "z_variant": self.z_variant,
            "nodes": {
                label: node.alpha.to_json() for label, node in self.nodes.items()
            },
            "certificates": [c.to_json() for c in self.certificates],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)


def build_tree(
    chain: Chain,
    depth: int,
    z_variant: bool = False,
    eps: float = 0.1,
    j0: int = 10,
) -> CoherenceTree:
    """Grow the full binary tree of the given depth over the chain and verify
    every certificate; any failure aborts with the failing pair identified."""
    if depth > chain.depth:
        raise PreconditionViolation(
            f"tree depth {depth} exceeds chain depth {chain.depth}"
        )
    horizon = chain.horizon
    witnesses = [
        successor_witness(
            chain.levels[t], chain.levels[t + 1], chain.schedules[t], z_variant
        )
        for t in range(depth)
    ]

    nodes = {"": TreeNode(label="", alpha=constant_one(horizon))}
    for level in range(depth):
        for label, node in [
            (l, n) for l, n in nodes.items() if n.level == level
        ]:
            nodes[label + "0"] = TreeNode(label=label + "0", alpha=node.alpha)
            nodes[label + "1"] = TreeNode(
                label=label + "1", alpha=node.alpha.mul(witnesses[level])
            )

    certs = []
    # ancestor coherence, profiled against the ancestor's own level
    for label_t, node_t in nodes.items():
        for cut in range(len(label_t)):
            label_s = label_t[:cut]
            node_s = nodes[label_s]
            diff = node_s.alpha.mul(node_t.alpha.inverse())
            prof = fx_profile(diff, chain.levels[cut])
            tail_max = float(prof.d[j0:].max()) if prof.d.size > j0 else 0.0
            holds = prof.in_fx(eps, j0)
            certs.append(
                Certificate(
                    kind="coherence",
                    payload={
                        "s": label_s,
                        "t": label_t,
                        "eps": eps,
                        "j0": j0,
                        "tail_max": tail_max,
                        "holds": holds,
                    },
                )
            )
            if not holds:
                raise ConstructionError(
                    f"coherence failed for {label_s!r} < {label_t!r}: "
                    f"tail max {tail_max} > {eps}"
                )
    # sibling divergence over the scheduled blocks of the next level
    for label, node in list(nodes.items()):
        if node.level >= depth:
            continue
        lvl = node.level
        w = witnesses[lvl]
        hi = chain.levels[lvl + 1]
        blocks = []
        for entry in chain.schedules[lvl]:
            lo_pt, hi_pt = n_of(hi, entry.block), n_of(hi, entry.block + 1)
            vals = w.values(np.arange(lo_pt, hi_pt))
            d = float(np.abs(vals[:, None] - vals[None, :]).max())
            if d >= 2.0 - DIVERGENCE_TOL:
                blocks.append({"block": entry.block, "m": entry.m, "delta": d})
        certs.append(
            Certificate(
                kind="divergence",
                payload={
                    "s0": label + "0",
                    "s1": label + "1",
                    "level": lvl,
                    "blocks": blocks,
                },
            )
        )
        if not blocks:
            raise ConstructionError(
                f"divergence failed for siblings of {label!r} at level {lvl}"
            )
    if z_variant:
        bound = 2.0 * float(np.sin(np.pi / (2.0 * chain.min_jump_m())))
        for label, node in nodes.items():
            v = np.exp(1j * np.asarray(node.alpha.phases))
            max_jump = float(np.abs(np.diff(v)).max()) if v.size > 1 else 0.0
            certs.append(
                Certificate(
                    kind="jump_bound",
                    payload={
                        "node": label,
                        "i0": 0,
                        "max_jump": max_jump,
                        "bound": bound,
                        "holds": max_jump <= bound + 1e-12,
                    },
                )
            )
            if max_jump > bound + 1e-12:
                raise ConstructionError(
                    f"jump bound failed at node {label!r}: {max_jump} > {bound}"
                )
    return CoherenceTree(
        nodes=nodes, certificates=tuple(certs), eps=eps, j0=j0, z_variant=z_variant
    )
