import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from corona_lab import (
    AbGroupPresentation,
    InvalidSes,
    PreconditionViolation,
    SesTower,
    Tower,
    build_paper_model,
    constant_tower,
    cyclic_group,
    flasque_check,
    free_group,
    lim1_tower,
    lim_tower,
    six_term_check,
    smith_normal_form,
)
from corona_lab.limits import (
    col_hermite,
    det_int,
    kernel_basis,
    lattice_contains,
    lattice_equal,
    mat_id,
    mat_mul,
    row_hermite,
    tower_from_json,
    tower_to_json,
)


def test_snf_identity():
    U, S, V = smith_normal_form(mat_id(3))
    assert S == mat_id(3)


def test_snf_diag_2_3():
    U, S, V = smith_normal_form([[2, 0], [0, 3]])
    assert [S[0][0], S[1][1]] == [1, 6]


def test_snf_random_against_sympy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m, n = rng.integers(1, 6, size=2)
        M = rng.integers(-20, 21, size=(int(m), int(n))).tolist()
        U, S, V = smith_normal_form(M)
        ours = [S[i][i] for i in range(min(len(S), len(S[0])))]
        ref = sympy_snf(sympy.Matrix(M))
        theirs = [int(ref[i, i]) for i in range(min(ref.shape))]
        assert [abs(x) for x in ours] == [abs(x) for x in theirs]
        # self-verifying postcondition
        assert mat_mul(mat_mul(U, M), V) == S
        assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1


def test_det_int():
    assert det_int([[2, 1], [1, 1]]) == 1
    assert det_int([[1, 2], [2, 4]]) == 0
    rng = np.random.default_rng(1)
    for _ in range(10):
        M = rng.integers(-9, 10, size=(4, 4))
        assert det_int(M.tolist()) == round(float(np.linalg.det(M)))


def test_hermite_canonical_idempotent():
    rng = np.random.default_rng(2)
    for _ in range(20):
        M = rng.integers(-9, 10, size=(4, 5)).tolist()
        H = row_hermite(M)
        assert row_hermite(H) == H


def test_hermite_lattice_equality():
    A = [[2, 0], [0, 3]]
    B = [[2, 3], [3, 3]]  # same column lattice? check via membership both ways
    assert lattice_equal(A, A)
    assert lattice_equal([[4, 6]], [[2]])
    assert not lattice_equal([[2]], [[3]])


def test_kernel_basis():
    K = kernel_basis([[1, 2, 3]])
    # every kernel column is annihilated
    for col in zip(*K):
        assert sum(c * v for c, v in zip([1, 2, 3], col)) == 0
    # rank check: kernel of a 1x3 rank-1 map has rank 2
    assert len(K[0]) == 2


def test_lattice_contains():
    L = [[2, 0], [0, 4]]
    assert lattice_contains(L, [4, 8])
    assert not lattice_contains(L, [1, 0])
    assert lattice_contains(L, [0, 0])


def test_group_canonical():
    g = AbGroupPresentation(rank=2, relations=((2, 0), (0, 3)))
    assert g.invariants() == (0, (6,))
    c = g.canonical()
    assert c.canonical().invariants() == c.invariants()
    assert free_group(2).invariants() == (2, ())
    assert cyclic_group(1).is_trivial()
    assert cyclic_group(8).invariants() == (0, (8,))


def test_tower_validation():
    z = free_group(1)
    with pytest.raises(PreconditionViolation):
        Tower(levels=(z, z), bonds=())
    bad = Tower(
        levels=(cyclic_group(4), cyclic_group(2)),
        bonds=(((1,),),),  # Z/2 -> Z/4 by 1 does not respect relations
    )
    with pytest.raises(PreconditionViolation):
        bad.check_invariants()


def test_constant_tower_limits():
    ct = constant_tower(free_group(1), 5)
    rep = lim_tower(ct)
    assert rep["truncated_lim"].invariants() == (1, ()) and rep["stabilized"]
    assert lim1_tower(ct)["verdict"] == "Zero"
    assert flasque_check(ct)


def test_doubling_tower_limits():
    z = free_group(1)
    x2 = Tower(levels=(z,) * 4, bonds=(((2,),),) * 3, tail_level=z, tail_bond=((2,),))
    rep = lim_tower(x2)
    assert rep["truncated_lim"].is_trivial() and rep["stabilized"]
    l1 = lim1_tower(x2)
    assert l1["verdict"] == "Nonzero"
    chain = l1["evidence"]["tail_image_chain"]
    assert len(chain) >= 3  # strictly descending image lattices
    assert not flasque_check(x2)


def test_profinite_tower():
    prof = Tower(
        levels=tuple(cyclic_group(2 ** (n + 1)) for n in range(5)),
        bonds=(((1,),),) * 4,
    )
    rep = lim_tower(prof)
    assert rep["truncated_lim"].invariants() == (0, (32,))
    assert not rep["stabilized"]
    assert lim1_tower(prof)["verdict"] == "Zero"  # finite levels


def test_finite_towers_lim1_zero():
    rng = np.random.default_rng(3)
    for _ in range(20):
        r = int(rng.integers(1, 4))
        q = int(rng.integers(2, 9))
        depth = int(rng.integers(2, 5))
        g = AbGroupPresentation(
            rank=r, relations=tuple(tuple(q if i == j else 0 for j in range(r)) for i in range(r))
        )
        bonds = tuple(
            tuple(tuple(int(x) for x in row) for row in rng.integers(-3, 4, size=(r, r)))
            for _ in range(depth - 1)
        )
        t = Tower(levels=(g,) * depth, bonds=bonds)
        t.check_invariants()
        assert lim1_tower(t)["verdict"] == "Zero"


def test_flasque_implies_lim1_zero_random():
    rng = np.random.default_rng(4)
    for _ in range(10):
        r = int(rng.integers(1, 4))
        q = int(rng.integers(2, 7))
        depth = int(rng.integers(2, 5))
        g = AbGroupPresentation(
            rank=r, relations=tuple(tuple(q if i == j else 0 for j in range(r)) for i in range(r))
        )
        bonds = []
        for _ in range(depth - 1):
            b = np.eye(r, dtype=int)
            b[np.triu_indices(r, 1)] = rng.integers(-3, 4, size=r * (r - 1) // 2)
            bonds.append(tuple(tuple(int(x) for x in row) for row in b))
        t = Tower(levels=(g,) * depth, bonds=tuple(bonds))
        assert flasque_check(t)
        assert lim1_tower(t)["verdict"] == "Zero"


def test_tower_json_roundtrip():
    z = free_group(1)
    x2 = Tower(levels=(z,) * 3, bonds=(((2,),),) * 2, tail_level=z, tail_bond=((2,),))
    back = tower_from_json(tower_to_json(x2))
    back.check_invariants()
    assert back.tail_bond == ((2,),)
    assert lim1_tower(back)["verdict"] == "Nonzero"


def test_paper_model():
    ses = build_paper_model(8)
    rep = six_term_check(ses)
    assert rep["lim_F"] == (0, ())
    assert rep["lim_T"] == (1, ())
    assert rep["lim1_T"] == "Zero"
    assert rep["lim1_F"] == "Nonzero"
    assert rep["case"] == "diagonal_defect"
    assert rep["coker_evidence"]["tail_image_chain"]
    assert flasque_check(ses.T)
    # per-level exactness at n = 1: 0 -> Z -> Z -> Z/2 -> 0
    assert ses.G.levels[1].invariants() == (0, (2,))


def _random_finite_ses(rng):
    rf = int(rng.integers(1, 3))
    rg = int(rng.integers(1, 3))
    q = int(rng.integers(2, 7))
    qq = int(rng.integers(2, 7))
    depth = int(rng.integers(2, 4))
    F = AbGroupPresentation(
        rank=rf, relations=tuple(tuple(q if i == j else 0 for j in range(rf)) for i in range(rf))
    )
    G = AbGroupPresentation(
        rank=rg, relations=tuple(tuple(qq if i == j else 0 for j in range(rg)) for i in range(rg))
    )
    T = AbGroupPresentation(
        rank=rf + rg,
        relations=tuple(
            tuple(
                (q if i == j and i < rf else qq if i == j else 0)
                for j in range(rf + rg)
            )
            for i in range(rf + rg)
        ),
    )
    bondsF, bondsT, bondsG = [], [], []
    for _ in range(depth - 1):
        bf = rng.integers(-3, 4, size=(rf, rf))
        bg = rng.integers(-3, 4, size=(rg, rg))
        h = q * rng.integers(-2, 3, size=(rf, rg))
        bt = np.block([[bf, h], [np.zeros((rg, rf), dtype=int), bg]])
        bondsF.append(tuple(tuple(int(x) for x in r) for r in bf))
        bondsG.append(tuple(tuple(int(x) for x in r) for r in bg))
        bondsT.append(tuple(tuple(int(x) for x in r) for r in bt))
    iota = tuple(
        tuple(1 if i == j else 0 for j in range(rf)) for i in range(rf + rg)
    )
    sigma = tuple(
        tuple(1 if j == rf + i else 0 for j in range(rf + rg)) for i in range(rg)
    )
    return SesTower(
        F=Tower(levels=(F,) * depth, bonds=tuple(bondsF)),
        T=Tower(levels=(T,) * depth, bonds=tuple(bondsT)),
        G=Tower(levels=(G,) * depth, bonds=tuple(bondsG)),
        iotas=(iota,) * depth,
        sigmas=(sigma,) * depth,
    )


def test_random_finite_ses_towers():
    rng = np.random.default_rng(5)
    for _ in range(15):
        ses = _random_finite_ses(rng)
        rep = six_term_check(ses)
        assert rep["lim1_F"] == "Zero"
        assert rep["case"] == "exact"
        assert rep["truncation_exact"]


def test_invalid_ses_detected():
    ses = build_paper_model(4)
    broken = SesTower(
        F=ses.F,
        T=ses.T,
        G=ses.G,
        iotas=ses.iotas,
        sigmas=(((0,),),) * 4,  # zero map is not surjective onto Z/2^n for n >= 1
    )
    with pytest.raises(InvalidSes):
        broken.check_invariants()
