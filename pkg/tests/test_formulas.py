"""Closed-form cell data cross-checked against the brute-force oracle."""

import math

import pytest

from valenced_tl.cellular import (
    cell_basis_oracle,
    cell_data_oracle,
    commutativity_test,
    gram_matrix_oracle,
    idempotent_e_mu,
    matrix_det,
)
from valenced_tl.diagram import (
    Morphism,
    PlanarDiagram,
    compose,
    identity,
    involution,
    monic_part,
    partial_trace,
    tensor,
)
from valenced_tl.digits import down_sets, down_value, is_eve, is_interior, support
from valenced_tl.formulas import (
    IncompatibleTriple,
    WalkTuple,
    clamp_trace_id_coeff,
    dim_delta,
    gram_det_formula,
    gram_det_seam,
    gram_det_tl,
    gram_small_tensor_entry,
    lambda_mu,
    seam_data,
    seam_lambda0_eve,
    small_tensor,
    tensor_ell,
    tensor_ell_cross_entry,
    theta,
    theta_normalized,
    tl_standard_lambda0,
    two_part_eve,
    two_part_seam,
    walk_count,
    walks,
)
from valenced_tl.jones_wenzl import down_diagram, lambda_scalar, lp_jw
from valenced_tl.qnum import (
    INFINITY,
    build_ring,
    generic_ring,
    is_finite,
    quantum_int,
)

GEN = generic_ring()
FINITE_GRID = [(2, 2), (3, 2), (2, 5), (4, 3), (5, 3)]
GRID = FINITE_GRID + [(5, INFINITY), (INFINITY, INFINITY)]

SMALL_COMPOSITIONS = [
    (2,),
    (1, 1, 1),
    (3, 2),
    (2, 2, 1),
    (4, 2),
    (1, 2, 1, 1),
]


def ballot(n, m):
    if (n - m) % 2 or m < 0 or m > n:
        return 0
    k = (n - m) // 2
    return math.comb(n, k) - (math.comb(n, k - 1) if k >= 1 else 0)


def cup_cap(ring):
    """The single non-identity diagram on two strands."""
    return Morphism.from_diagram(PlanarDiagram.build(2, 2, [(1, 2), (-1, -2)]), ring)


# ---------------------------------------------------------------------------
# Walks
# ---------------------------------------------------------------------------


def test_walk_count_matches_enumeration():
    for mu in SMALL_COMPOSITIONS + [(3, 1, 2), (5,), (2, 4)]:
        n = sum(mu)
        for m in range(n + 2):
            ws = walks(mu, m)
            assert len(ws) == walk_count(mu, m)
            assert len(set(w.t for w in ws)) == len(ws)
            for w in ws:
                assert w.end_height == m
                assert all(h >= 0 for h in w.heights)


def test_walk_count_single_row_is_ballot():
    for n in range(8):
        for m in range(n + 1):
            assert walk_count((1,) * n, m) == ballot(n, m)


def test_walk_tuple_validation():
    with pytest.raises(ValueError):
        WalkTuple((2, 2), (1, 0))  # first part may not fall
    with pytest.raises(ValueError):
        WalkTuple((1, 3), (0, 2))  # crosses the axis
    with pytest.raises(ValueError):
        WalkTuple((2,), (0, 0))  # length mismatch


# ---------------------------------------------------------------------------
# Cell indices and dimensions against the oracle
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("ell,p", GRID)
def test_lambda_and_dims_match_oracle(ell, p):
    ring = build_ring(ell, p)
    for mu in SMALL_COMPOSITIONS:
        report = cell_data_oracle(mu, ring)
        assert lambda_mu(mu, ring) == tuple(report.lambda_set)
        for m, dim in report.dims().items():
            assert dim_delta(mu, m, ring) == dim


# ---------------------------------------------------------------------------
# Theta networks
# ---------------------------------------------------------------------------


def test_theta_consistency():
    for r in range(6):
        for s in range(6):
            for t in range(abs(r - s), r + s + 1, 2):
                lhs = theta(r, s, t, GEN)
                rhs = theta_normalized(r, s, t, GEN) * quantum_int(t + 1, GEN)
                assert lhs == rhs
    for r in range(5):
        for s in range(5):
            assert theta(r, s, r + s, GEN) == quantum_int(r + s + 1, GEN)


def test_theta_rejects_incompatible_triples():
    with pytest.raises(IncompatibleTriple):
        theta(1, 1, 1, GEN)  # parity
    with pytest.raises(IncompatibleTriple):
        theta(1, 1, 4, GEN)  # triangle inequality
    with pytest.raises(IncompatibleTriple):
        theta(-1, 1, 0, GEN)


# ---------------------------------------------------------------------------
# Gram determinant product formulas
# ---------------------------------------------------------------------------


def test_gram_det_formula_matches_oracle_generic():
    for mu in [(2, 2), (3, 1), (2, 1, 2), (3, 3), (1, 1, 1, 1), (4, 2)]:
        n = sum(mu)
        for m in range(n % 2, n + 1, 2):
            if dim_delta(mu, m, GEN) == 0:
                continue
            oracle = matrix_det(gram_matrix_oracle(mu, m, GEN), GEN)
            assert oracle == gram_det_formula(mu, m, GEN)


@pytest.mark.parametrize("ell,p", FINITE_GRID)
def test_gram_det_formula_matches_oracle_specialized(ell, p):
    ring = build_ring(ell, p)
    eve_parts = [x for x in range(1, 6) if is_eve(x, ell, p)]
    seen = 0
    for a in eve_parts:
        for b in eve_parts:
            if a + b > 6:
                continue
            mu = (a, b)
            report = cell_data_oracle(mu, ring, with_matrices=True)
            for entry in report.entries:
                assert entry.det == gram_det_formula(mu, entry.m, ring)
                seen += 1
    assert seen > 0


def test_gram_det_tl_matches_oracle():
    for n in range(1, 7):
        mu = (1,) * n
        for m in range(n % 2, n + 1, 2):
            oracle = matrix_det(gram_matrix_oracle(mu, m, GEN), GEN)
            assert oracle == gram_det_tl(n, m, GEN)
    with pytest.raises(ValueError):
        gram_det_tl(4, 1, GEN)


def test_gram_det_seam_matches_oracle():
    for k in range(1, 5):
        for b in range(1, 3):
            mu = (k,) + (1,) * b
            n = k + b
            for m in range(n % 2, n + 1, 2):
                if dim_delta(mu, m, GEN) == 0:
                    continue
                oracle = matrix_det(gram_matrix_oracle(mu, m, GEN), GEN)
                assert oracle == gram_det_seam(k, b, m, GEN)


# ---------------------------------------------------------------------------
# Two-part Eve compositions
# ---------------------------------------------------------------------------


def eve_pairs(ell, p, bound):
    out = []
    for a in range(1, bound):
        for b in range(1, a + 1):
            if a + b <= bound and is_eve(a, ell, p) and is_eve(b, ell, p):
                out.append((a, b))
    return out


@pytest.mark.parametrize("ell,p", GRID)
def test_two_part_eve_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    for mu in eve_pairs(ell, p, 8):
        data = two_part_eve(mu, ring)
        assert data.lambda0 == data.lambda0_xset
        report = cell_data_oracle(mu, ring, with_matrices=True)
        assert data.lambda_set == tuple(report.lambda_set)
        assert data.lambda0 == tuple(report.lambda0_set)
        for entry in report.entries:
            assert entry.dim == 1
            assert entry.det == data.gram_dets[entry.m]


def test_two_part_eve_headline_three_simples():
    data = two_part_eve((3, 3), build_ring(5, INFINITY))
    assert data.lambda0 == (0, 4, 6)
    assert len(data.lambda0) == 3


@pytest.mark.parametrize("ell,p", GRID)
def test_two_part_eve_seam_eigenvalues(ell, p):
    ring = build_ring(ell, p)
    for mu1, mu2 in eve_pairs(ell, p, 7):
        data = two_part_eve((mu1, mu2), ring)
        e = idempotent_e_mu((mu1, mu2), ring)
        seam = tensor(
            tensor(identity(mu1 - 1, ring), cup_cap(ring)),
            identity(mu2 - 1, ring),
        )
        u = compose(compose(e, seam), e)
        for m in data.lambda_set:
            (b,) = cell_basis_oracle((mu1, mu2), m, ring)
            acted = monic_part(compose(u, b))
            assert acted == data.eigenvalues[m] * monic_part(b)


# ---------------------------------------------------------------------------
# Seam algebras (k, 1^b)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("ell,p", GRID)
def test_seam_data_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    for k in range(1, 6):
        for b in range(1, 4):
            if k + b > 7:
                continue
            report = cell_data_oracle((k,) + (1,) * b, ring)
            assert seam_data(k, b, ring) == report.dims()
            if is_eve(k, ell, p):
                assert seam_lambda0_eve(k, b, ring) == tuple(report.lambda0_set)


def test_seam_headline_seven_simples():
    ring = build_ring(2, 5)
    assert len(seam_lambda0_eve(39, 11, ring)) == 7


@pytest.mark.parametrize("ell,p", GRID)
def test_tl_standard_lambda0_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    for n in range(1, 6):
        report = cell_data_oracle((1,) * n, ring)
        assert tl_standard_lambda0(n, ring) == tuple(report.lambda0_set)


# ---------------------------------------------------------------------------
# Two-part seam (k, 1) classification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("ell,p", GRID)
def test_two_part_seam_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    for k in range(1, 7):
        data = two_part_seam(k, ring)
        report = cell_data_oracle((k, 1), ring)
        assert data.lambda_set == tuple(report.lambda_set)
        assert data.dims == report.dims()
        assert data.algebra_dim == report.algebra_dim
        cls = data.classification
        assert cls.lambda0 == set(report.lambda0_set)
        ranks = {entry.m: entry.gram_rank for entry in report.entries}
        for m in cls.dim_one:
            assert ranks[m] == 1
        for m in cls.dim_two:
            assert data.dims[m] == 2 and ranks[m] == 2
        if is_interior(k, ell, p):
            assert commutativity_test((k, 1), ring)


@pytest.mark.parametrize("ell,p", GRID)
def test_clamp_trace_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    seen = 0
    for k in range(2, 8):
        supp = support(k, ell, p)
        e = None
        for m in supp:
            if m - 2 not in supp:
                continue
            if e is None:
                e = lp_jw(k, ring)
            (s,) = [
                s for s in down_sets(k, ell, p)
                if down_value(k, s, ell, p) == m
            ]
            d = down_diagram(k, s.indices, ring)
            clamp = compose(compose(involution(d), e), d)
            oracle = partial_trace(clamp, 1).identity_coefficient()
            assert oracle == clamp_trace_id_coeff(k, m, ring)
            seen += 1
    if is_finite(ell):
        assert seen > 0


# ---------------------------------------------------------------------------
# Small tensors (n, k), ell | n + 1
# ---------------------------------------------------------------------------


def tensor_cases(ell, p, bound):
    if not is_finite(ell):
        return []
    out = []
    for n in range(1, bound):
        if (n + 1) % int(ell):
            continue
        for k in range(1, int(ell) + 1):
            if n + k <= bound + 1:
                out.append((n, k))
    return out


@pytest.mark.parametrize("ell,p", FINITE_GRID + [(5, INFINITY)])
def test_small_tensor_matches_oracle(ell, p):
    ring = build_ring(ell, p)
    for n, k in tensor_cases(ell, p, 8):
        report = cell_data_oracle((n, k), ring)
        if k < int(ell):
            data = small_tensor(n, k, ring)
            assert data.lambda_set == tuple(report.lambda_set)
            assert data.lambda0 == tuple(report.lambda0_set)
        else:
            data = tensor_ell(n, ring)
            assert data.lambda_set == tuple(report.lambda_set)
            assert data.dims == report.dims()
            cls = data.classification
            assert cls.lambda0 == set(report.lambda0_set)
            ranks = {entry.m: entry.gram_rank for entry in report.entries}
            for m in cls.dim_one:
                assert ranks[m] == 1
            for m in cls.dim_two:
                assert data.dims[m] == 2 and ranks[m] == 2


@pytest.mark.parametrize("ell,p", FINITE_GRID + [(5, INFINITY)])
def test_gram_small_tensor_entries_match_oracle(ell, p):
    ring = build_ring(ell, p)
    seen = 0
    for n, k in tensor_cases(ell, p, 8):
        if k == int(ell):
            continue
        for t in range(k + 1):
            m = n + k - 2 * t
            if m < 0 or dim_delta((n, k), m, ring) != 1:
                continue
            (gram,) = gram_matrix_oracle((n, k), m, ring)
            assert gram[0] == gram_small_tensor_entry(n, k, t, ring)
            seen += 1
    assert seen > 0


@pytest.mark.parametrize("ell,p", FINITE_GRID + [(5, INFINITY)])
def test_tensor_ell_cross_entries_match_oracle(ell, p):
    ring = build_ring(ell, p)
    ell_i = int(ell)
    for n, k in tensor_cases(ell, p, 8):
        if k != ell_i:
            continue
        for t in range(1, ell_i):
            m = n + ell_i - 2 * t
            if m < 0 or dim_delta((n, ell_i), m, ring) != 2:
                continue
            gram = gram_matrix_oracle((n, ell_i), m, ring)
            cross = tensor_ell_cross_entry(n, t, ring)
            assert gram[0][1] == cross
            assert gram[1][0] == cross
