"""Sparse tensor operators against brute-force dense oracles."""

from fractions import Fraction
from random import Random

import pytest

from heckelab.tensor import (
    CoTensor,
    ContraTensor,
    NotIdempotentError,
    NotInvertibleError,
    NotRankOneError,
    ShapeError,
    TensorOperator,
    contract_keep_first,
    contract_keep_last,
    decode,
    encode,
    outer,
)


def random_operator(rng, dim, arity, density=0.4, span=5):
    size = dim ** arity
    entries = {}
    for r in range(size):
        for c in range(size):
            if rng.random() < density:
                v = Fraction(rng.randint(-span, span))
                if v:
                    entries[(r, c)] = v
    return TensorOperator(dim, arity, entries)


def dense(a):
    m = [[Fraction(0)] * a.size for _ in range(a.size)]
    for (r, c), v in a.entries.items():
        m[r][c] = v
    return m


def dense_mul(x, y):
    n = len(x)
    return [[sum((x[i][k] * y[k][j] for k in range(n)), Fraction(0))
             for j in range(n)] for i in range(n)]


def from_dense(m, dim, arity):
    entries = {}
    for r, row in enumerate(m):
        for c, v in enumerate(row):
            if v:
                entries[(r, c)] = v
    return TensorOperator(dim, arity, entries)


# --- encoding ----------------------------------------------------------------

def test_encode_decode_roundtrip():
    for dim in (2, 3):
        for arity in (1, 2, 3):
            for flat in range(dim ** arity):
                assert encode(decode(flat, dim, arity), dim) == flat


def test_encode_slot1_least_significant():
    assert encode((2, 1, 1), 3) == 1
    assert encode((1, 2, 1), 3) == 3
    assert encode((1, 1, 2), 3) == 9


# --- algebra -----------------------------------------------------------------

def test_compose_matches_dense_oracle():
    rng = Random(7)
    for _ in range(8):
        a = random_operator(rng, 2, 2)
        b = random_operator(rng, 2, 2)
        assert dense(a @ b) == dense_mul(dense(a), dense(b))


def test_add_sub_scale():
    rng = Random(9)
    a = random_operator(rng, 2, 2)
    b = random_operator(rng, 2, 2)
    assert a + b - b == a
    assert (a - a).is_zero()
    assert a.scaled(Fraction(3)) @ b == (a @ b).scaled(Fraction(3))
    assert 2 * a == a + a


def test_shape_mismatch_raises():
    a = TensorOperator.identity(2, 2, Fraction(1))
    b = TensorOperator.identity(2, 3, Fraction(1))
    with pytest.raises(ShapeError):
        a @ b
    with pytest.raises(ShapeError):
        a + b


def test_identity_neutral():
    rng = Random(3)
    a = random_operator(rng, 3, 1)
    one = TensorOperator.identity(3, 1, Fraction(1))
    assert one @ a == a and a @ one == a


# --- embed ------------------------------------------------------------------

def kron(a, b):
    """Dense Kronecker product with the slot-1-least-significant layout:
    slot-1 factor a, slot-2 factor b gives entry (i2 i1, j2 j1) = b*a."""
    na, nb = len(a), len(b)
    out = [[Fraction(0)] * (na * nb) for _ in range(na * nb)]
    for i2 in range(nb):
        for j2 in range(nb):
            for i1 in range(na):
                for j1 in range(na):
                    out[i2 * na + i1][j2 * na + j1] = b[i2][j2] * a[i1][j1]
    return out


def test_embed_matches_kron_oracle():
    rng = Random(21)
    a = random_operator(rng, 2, 1)
    ident = dense(TensorOperator.identity(2, 1, Fraction(1)))
    # slot 1 of 2
    assert dense(a.embed(1, 2)) == kron(dense(a), ident)
    # slot 2 of 2
    assert dense(a.embed(2, 2)) == kron(ident, dense(a))


def test_embed_two_slot_operator():
    rng = Random(22)
    r = random_operator(rng, 2, 2)
    ident1 = dense(TensorOperator.identity(2, 1, Fraction(1)))
    got = dense(r.embed(1, 3))
    want = kron(dense(r), ident1)  # slots (1,2) tensor identity on slot 3
    assert got == want
    got2 = dense(r.embed(2, 3))
    want2 = kron(ident1, dense(r))
    assert got2 == want2


def test_embedded_disjoint_slots_commute():
    rng = Random(23)
    a = random_operator(rng, 2, 1)
    b = random_operator(rng, 2, 1)
    a1 = a.embed(1, 3)
    b3 = b.embed(3, 3)
    assert a1 @ b3 == b3 @ a1


def test_embed_is_homomorphism():
    rng = Random(24)
    a = random_operator(rng, 2, 2)
    b = random_operator(rng, 2, 2)
    assert (a @ b).embed(2, 4) == a.embed(2, 4) @ b.embed(2, 4)


# --- partial transpose --------------------------------------------------------

def test_partial_transpose_definition():
    rng = Random(31)
    a = random_operator(rng, 3, 2)
    t = a.partial_transpose_slot1()
    for (r, c), v in a.entries.items():
        i1, i2 = decode(r, 3, 2)
        j1, j2 = decode(c, 3, 2)
        assert t.entry((j1, i2), (i1, j2)) == v


def test_partial_transpose_involution():
    rng = Random(32)
    a = random_operator(rng, 2, 2)
    assert a.partial_transpose_slot1().partial_transpose_slot1() == a


def test_partial_transpose_slot2_factor_commutes():
    # t1 only touches slot 1, so it is multiplicative across slot-2 factors
    rng = Random(33)
    a = random_operator(rng, 2, 1)
    a2 = a.embed(2, 2)
    b = random_operator(rng, 2, 2)
    assert (a2 @ b).partial_transpose_slot1() == a2 @ b.partial_transpose_slot1()


# --- traces -------------------------------------------------------------------

def test_trace_full_cyclic():
    rng = Random(41)
    a = random_operator(rng, 2, 2)
    b = random_operator(rng, 2, 2)
    assert (a @ b).trace_full() == (b @ a).trace_full()


def test_trace_empty_is_int_zero():
    assert TensorOperator.zero(2, 1).trace_full() == 0


def test_trace_slots_against_dense():
    rng = Random(42)
    a = random_operator(rng, 2, 2)
    t = a.trace_slots([2])
    for i in (1, 2):
        for j in (1, 2):
            want = sum((a.entry((i, k), (j, k)) for k in (1, 2)), Fraction(0))
            assert t.entry((i,), (j,)) == want


def test_trace_slots_compose_to_full():
    rng = Random(43)
    a = random_operator(rng, 2, 3, density=0.25)
    assert a.trace_slots([1, 2, 3]).as_scalar() == a.trace_full()
    assert a.trace_slots([2]).trace_slots([1, 2]).as_scalar() == a.trace_full()


def test_trace_slots_partial_cyclicity():
    # tracing slot 2 of (B2 A) equals tracing slot 2 of (A B2)
    rng = Random(44)
    a = random_operator(rng, 2, 2)
    b = random_operator(rng, 2, 1)
    b2 = b.embed(2, 2)
    assert (b2 @ a).trace_slots([2]) == (a @ b2).trace_slots([2])


# --- inversion ----------------------------------------------------------------

def test_invert_random_exact():
    rng = Random(51)
    found = 0
    while found < 5:
        a = random_operator(rng, 2, 2, density=0.6)
        try:
            inv = a.invert()
        except NotInvertibleError:
            continue
        found += 1
        one = TensorOperator.identity(2, 2, Fraction(1))
        assert a @ inv == one and inv @ a == one


def test_invert_singular_raises():
    a = TensorOperator(2, 1, {(0, 0): Fraction(1), (1, 0): Fraction(1)})
    with pytest.raises(NotInvertibleError):
        a.invert()


def test_invert_symbolic():
    from heckelab.qscalar import Q_ONE, Q_VAR
    a = TensorOperator(2, 1, {(0, 0): Q_VAR, (0, 1): Q_ONE, (1, 1): Q_VAR})
    inv = a.invert()
    one = TensorOperator.identity(2, 1, Q_ONE)
    assert a @ inv == one and inv @ a == one


# --- idempotents ----------------------------------------------------------------

def test_idempotent_rank_projector():
    half = Fraction(1, 2)
    p = TensorOperator(2, 1, {(0, 0): half, (0, 1): half,
                              (1, 0): half, (1, 1): half})
    assert p.idempotent_rank() == 1


def test_idempotent_rank_rejects_non_idempotent():
    a = TensorOperator(2, 1, {(0, 1): Fraction(1)})
    with pytest.raises(NotIdempotentError):
        a.idempotent_rank()


def test_idempotent_rank_identity_and_zero():
    assert TensorOperator.identity(2, 2, Fraction(1)).idempotent_rank() == 4
    assert TensorOperator.zero(2, 2).idempotent_rank() == 0


# --- rank-1 factorisation --------------------------------------------------------

def test_rank1_factor_recovers_projector():
    u = CoTensor(2, 2, {1: Fraction(2), 2: Fraction(-1)})
    v = ContraTensor(2, 2, {1: Fraction(1, 3), 2: Fraction(1, 3)})
    # normalise the pairing to 1 so that u v is idempotent
    pairing = v @ u
    v = v.scaled(1 / pairing)
    a = outer(u, v)
    uu, vv = a.rank1_factor()
    assert outer(uu, vv) == a
    assert vv @ uu == 1
    # first nonzero entry of uu is exactly 1
    first = min(uu.entries)
    assert uu.entries[first] == 1


def test_rank1_factor_rejects_rank2():
    a = TensorOperator.identity(2, 1, Fraction(1))
    with pytest.raises(NotRankOneError):
        a.rank1_factor()


# --- vectors ---------------------------------------------------------------------

def test_vector_contraction_associativity():
    rng = Random(61)
    o = random_operator(rng, 2, 2)
    u = CoTensor(2, 2, {i: Fraction(rng.randint(-3, 3)) for i in range(4)})
    v = ContraTensor(2, 2, {i: Fraction(rng.randint(-3, 3)) for i in range(4)})
    assert (v @ o) @ u == v @ (o @ u)


def test_contract_keep_helpers():
    u = CoTensor.from_multi(2, 2, {(1, 2): Fraction(3), (2, 1): Fraction(5)})
    v = ContraTensor.from_multi(2, 2, {(1, 2): Fraction(7), (2, 2): Fraction(1)})
    kf = contract_keep_first(u, v)
    # tails must match: u_(1,2) pairs with v^(1,2) and v^(2,2)
    assert kf.entry((1,), (1,)) == 21
    assert kf.entry((1,), (2,)) == 3
    assert kf.entry((2,), (1,)) == 0
    kl = contract_keep_last(u, v)
    # heads must match: u_(2,1) with nothing, u_(1,2) with v head 1
    assert kl.entry((2,), (2,)) == 21
    assert kl.entry((1,), (1,)) == 0
