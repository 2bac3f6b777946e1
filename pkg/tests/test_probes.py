import numpy as np

from spinmodels import (
    chain_volume,
    operator_norm,
    random_local_operator,
    random_probe_pairs,
)


def test_random_local_operator_has_unit_norm():
    vol = chain_volume(4)
    rng = np.random.default_rng(1)
    for _ in range(10):
        op = random_local_operator(vol, rng)
        assert abs(operator_norm(op) - 1.0) < 1e-10


def test_hermitian_flag():
    vol = chain_volume(3)
    rng = np.random.default_rng(2)
    for _ in range(5):
        op = random_local_operator(vol, rng, hermitian=True)
        m = op.toarray()
        assert np.allclose(m, m.conj().T, atol=1e-12)


def test_support_pinning():
    vol = chain_volume(4)
    rng = np.random.default_rng(3)
    op = random_local_operator(vol, rng, support=((2,),)).toarray()
    # acting trivially outside site 2: conjugating by S3 elsewhere commutes
    from spinmodels import embed, spin_matrices

    s3_far = embed(spin_matrices(0.5).s3, ((0,),), vol).toarray()
    comm = op @ s3_far - s3_far @ op
    assert np.all(comm == 0)


def test_probe_pairs_deterministic_by_seed():
    vol = chain_volume(4)
    a = random_probe_pairs(vol, 7, 6)
    b = random_probe_pairs(vol, 7, 6)
    assert len(a) == len(b) == 6
    for (a1, a2), (b1, b2) in zip(a, b):
        assert np.array_equal(a1.toarray(), b1.toarray())
        assert np.array_equal(a2.toarray(), b2.toarray())
    c = random_probe_pairs(vol, 8, 6)
    assert not np.array_equal(a[0][0].toarray(), c[0][0].toarray())


def test_probe_pairs_on_single_site_volume():
    vol = chain_volume(1)
    pairs = random_probe_pairs(vol, 5, 4)
    assert len(pairs) == 4  # no bonds to draw from, still serves site probes
