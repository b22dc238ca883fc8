import numpy as np

from maxcutbench.seeding import derive_seed, derive_stream, make_label


def test_label_format():
    label = make_label(size=11, instance=3, run=2, alg="vqe", purpose="shots")
    assert label == "size=11/instance=3/run=2/alg=vqe/purpose=shots"
    assert make_label(purpose="graph") == "size=-/instance=-/run=-/alg=-/purpose=graph"


def test_same_label_same_stream():
    a = derive_stream(7, "size=11/instance=0/run=-/alg=-/purpose=graph")
    b = derive_stream(7, "size=11/instance=0/run=-/alg=-/purpose=graph")
    assert np.array_equal(a.random(100), b.random(100))


def test_labels_differing_in_one_character_diverge():
    a = derive_stream(7, "size=11/instance=0/run=0/alg=vqe/purpose=shots")
    b = derive_stream(7, "size=11/instance=0/run=1/alg=vqe/purpose=shots")
    assert not np.array_equal(a.random(100), b.random(100))


def test_master_seed_changes_stream():
    label = "size=11/instance=0/run=-/alg=-/purpose=graph"
    a = derive_stream(1, label)
    b = derive_stream(2, label)
    assert not np.array_equal(a.random(100), b.random(100))


def test_seed_is_first_8_hash_bytes():
    seed = derive_seed(0, "x")
    assert 0 <= seed < 2**64
    import hashlib

    digest = hashlib.sha256(b"0|x").digest()
    assert seed == int.from_bytes(digest[:8], "big")
