"""Tests for state construction, the named families, sampling and I/O."""

import json
import math

import numpy as np
import pytest

from qcorr import (AcinParams, MultipartiteState, Partition, from_acin,
                   load_state, named_state, sample_random_mixed,
                   sample_random_pure, save_state)
from qcorr.errors import (DimensionError, FormatError, ParamError,
                          StateValidationError)


def test_partition_parse_and_str():
    part = Partition.parse("AB:C")
    assert part.blocks == ((0, 1), (2,))
    assert str(part) == "AB:C"
    assert Partition.parse("A:B:C").blocks == ((0,), (1,), (2,))
    assert Partition.parse("BC:A").blocks == ((1, 2), (0,))


def test_partition_rejects_bad_syntax():
    for bad in ("", "A:", "A:A", "A::B"):
        with pytest.raises((DimensionError, FormatError, ParamError, ValueError)):
            Partition.parse(bad)


def test_partition_out_of_range_party_caught_on_use():
    from qcorr.measures import total_mutual_information
    part = Partition.parse("AD:C")       # D has no party on a 3-qubit state
    with pytest.raises(DimensionError):
        total_mutual_information(named_state("ghz"), part)


def test_state_validation_rejects_bad_matrices():
    eye = np.eye(8, dtype=complex)
    with pytest.raises(StateValidationError):
        MultipartiteState((2, 2, 2), eye, "untraced")      # trace 8
    non_herm = np.diag([1.0] + [0.0] * 7).astype(complex)
    non_herm[0, 1] = 0.5
    with pytest.raises(StateValidationError):
        MultipartiteState((2, 2, 2), non_herm, "non-hermitian")
    neg = np.diag([1.5, -0.5] + [0.0] * 6).astype(complex)
    with pytest.raises(StateValidationError):
        MultipartiteState((2, 2, 2), neg, "negative")


def test_named_families_are_valid_states():
    cases = [
        ("ghz", None),
        ("w", None),
        ("ghz_general", {"alpha2": 0.3}),
        ("ghz_plus", {"p": 0.4}),
        ("w_general", {"alpha2": 0.2, "beta2": 0.3}),
        ("w_white", {"p": 0.5}),
        ("ghz_white", {"p": 0.5}),
        ("w_asym", {"p": 0.7}),
        ("counterexample", {"p": 0.25}),
    ]
    for family, params in cases:
        s = named_state(family, params)
        assert s.dims == (2, 2, 2)
        assert np.isclose(np.trace(s.rho).real, 1.0)


def test_named_family_purity():
    assert named_state("ghz").is_pure()
    assert named_state("ghz_plus", {"p": 0.3}).is_pure()
    assert not named_state("w_white", {"p": 0.5}).is_pure()
    assert not named_state("counterexample", {"p": 0.3}).is_pure()


def test_ghz_general_reduces_to_ghz():
    s = named_state("ghz_general", {"alpha2": 0.5})
    assert np.allclose(s.rho, named_state("ghz").rho)


def test_w_state_marginals():
    s = named_state("w")
    for p in range(3):
        red = s.reduced([p]).rho
        assert np.allclose(np.diag(red).real, [2 / 3, 1 / 3], atol=1e-12)


def test_named_family_rejects_bad_weight():
    with pytest.raises(ParamError):
        named_state("ghz_plus", {"p": 1.5})
    with pytest.raises(ParamError):
        named_state("ghz_general", {"alpha2": -0.1})
    with pytest.raises(ParamError):
        named_state("no_such_family")


def test_acin_params_normalization_check():
    lam = (0.5, 0.5, 0.5, 0.5, 0.5)
    with pytest.raises(ParamError):
        AcinParams(lam, 0.0)
    good = AcinParams((1.0, 0.0, 0.0, 0.0, 0.0), 0.0)
    s = from_acin(good)
    assert s.is_pure()


def test_from_acin_places_amplitudes():
    lam = math.sqrt(0.5)
    p = AcinParams((lam, 0.0, 0.0, 0.0, lam), 0.0)
    s = from_acin(p)
    # |psi> = lam|000> + lam|111> is the GHZ state
    assert np.allclose(s.rho, named_state("ghz").rho, atol=1e-12)


def test_sample_random_pure_is_seeded_and_pure():
    for method in ("acin_uniform", "haar"):
        a = sample_random_pure(seed=11, method=method)
        b = sample_random_pure(seed=11, method=method)
        c = sample_random_pure(seed=12, method=method)
        assert np.array_equal(a.rho, b.rho)
        assert not np.allclose(a.rho, c.rho)
        assert a.is_pure()


def test_sample_random_mixed_rank_and_seed():
    a = sample_random_mixed(seed=5, rank=4)
    b = sample_random_mixed(seed=5, rank=4)
    assert np.array_equal(a.rho, b.rho)
    w = np.linalg.eigvalsh(a.rho)
    assert np.sum(w > 1e-10) <= 4
    assert not a.is_pure()


def test_save_load_roundtrip(tmp_path):
    rng_states = [named_state("w_asym", {"p": 0.8}),
                  sample_random_mixed(seed=3)]
    for s in rng_states:
        path = tmp_path / "state.json"
        save_state(s, path)
        back = load_state(path)
        assert back.dims == s.dims
        assert np.allclose(back.rho, s.rho, atol=1e-15)


def test_load_family_shorthand(tmp_path):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"family": "ghz_plus", "params": {"p": 0.3}}))
    s = load_state(path)
    assert np.allclose(s.rho, named_state("ghz_plus", {"p": 0.3}).rho)


def test_load_rejects_malformed_files(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(FormatError):
        load_state(bad_json)

    bad_schema = tmp_path / "schema.json"
    bad_schema.write_text(json.dumps({"dims": [2, 2, 2]}))
    with pytest.raises(FormatError):
        load_state(bad_schema)

    bad_state = tmp_path / "invalid.json"
    matrix = [[[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(8)]
              for i in range(8)]                        # trace 8, not 1
    bad_state.write_text(json.dumps({"dims": [2, 2, 2], "matrix": matrix}))
    with pytest.raises(StateValidationError):
        load_state(bad_state)


def test_reduced_keeps_party_order():
    s = named_state("counterexample", {"p": 0.3})
    ab = s.reduced([0, 1])
    assert ab.dims == (2, 2)
    assert np.isclose(np.trace(ab.rho).real, 1.0)
