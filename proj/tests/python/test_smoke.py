import math

import numpy as np
import pytest

import diffent


def test_grating_block_is_balanced():
    u = diffent.grating_unitary()
    assert u.shape == (2, 2)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    assert np.allclose(np.abs(u) ** 2, 0.5, atol=1e-12)


def test_single_photon_makes_one_ebit():
    out = diffent.propagate(diffent.FockState.basis([1, 0]), diffent.grating_unitary())
    assert abs(out.squared_norm() - 1.0) < 1e-12
    assert abs(diffent.entropy(out, [0]) - 1.0) < 1e-9


def test_hom_dip():
    assert abs(diffent.hom_coincidence(diffent.splitter(math.pi / 2))) < 1e-12


def test_squeezing_checker_and_oracle_agree():
    u = diffent.splitter(math.pi / 2)
    same = diffent.check_separability("sq:0.3,sq:0.3", u, [0])
    opposite = diffent.check_separability("sq:0.3,sq:-0.3", u, [0])
    assert same["separable"]
    assert not opposite["separable"]
    assert opposite["witness"]["order"] == 2
    state = diffent.propagate(diffent.input_state("sq:0.3,sq:-0.3", cutoff=24, photon_cap=0), u, factored=True)
    assert diffent.entropy(state, [0]) > 0.1


def test_ifm_and_noon():
    r = diffent.ifm(1.0, diffent.grating_unitary())
    assert abs(r["bell_fidelity"] - 1.0) < 1e-12
    assert diffent.noon_scan(2, 32, 32)["best_fidelity"] > 1 - 1e-9


def test_errors_carry_code():
    with pytest.raises(diffent.DiffentError) as info:
        diffent.ifm(1.5, diffent.grating_unitary())
    assert "InvalidEfficiency" in str(info.value)


def test_unitarize_dilation():
    u = diffent.unitarize(np.diag([0.9, 0.5]).astype(complex))
    assert u.shape == (4, 4)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-10)
