import numpy as np
import pytest

from capdetect import (
    AffineQubitChannel,
    ChannelSpec,
    affine_to_kraus,
    apply_channel,
    conditional_probs,
    dephasing_axis_channel,
    eigenbasis,
    extremal_affine,
    gad_affine,
    is_cptp,
    kraus_to_affine,
    named_affine_params,
    pauli_channel,
    pauli_family_channel,
    rotated_pauli_channel,
    stretched_affine,
    vshape_qutrit_channel,
    weyl_bases,
)
from capdetect.qcore import SIGMA_Z, basis_ket, projector
from conftest import random_cp_affine


def test_pauli_family_identity():
    q = np.zeros((2, 2))
    q[0, 0] = 1.0
    ch = pauli_family_channel(2, q)
    assert len(ch.operators) == 1
    assert np.allclose(ch.operators[0], np.eye(2))


def test_pauli_family_d2_affine_map():
    lam, t = kraus_to_affine(pauli_channel(0.15, 0.05, 0.1))
    assert np.allclose(lam, np.diag([0.7, 0.5, 0.6]), atol=1e-12)
    assert np.allclose(t, 0.0, atol=1e-12)


def test_pauli_family_d3_uniform_is_uniform_in_weyl_bases():
    ch = pauli_family_channel(3, np.full((3, 3), 1 / 9))
    for b in weyl_bases(3):
        assert np.allclose(conditional_probs(ch, b), np.full((3, 3), 1 / 3), atol=1e-10)


def test_pauli_family_rejects_unnormalized():
    with pytest.raises(ValueError, match="sum to 1"):
        pauli_family_channel(2, np.full((2, 2), 0.3))
    with pytest.raises(ValueError, match="simplex"):
        pauli_channel(0.6, 0.6, 0.0)


def test_gad_affine_values():
    ch = gad_affine(0.36, 1.0)
    assert ch.lambda1 == pytest.approx(0.8, abs=1e-12)
    assert ch.lambda2 == pytest.approx(0.8, abs=1e-12)
    assert ch.lambda3 == pytest.approx(0.64, abs=1e-12)
    assert ch.t3 == pytest.approx(0.36, abs=1e-12)


def test_gad_half_p_is_unital():
    for g in np.linspace(0, 1, 11):
        assert gad_affine(g, 0.5).t3 == pytest.approx(0.0, abs=1e-12)


def test_extremal_alpha_zero_is_unital():
    ch = extremal_affine(0.0, 0.7)
    assert ch.t3 == pytest.approx(0.0, abs=1e-12)
    assert ch.lambda1 == pytest.approx(1.0)
    assert ch.lambda2 == pytest.approx(np.cos(0.7))
    assert ch.lambda3 == pytest.approx(np.cos(0.7))


def test_stretched_rejects_overstretching():
    with pytest.raises(ValueError, match="sqrt"):
        stretched_affine(0.5, 0.8)


def test_named_affine_dispatch():
    ch = named_affine_params("gad", {"gamma": 0.36, "p": 1.0})
    assert ch.t3 == pytest.approx(0.36)
    with pytest.raises(ValueError, match="unknown affine family"):
        named_affine_params("nope", {})


def test_affine_constructor_rejects_cp_violation():
    with pytest.raises(ValueError, match=r"\(1\+l3\)\^2"):
        AffineQubitChannel(1.0, 1.0, 0.9, 0.0)


def test_vshape_endpoints():
    assert len(vshape_qutrit_channel(0.0, 0.0).operators) == 1
    ch = vshape_qutrit_channel(1.0, 1.0)
    rho = np.full((3, 3), 1 / 3, dtype=complex)
    assert np.allclose(apply_channel(ch, rho), projector(basis_ket(3, 0)))
    assert is_cptp(vshape_qutrit_channel(0.5, 0.5)).valid


def test_dephasing_axis_z_is_pauli_z():
    lam, t = kraus_to_affine(dephasing_axis_channel(0.3, 0.0, 0.0))
    assert np.allclose(lam, np.diag([0.4, 0.4, 1.0]), atol=1e-12)
    assert np.allclose(t, 0.0, atol=1e-12)


def test_dephasing_axis_p_zero_is_identity():
    ch = dephasing_axis_channel(0.0, 0.7, 1.2)
    assert len(ch.operators) == 1
    assert np.allclose(ch.operators[0], np.eye(2))


def test_dephasing_axis_z_flip_probability():
    # flip probability in the z basis is p sin^2(theta)
    theta = np.arccos(1 / np.sqrt(3))
    ch = dephasing_axis_channel(0.9, theta, np.pi / 4)
    t = conditional_probs(ch, eigenbasis(SIGMA_Z, "z"))
    assert t[1, 0] == pytest.approx(0.9 * np.sin(theta) ** 2, abs=1e-12)
    assert t[1, 0] == pytest.approx(0.6, abs=1e-12)


def test_rotated_pauli_phi_zero_matches_plain():
    a = rotated_pauli_channel(0.15, 0.05, 0.1, 0.0)
    b = pauli_channel(0.15, 0.05, 0.1)
    for x, y in zip(a.operators, b.operators):
        assert np.allclose(x, y)


def test_rotated_pauli_z_statistics_unchanged():
    z = eigenbasis(SIGMA_Z, "z")
    ref = conditional_probs(pauli_channel(0.15, 0.05, 0.1), z)
    for phi in (-np.pi, -1.1, 0.4, np.pi):
        t = conditional_probs(rotated_pauli_channel(0.15, 0.05, 0.1, phi), z)
        assert np.allclose(t, ref, atol=1e-12)
        assert t[1, 0] == pytest.approx(0.2, abs=1e-12)


def test_affine_to_kraus_identity():
    ch = affine_to_kraus(AffineQubitChannel(1.0, 1.0, 1.0, 0.0))
    assert len(ch.operators) == 1
    assert np.allclose(np.abs(ch.operators[0]), np.eye(2), atol=1e-8)


def test_affine_to_kraus_depolarizing():
    ch = affine_to_kraus(AffineQubitChannel(0.0, 0.0, 0.0, 0.0))
    rng = np.random.default_rng(6)
    from capdetect.qcore import haar_random_basis

    for _ in range(5):
        t = conditional_probs(ch, haar_random_basis(2, rng))
        assert np.allclose(t, 0.5, atol=1e-10)


def test_affine_to_kraus_gad_z_errors():
    ch = affine_to_kraus(gad_affine(0.36, 1.0))
    t = conditional_probs(ch, eigenbasis(SIGMA_Z, "z"))
    # input |0> (excited Bloch +z) is noise-free, input |1> decays with 0.36
    assert t[1, 0] == pytest.approx(0.0, abs=1e-10)
    assert t[0, 1] == pytest.approx(0.36, abs=1e-10)


def test_affine_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(200):
        ch = random_cp_affine(rng)
        lam, t = kraus_to_affine(affine_to_kraus(ch))
        assert np.allclose(np.diag(lam), ch.lambdas, atol=1e-9)
        assert np.allclose(lam - np.diag(np.diag(lam)), 0.0, atol=1e-9)
        assert np.allclose(t, ch.shift, atol=1e-9)


def test_cp_inequality_matches_choi_psd():
    # the two complete-positivity tests agree outside a 1e-8 boundary band
    rng = np.random.default_rng(8)
    pts = rng.uniform(-1, 1, size=(10_000, 4))
    checked = 0
    for l1, l2, l3, t3 in pts:
        margin = min(
            (1 + l3) ** 2 - t3**2 - (l1 + l2) ** 2,
            (1 - l3) ** 2 - t3**2 - (l1 - l2) ** 2,
        )
        if abs(margin) <= 1e-8:
            continue
        blocks = [
            np.array([[1 + l3 + t3, l1 + l2], [l1 + l2, 1 + l3 - t3]]) / 4,
            np.array([[1 - l3 + t3, l1 - l2], [l1 - l2, 1 - l3 - t3]]) / 4,
        ]
        min_eig = min(np.linalg.eigvalsh(b).min() for b in blocks)
        checked += 1
        if margin > 0:
            assert min_eig > -1e-8
        else:
            assert min_eig < 1e-8
    assert checked > 9000


def test_zoo_constructors_cptp_on_grids():
    grid = np.linspace(0.0, 1.0, 15)
    for g in grid:
        for p in grid:
            assert is_cptp(affine_to_kraus(gad_affine(g, p)), tol=1e-9).valid
    for g in grid:
        for s in np.linspace(-1, 1, 15) * np.sqrt(1 - g):
            assert is_cptp(affine_to_kraus(stretched_affine(g, s)), tol=1e-9).valid
    for a in np.linspace(0, np.pi / 2, 10):
        for b in np.linspace(a, np.pi / 2, 10):
            assert is_cptp(affine_to_kraus(extremal_affine(a, b)), tol=1e-9).valid
    for g1 in np.linspace(0, 1, 15):
        for g2 in np.linspace(0, 1, 15):
            assert is_cptp(vshape_qutrit_channel(g1, g2), tol=1e-9).valid
    for p in np.linspace(0, 1, 8):
        for th in np.linspace(0, np.pi / 2, 5):
            for ph in np.linspace(0, 2 * np.pi, 6, endpoint=False):
                assert is_cptp(dephasing_axis_channel(p, th, ph), tol=1e-9).valid


def test_channel_spec_valid_gad():
    spec = ChannelSpec.from_dict({"kind": "gad", "params": {"gamma": 0.36, "p": 1.0}})
    assert spec.affine().t3 == pytest.approx(0.36)
    assert is_cptp(spec.build()).valid


def test_channel_spec_rejects_overstretched():
    with pytest.raises(ValueError, match="sqrt"):
        ChannelSpec.from_dict({"kind": "stretched", "params": {"gamma": 0.5, "s": 0.8}})


def test_channel_spec_rejects_simplex_violation():
    with pytest.raises(ValueError, match="simplex"):
        ChannelSpec.from_dict({"kind": "pauli", "params": {"px": 0.6, "py": 0.6, "pz": 0.0}})


def test_channel_spec_rejects_unknown_kind_and_params():
    with pytest.raises(ValueError, match="unknown channel kind"):
        ChannelSpec.from_dict({"kind": "mystery", "params": {}})
    with pytest.raises(ValueError, match="unknown parameter"):
        ChannelSpec.from_dict({"kind": "gad", "params": {"gamma": 0.1, "p": 0.5, "zeta": 1}})
    with pytest.raises(ValueError, match="missing parameter"):
        ChannelSpec.from_dict({"kind": "gad", "params": {"gamma": 0.1}})


def test_channel_spec_kraus_round_trip():
    ops = pauli_channel(0.15, 0.05, 0.1).operators
    doc = {
        "kind": "kraus",
        "params": {
            "dim": 2,
            "operators": [[[c.real, c.imag] for c in op.reshape(-1)] for op in ops],
        },
    }
    spec = ChannelSpec.from_dict(doc)
    rebuilt = spec.build()
    for a, b in zip(rebuilt.operators, ops):
        assert np.allclose(a, b)


def test_channel_spec_rejects_non_cptp_kraus():
    doc = {
        "kind": "kraus",
        "params": {"dim": 2, "operators": [[[1 / np.sqrt(2), 0], [0, 0], [0, 0], [1 / np.sqrt(2), 0]]]},
    }
    with pytest.raises(ValueError, match="not CPTP"):
        ChannelSpec.from_dict(doc)
    # but parse succeeds with the gate off
    spec = ChannelSpec.from_dict(doc, require_cptp=False)
    assert not is_cptp(spec.build(require_cptp=False)).valid
