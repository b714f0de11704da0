import math

import numpy as np
import pytest

from deqfi.channels import apply, apply_to_operator, paper_channel, pd_channel_apply
from deqfi.classify import is_hdp, is_shp_decomposition, is_sio_decomposition
from deqfi.core import (
    BlochVector,
    bloch_from_density,
    density_from_bloch,
    hamming_mode,
    pure,
    uniform_superposition,
)
from deqfi.fisher import dephasing_qfi
from deqfi.hamming import enumerate_hdf
from deqfi.sampling import c1c2_mixture, random_bloch, random_density, random_hdp_channel
from deqfi.transform import (
    ConeQuery,
    MergeSpec,
    check_c1_c2,
    conditional_probabilities,
    cone_boundary,
    cone_radius_by_search,
    cone_transform,
    counterexample_state,
    extreme_cone_angles,
    extreme_cone_channel,
    golden_transform,
    hdp_cone_contains,
    hdp_offdiag_bound,
    hdp_unitary,
    max_cone_radius,
    merge_channel,
    random_shp,
)
from oracles import cone_radius


def test_cone_radius_matches_region_formula():
    rng = np.random.default_rng(0)
    for _ in range(200):
        b = random_bloch(rng)
        zt = rng.uniform(-1, 1)
        assert max_cone_radius(b, zt) == pytest.approx(cone_radius(b.r, b.z, zt), abs=1e-12)
        if cone_radius_by_search(b, zt) >= 0:
            assert cone_radius_by_search(b, zt, 4001) <= max_cone_radius(b, zt) + 1e-12


def test_cone_examples():
    src = (0.6, 0, 0.6)
    assert hdp_cone_contains(ConeQuery(src, (0.6, 0, 0.3)))
    assert not hdp_cone_contains(ConeQuery(src, (0.7, 0, 0.3)))
    assert hdp_cone_contains(ConeQuery(src, (0.0, 0.6, -0.6)))
    with pytest.raises(ValueError):
        ConeQuery(src, (1, 1, 0))


@pytest.mark.parametrize("z, zt", [(0.6, 0.3), (0.6, -0.9), (0.6, 0.0), (0.0, 0.5), (-0.4, 0.8), (0.2, 1.0)])
def test_extreme_channel_saturates(z, zt):
    src = BlochVector(0.5 * math.sqrt(1 - z * z), 0, z)
    tgt = BlochVector(0.0, max_cone_radius(src, zt), zt)
    ch = extreme_cone_channel(ConeQuery(src, tgt))
    assert is_hdp(ch).is_member
    out = bloch_from_density(apply(ch, density_from_bloch(src)))
    np.testing.assert_allclose(out, tgt, atol=1e-12)
    t0, t1 = extreme_cone_angles(z, zt)
    assert src.r * math.cos(t0 - t1) == pytest.approx(max_cone_radius(src, zt), abs=1e-12)


def test_extreme_channel_outside_cone():
    with pytest.raises(ValueError):
        extreme_cone_channel(ConeQuery((0.6, 0, 0.6), (0.7, 0, 0.3)))


def test_cone_transform_exact():
    rng = np.random.default_rng(5)
    for _ in range(100):
        src, tgt = random_bloch(rng), random_bloch(rng)
        q = ConeQuery(src, tgt)
        if not hdp_cone_contains(q):
            continue
        out = bloch_from_density(apply(cone_transform(q), density_from_bloch(src)))
        np.testing.assert_allclose(out, tgt, atol=1e-10)


def test_cone_boundary_rows():
    rows = cone_boundary((0.6, 0, 0.6), np.linspace(-1, 1, 41))
    for z, r in rows:
        assert r == pytest.approx(cone_radius(0.6, 0.6, z), abs=1e-12)


def test_counterexample_bound():
    rho = counterexample_state()
    p = np.zeros((4, 4))
    p[0, 0] = p[1, 1] = p[1, 2] = p[3, 3] = 1
    assert hdp_offdiag_bound(rho, 0, 1, p) == pytest.approx(math.sqrt(2) / 4, abs=1e-12)
    with pytest.raises(ValueError):
        hdp_offdiag_bound(rho, 0, 1, np.ones((4, 4)))


def test_offdiag_bound_for_generated_channels():
    for seed in range(40):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 3))
        ch = random_hdp_channel(n, rng)
        rho = random_density(n, rng)
        out = apply(ch, rho)
        p = conditional_probabilities(ch)
        for i in range(1 << n):
            assert hdp_offdiag_bound(rho, i, i, p) == pytest.approx(out[i, i].real, abs=1e-12)
            for j in range(i + 1, 1 << n):
                assert abs(out[i, j]) <= hdp_offdiag_bound(rho, i, j, p) + 1e-9


def test_hamming_mode_independence():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        ch = random_hdp_channel(n, rng)
        rho = random_density(n, rng)
        out = apply(ch, rho)
        for h in range(n + 1):
            np.testing.assert_allclose(apply_to_operator(ch, hamming_mode(rho, h)), hamming_mode(out, h), atol=1e-12)


def test_golden_examples():
    out = apply(golden_transform([1, 0]), uniform_superposition(1))
    np.testing.assert_allclose(out, np.diag([1, 0]), atol=1e-12)
    ghz = np.array([1, 0, 0, 1]) / math.sqrt(2)
    ch = golden_transform(ghz)
    assert is_shp_decomposition(ch).is_member
    np.testing.assert_allclose(apply(ch, uniform_superposition(2)), pure(ghz), atol=1e-12)
    plus = uniform_superposition(2, [0.1, 0.2, 0.3, 0.4])
    ch = golden_transform(np.exp(-1j * np.array([0.1, 0.2, 0.3, 0.4])) / 2, [0.1, 0.2, 0.3, 0.4])
    np.testing.assert_allclose(apply(ch, plus), plus, atol=1e-12)
    with pytest.raises(ValueError):
        golden_transform([1, 1])


def test_golden_branch_probabilities():
    eta = [0.3, 1.0]
    psi = np.array([0.6, 0.8j])
    ch = golden_transform(psi, eta)
    src = uniform_superposition(1, eta)
    for k in ch.kraus:
        assert np.trace(k @ src @ k.conj().T).real == pytest.approx(0.5)


def test_hdp_unitary_examples():
    f_id = enumerate_hdf(1)[0]
    u = hdp_unitary(f_id, [0, 0.4])
    np.testing.assert_allclose(u.kraus[0], paper_channel("U_phase", phi=0.4).kraus[0])
    v = hdp_unitary((1, 0, 3, 2))
    np.testing.assert_allclose(v.kraus[0], paper_channel("V_swap").kraus[0])
    with pytest.raises(ValueError):
        hdp_unitary((0, 1, 3, 2))


def test_hdp_unitaries_commute_with_pd_and_preserve_qfi():
    rng = np.random.default_rng(1)
    for f in enumerate_hdf(2):
        u = hdp_unitary(f, rng.uniform(0, 6, 4))
        assert is_hdp(u).is_member and is_shp_decomposition(u).is_member
        rho = random_density(2, rng)
        k = u.kraus[0]
        np.testing.assert_allclose(
            pd_channel_apply(2, 0.7, k @ rho @ k.conj().T), k @ pd_channel_apply(2, 0.7, rho) @ k.conj().T, atol=1e-12
        )
        assert dephasing_qfi(apply(u, rho), 0.5) == pytest.approx(dephasing_qfi(rho, 0.5), abs=1e-9)


def test_check_c1_c2():
    rho, _, _, _ = c1c2_mixture(3, 0)
    c, pairing = check_c1_c2(rho)
    assert c == 3 and pairing == {x: 7 - x for x in range(4)}
    assert check_c1_c2(pure(np.array([0, 1, 1, 0]) / math.sqrt(2))) == (2, {1: 2})
    assert check_c1_c2(counterexample_state()) is None
    assert check_c1_c2(np.eye(4) / 4) is None


def test_merge_channel():
    rho, zeta, _, _ = c1c2_mixture(2, 3)
    spec = MergeSpec.optimal(rho, 0, 3)
    ch = merge_channel(spec)
    assert is_hdp(ch).is_member
    out = apply(ch, rho)
    assert abs(out[0, 3]) == pytest.approx(abs(rho[0, 3]) + abs(rho[1, 2]))
    np.testing.assert_allclose(np.abs(out), np.abs(pure([math.cos(zeta), 0, 0, math.sin(zeta)])), atol=1e-12)


def _single_pair_state(phase=0.8):
    """Coherence only between |1> and |2>, so the target pair (0, 3) carries none."""
    v = np.array([0, 1, np.exp(1j * phase), 0]) / math.sqrt(2)
    return 0.6 * pure(v) + 0.4 * np.diag([0.1, 0.2, 0.3, 0.4])


def test_merge_general_probabilities():
    rho = _single_pair_state()
    spec = MergeSpec(rho, 0, 3, {1: 2}, p_ix={1: 0.5}, p_jy={1: 0.3}, p_jx={1: 0.4}, p_iy={1: 0.6})
    ch = merge_channel(spec)
    assert is_hdp(ch).is_member
    expect = (math.sqrt(0.5 * 0.3) + math.sqrt(0.4 * 0.6)) * abs(rho[1, 2])
    assert apply(ch, rho)[0, 3] == pytest.approx(expect, abs=1e-12)


def test_merge_completion_term_when_target_is_a_pair():
    # the completion K0 keeps sqrt(r_i r_j) rho_ij when (i, j) is itself a coherent pair
    rho, _, _, _ = c1c2_mixture(2, 4)
    spec = MergeSpec(rho, 0, 3, {0: 3, 1: 2}, p_ix={0: 0.5, 1: 0.2}, p_jy={0: 0.3, 1: 0.9},
                     p_jx={0: 0.4, 1: 0.1}, p_iy={0: 0.6, 1: 0.05})
    ch = merge_channel(spec)
    assert is_hdp(ch).is_member
    paired = sum(
        (math.sqrt(spec.p_ix[x] * spec.p_jy[x]) + math.sqrt(spec.p_jx[x] * spec.p_iy[x])) * abs(rho[x, y])
        for x, y in spec.pairing.items()
    )
    r0, r3 = 1 - 0.5 - 0.4, 1 - 0.3 - 0.6
    assert apply(ch, rho)[0, 3] == pytest.approx(paired + math.sqrt(r0 * r3) * rho[0, 3], abs=1e-12)


def test_merge_zero_probabilities_and_errors():
    rho = _single_pair_state()
    zero = {1: 0.0}
    spec = MergeSpec(rho, 0, 3, {1: 2}, zero, zero, zero, zero)
    assert abs(apply(merge_channel(spec), rho)[0, 3]) == pytest.approx(0, abs=1e-12)
    mixture, _, _, _ = c1c2_mixture(2, 5)
    with pytest.raises(ValueError):
        merge_channel(MergeSpec(mixture, 0, 1, {0: 3, 1: 2}))
    with pytest.raises(ValueError):
        merge_channel(MergeSpec(mixture, 0, 3, {0: 3}))
    with pytest.raises(ValueError):
        merge_channel(MergeSpec(counterexample_state(), 0, 1, {0: 1}))
    bad = MergeSpec(mixture, 0, 3, {0: 3, 1: 2}, {0: 0.8, 1: 0}, {0: 0, 1: 0}, {0: 0.8, 1: 0}, {0: 0, 1: 0})
    with pytest.raises(ValueError):
        merge_channel(bad)


def test_random_shp():
    for seed in range(10):
        ch = random_shp(3, 3, seed)
        assert is_shp_decomposition(ch).is_member and is_sio_decomposition(ch).is_member
        assert is_hdp(ch).is_member
        rho = random_density(3, seed)
        assert dephasing_qfi(apply(ch, rho), 0.5) <= dephasing_qfi(rho, 0.5) + 1e-8
    with pytest.raises(ValueError):
        random_shp(2, 0)
