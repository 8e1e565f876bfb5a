import numpy as np
import pytest

from rankmix.estimation import (
    ConcentrationConstants,
    ObservationMatrix,
    compute_svd,
    delta_bound,
    estimate_p_hat,
    hsvt,
    hsvt_projector,
    k_of_p,
    select_threshold,
    spectral_gap_check,
)
from rankmix.generators import (
    ComponentSpec,
    MixtureSpec,
    cluster_mean,
    mask,
    normal_utilities,
    sample_mixture,
)
from rankmix.rankings import Permutation, embed

# frozen: 0.8 / (2 ln 9), computed with stdlib math
K_OF_09 = 0.18204784532536747
# frozen: (sqrt(0.5) + 0.5*sqrt(30))*sqrt(30**4) + (sqrt(30) + 0.25)*(30 + sqrt(30)*30)
DELTA_N30P4 = 4214.043570905577


def _stack(samples):
    return ObservationMatrix.from_samples(samples)


def _two_perm_matrix(n=10, copies=(30, 20), seed=3):
    """Noiseless two-cluster observation matrix: rows are two fixed embeddings."""
    rng = np.random.default_rng(seed)
    p1 = Permutation(rng.permutation(n))
    p2 = Permutation(rng.permutation(n))
    e1, e2 = embed(p1).values, embed(p2).values
    rows = [e1] * copies[0] + [e2] * copies[1]
    return np.array(rows), e1, e2


# ------------------------------------------------------------------- p-hat

def test_p_hat_fully_observed():
    y, _, _ = _two_perm_matrix()
    obs = ObservationMatrix.from_dense(y)
    assert estimate_p_hat(obs) == 1.0


def test_p_hat_floor_when_nothing_observed():
    obs = ObservationMatrix.from_dense(np.full((10, 10), np.nan))
    assert estimate_p_hat(obs) == 0.01


def test_p_hat_matches_observed_fraction():
    rng = np.random.default_rng(0)
    vals = np.where(rng.random((40, 30)) < 0.5, 0.5, -0.5)
    drop = rng.random((40, 30)) < 0.25
    vals[drop] = np.nan
    obs = ObservationMatrix.from_dense(vals)
    want = (drop.size - int(drop.sum())) / drop.size
    assert estimate_p_hat(obs) == pytest.approx(want, abs=0)


def test_observation_matrix_fill_and_validation():
    vals = np.array([[0.5, np.nan], [-0.5, 0.5]])
    obs = ObservationMatrix.from_dense(vals)
    assert obs.N == 2 and obs.d == 2
    assert obs.values[0, 1] == 0.0  # MISSING filled with exactly 0
    assert obs.mask.tolist() == [[True, False], [True, True]]
    with pytest.raises(ValueError):
        ObservationMatrix.from_dense(np.array([[0.4, 0.5]]))


# --------------------------------------------------------------------- svd

def test_svd_contract():
    rng = np.random.default_rng(5)
    y = rng.normal(size=(20, 12))
    svd = compute_svd(y)
    s = svd.singular_values
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    assert np.allclose(svd.U.T @ svd.U, np.eye(12), atol=1e-8)
    assert np.allclose(svd.Vt @ svd.Vt.T, np.eye(12), atol=1e-8)
    recon = (svd.U * s) @ svd.Vt
    assert np.linalg.norm(y - recon) / np.linalg.norm(y) <= 1e-8


# -------------------------------------------------------------------- hsvt

def test_hsvt_zero_threshold_full_observation_reproduces_y():
    y, _, _ = _two_perm_matrix()
    obs = ObservationMatrix.from_dense(y)
    est = hsvt(obs, 0.0)
    assert est.p_hat == 1.0
    assert np.allclose(est.m_hat, y, atol=1e-10)


def test_hsvt_threshold_above_top_singular_value_gives_zero():
    y, _, _ = _two_perm_matrix()
    obs = ObservationMatrix.from_dense(y)
    top = compute_svd(obs).singular_values[0]
    est = hsvt(obs, top * 1.01)
    assert est.kept_rank == 0
    assert np.allclose(est.m_hat, 0.0)


def test_hsvt_exact_low_rank_recovery():
    # rank-2 noiseless matrix, p=1: thresholding between sigma_2 and sigma_3=0
    # must reproduce the matrix exactly
    y, _, _ = _two_perm_matrix(n=10, copies=(30, 20))
    obs = ObservationMatrix.from_dense(y)
    svd = compute_svd(obs)
    t1 = select_threshold(svd, target_rank=2)
    est = hsvt(obs, t1, svd=svd)
    assert est.kept_rank == 2
    assert np.max(np.abs(est.m_hat - y)) <= 1e-8


def test_hsvt_estimate_rank_invariant():
    y, _, _ = _two_perm_matrix()
    obs = ObservationMatrix.from_dense(y)
    est = hsvt(obs, select_threshold(compute_svd(obs), target_rank=2))
    s = np.linalg.svd(est.m_hat, compute_uv=False)
    assert s[est.kept_rank] <= 1e-8 * s[0]


def test_hsvt_idempotent_rank():
    y, _, _ = _two_perm_matrix()
    obs = ObservationMatrix.from_dense(y)
    svd = compute_svd(obs)
    t1 = select_threshold(svd, target_rank=2)
    est = hsvt(obs, t1, svd=svd)
    # the denoised matrix has singular values sigma_j / p_hat; rescale t1 the
    # same way and rank must be preserved
    again = hsvt(est.m_hat, t1 / est.p_hat)
    assert again.kept_rank == est.kept_rank


# ------------------------------------------------------------- select t1

def test_select_threshold_gap_heuristic_example():
    y = np.diag([10.0, 9.0, 0.1, 0.05])
    t1 = select_threshold(compute_svd(y))
    assert t1 == pytest.approx(4.55, abs=1e-12)


def test_select_threshold_target_rank_examples():
    y = np.diag([5.0, 1.0])
    assert select_threshold(compute_svd(y), target_rank=1) == pytest.approx(3.0)
    # target equal to full rank: sigma_{r+1} treated as 0
    assert select_threshold(compute_svd(y), target_rank=2) == pytest.approx(0.5)


def test_select_threshold_errors():
    y = np.ones((1, 5))
    with pytest.raises(ValueError):
        select_threshold(compute_svd(y))
    y2 = np.diag([5.0, 1.0])
    with pytest.raises(ValueError):
        select_threshold(compute_svd(y2), target_rank=3)
    with pytest.raises(ValueError):
        select_threshold(compute_svd(y2), target_rank=0)


def test_select_threshold_keeps_exactly_target_rank():
    rng = np.random.default_rng(8)
    y = rng.normal(size=(15, 10))
    obs_free = y  # plain array path
    svd = compute_svd(y)
    for r in range(1, 10):
        t1 = select_threshold(svd, target_rank=r)
        est = hsvt(obs_free, t1, svd=svd)
        assert est.kept_rank == r


# ------------------------------------------------------------------ k_of_p

def test_k_of_p_pinned_values():
    assert k_of_p(0.5) == 0.25
    assert k_of_p(0.0) == 0.0
    assert k_of_p(1.0) == 0.0
    assert k_of_p(0.9) == pytest.approx(K_OF_09, abs=1e-15)


def test_k_of_p_continuity_and_range():
    assert k_of_p(0.5 + 1e-9) == pytest.approx(0.25, abs=1e-6)
    assert k_of_p(0.5 - 1e-9) == pytest.approx(0.25, abs=1e-6)
    grid = np.linspace(0.0, 1.0, 201)
    vals = np.array([k_of_p(p) for p in grid])
    assert np.all(vals >= 0.0) and np.all(vals <= 0.25)
    # symmetric in p <-> 1-p
    assert k_of_p(0.3) == pytest.approx(k_of_p(0.7), abs=1e-15)


def test_k_of_p_rejects_out_of_range():
    with pytest.raises(ValueError):
        k_of_p(-0.1)
    with pytest.raises(ValueError):
        k_of_p(1.1)


# ------------------------------------------------------------- delta bound

def test_delta_bound_degenerate_point():
    assert delta_bound(N=1, n=1, p=0.0, tau_star=1.0) == pytest.approx(2.0)
    consts = ConcentrationConstants(C=2.0)
    assert delta_bound(N=1, n=1, p=0.0, tau_star=1.0, constants=consts) == pytest.approx(4.0)


def test_delta_bound_monotone():
    base = delta_bound(N=100, n=10, p=0.5, tau_star=2.0)
    assert delta_bound(N=200, n=10, p=0.5, tau_star=2.0) >= base
    assert delta_bound(N=100, n=20, p=0.5, tau_star=2.0) >= base
    assert delta_bound(N=100, n=10, p=0.5, tau_star=3.0) >= base


def test_delta_bound_frozen_two_path_value():
    got = delta_bound(N=30**4, n=30, p=0.5, tau_star=np.sqrt(30.0))
    assert got == pytest.approx(DELTA_N30P4, abs=1e-9)


# ------------------------------------------------------- spectral gap check

def test_spectral_gap_check_clean_case_passes():
    # no noise, full observation, tau*=0: every reported condition holds
    y, e1, e2 = _two_perm_matrix(n=20, copies=(200, 200), seed=11)
    obs = ObservationMatrix.from_dense(y)
    svd = compute_svd(obs)
    t1 = select_threshold(svd, target_rank=2)
    report = spectral_gap_check(obs, y, t1, tau_star=0.0, true_p=1.0)
    assert report.noise_norm <= 1e-8
    assert report.rank == 2
    assert report.p_exceeds_threshold
    assert report.t1_proper
    assert report.rank_preservation_predicted


def test_spectral_gap_check_reports_failure_without_raising():
    rng = np.random.default_rng(2)
    y = np.where(rng.random((50, 45)) < 0.5, 0.5, -0.5)
    obs = ObservationMatrix.from_dense(y)
    m = np.outer(np.ones(50), np.full(45, 1e-6))
    report = spectral_gap_check(obs, m, t1=5.0, tau_star=3.0, true_p=1.0)
    assert not report.p_exceeds_threshold
    assert not report.rank_preservation_predicted


def test_noise_norm_within_calibrated_delta():
    # Monte-Carlo: ||Y - pM||_2 <= Delta with C=3 and the generic tau*=sqrt(n-1)
    n, k, sigma, p, N = 30, 2, 0.3, 0.8, 1000
    consts = ConcentrationConstants(C=3.0)
    tau = np.sqrt(n - 1.0)
    for trial in range(20):
        comps = [
            ComponentSpec.gaussian(normal_utilities(n, rng_seed=100 + 10 * trial + j), sigma)
            for j in range(k)
        ]
        spec = MixtureSpec(comps, np.full(k, 1 / k))
        samples = mask(sample_mixture(spec, N, rng_seed=trial), p, rng_seed=1000 + trial)
        obs = ObservationMatrix.from_samples(samples)
        means = np.array([cluster_mean(c) for c in comps])
        m = means[[s.true_label for s in samples]]
        noise = np.linalg.norm(obs.values - p * m, 2)
        assert noise <= delta_bound(N=N, n=n, p=p, tau_star=tau, constants=consts)


# --------------------------------------------------- projector invariants

def test_hsvt_projector_is_contraction():
    rng = np.random.default_rng(21)
    y = rng.normal(size=(30, 18))
    svd = compute_svd(y)
    t = float(np.median(svd.singular_values))
    proj = hsvt_projector(svd, t)
    for _ in range(1000):
        w = rng.normal(size=18)
        assert np.linalg.norm(proj(w)) <= np.linalg.norm(w) * (1 + 1e-12)


def test_hsvt_rows_equal_projected_rows():
    y, _, _ = _two_perm_matrix(n=8, copies=(12, 9))
    rng = np.random.default_rng(31)
    y = y + 0.01 * rng.normal(size=y.shape)  # break exact degeneracy
    svd = compute_svd(y)
    t = float(svd.singular_values[1] * 0.9)
    est = hsvt(y, t, svd=svd)
    proj = hsvt_projector(svd, t)
    for i in range(y.shape[0]):
        # m_hat is rescaled by 1/p_hat; the row identity is about the
        # unrescaled thresholded matrix
        assert np.allclose(est.m_hat[i] * est.p_hat, proj(y[i]), atol=1e-10)


def test_rank_preservation_under_perturbation_window():
    # whenever ||Y-pM||_2 < t1 < sigma_r(pM) - ||Y-pM||_2, kept rank == rank(M)
    rng = np.random.default_rng(41)
    m, e1, e2 = _two_perm_matrix(n=16, copies=(150, 150), seed=13)
    noise = 0.4 * rng.normal(size=m.shape)
    y = m + noise
    e = np.linalg.norm(y - m, 2)
    s = np.linalg.svd(m, compute_uv=False)
    sigma_r = s[1]
    assert e < sigma_r - e, "test construction must satisfy the window"
    t1 = 0.5 * (e + (sigma_r - e))
    est = hsvt(y, t1)
    assert est.kept_rank == 2


def test_mean_of_filled_matrix_is_p_times_mean():
    # E[Y] = p*M entrywise once MISSING is replaced by 0
    spec = ComponentSpec.mnl([0.6, 0.0, -0.6, 0.3], beta=1.0)
    mix = MixtureSpec([spec], [1.0])
    p = 0.5
    mu = cluster_mean(spec)
    acc = np.zeros(mu.size)
    reps, N = 150, 100
    for rep in range(reps):
        samples = mask(sample_mixture(mix, N, rng_seed=rep), p, rng_seed=5000 + rep)
        obs = ObservationMatrix.from_samples(samples)
        acc += obs.values.mean(axis=0)
    avg = acc / reps
    assert np.max(np.abs(avg - p * mu)) <= 0.02
