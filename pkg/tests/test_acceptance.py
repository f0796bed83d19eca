"""Acceptance gate: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print.  The last two tests need external image datasets and skip unless
HNE_STATUE_FACE_DIR / HNE_TEAPOT_DIR point at directories of images.
"""

import os
import time

import numpy as np
import pytest

from hne import (
    DataMatrix,
    EmbedConfig,
    Variant,
    WeightSet,
    avg_reconstruction_error,
    build_alignment,
    build_hierarchic,
    check_null_vector,
    embed,
    embed_data,
    embedding_quality,
    hierarchic_residuals,
    load_matrix,
    solve_bhne,
    solve_ihne,
    solve_inner,
    solve_local,
    solve_rhne,
    swiss_roll,
)
from hne.pipeline import build_weights
from oracles import dense_spectrum, kkt_weights

pytestmark = pytest.mark.filterwarnings("ignore::hne.DegenerateSpectrumWarning")


def report(number, label, elapsed, ok):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number}: {label} ({elapsed:.1f}s)")
    assert ok, f"criterion {number} failed: {label}"


def all_variant_weights(data, idx):
    inner = solve_inner(data, idx, 1e-3)
    return {
        Variant.LLE: WeightSet(inner=inner, outer=None, variant=Variant.LLE),
        Variant.IHNE: solve_ihne(data, idx, inner, 1e-3),
        Variant.RHNE: solve_rhne(data, idx, inner, 1e-3),
        Variant.BHNE: solve_bhne(data, idx, inner, 1e-3, rotations=2),
    }


def random_cases(seed, count, n_max=100, k_choices=(2, 3, 4, 5, 6), d_range=(3, 10)):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.choice(k_choices))
        n = int(rng.integers(max(k + 2, 10), n_max + 1))
        D = int(rng.integers(d_range[0], d_range[1] + 1))
        data = DataMatrix(rng.standard_normal((n, D)))
        yield data, build_hierarchic(data, k)


def test_criterion_1_null_vector_invariant():
    t0 = time.time()
    worst = 0.0
    data, _ = swiss_roll(300, seed=0)
    idx = build_hierarchic(data, 5)
    for ws in all_variant_weights(data, idx).values():
        worst = max(worst, check_null_vector(build_alignment(idx, ws, 1.0)))
    for data, idx in random_cases(101, 20):
        for ws in all_variant_weights(data, idx).values():
            worst = max(worst, check_null_vector(build_alignment(idx, ws, 1.0)))
    elapsed = time.time() - t0
    report(1, f"max |G e| = {worst:.2e} <= 1e-8 over all variants",
           elapsed, worst <= 1e-8 and elapsed < 10.0)


def test_criterion_2_constraint_suite():
    t0 = time.time()
    worst = 0.0
    for data, idx in random_cases(202, 50):
        weights = all_variant_weights(data, idx)
        for ws in weights.values():
            worst = max(worst, np.abs(ws.inner.sum(axis=1) - 1.0).max())
        for variant in (Variant.IHNE, Variant.BHNE):
            worst = max(worst, np.abs(weights[variant].outer.sum(axis=2) - 1.0).max())
        rh = weights[Variant.RHNE]
        joint = (rh.inner[:, :, None] * rh.outer).sum(axis=(1, 2))
        worst = max(worst, np.abs(joint - 1.0).max())
    elapsed = time.time() - t0
    report(2, f"max constraint deviation = {worst:.2e} <= 1e-10",
           elapsed, worst <= 1e-10 and elapsed < 10.0)


def test_criterion_3_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(303)
    worst = 0.0
    checked = 0

    def compare(got, center, neighbors, sigma_reg):
        # the closed-form oracle only exists when the KKT system is
        # nonsingular; duplicated hierarchic neighbors can break that at
        # sigma_reg = 0, so those instances are skipped rather than faked
        nonlocal worst, checked
        try:
            expected = kkt_weights(center, neighbors, sigma_reg)
        except np.linalg.LinAlgError:
            return
        worst = max(worst, float(np.abs(np.asarray(got) - expected).max()))
        checked += 1

    for sigma_reg in (0.0, 1e-3):
        # plain local solves, m <= 6 and D <= 5
        for _ in range(25):
            D = int(rng.integers(1, 6))
            m_cap = min(6, D + 1) if sigma_reg == 0.0 else 6
            m = int(rng.integers(1, m_cap + 1))
            nb = rng.standard_normal((m, D))
            c = rng.standard_normal(D)
            compare(solve_local(c, nb, sigma_reg), c, nb, sigma_reg)
        # IHNE blocks, RHNE joint solves, BHNE final-sweep blocks
        for _ in range(4):
            n = int(rng.integers(10, 25))
            data = DataMatrix(rng.standard_normal((n, 5)))
            idx = build_hierarchic(data, 2)  # k^2 = 4 <= 6 joint unknowns
            inner = solve_inner(data, idx, 1e-3)
            ih = solve_ihne(data, idx, inner, sigma_reg)
            rh = solve_rhne(data, idx, inner, sigma_reg)
            bh = solve_bhne(data, idx, inner, sigma_reg, rotations=2)
            X = data.points
            for i in range(n):
                for l in range(2):
                    compare(ih.outer[i, l], X[i], X[idx.outer[i, l]], sigma_reg)
                joint = (rh.inner[i][:, None] * rh.outer[i]).reshape(4)
                compare(joint, X[i], X[idx.outer[i].reshape(4)], sigma_reg)
                # Gauss-Seidel leaves the last-updated block exactly optimal
                w = bh.inner[i]
                if abs(w[1]) > 1e-12:
                    recon = np.einsum("lj,ljd->ld", bh.outer[i], X[idx.outer[i]])
                    target = X[i] - (w @ recon - w[1] * recon[1])
                    compare(bh.outer[i, 1], target / w[1],
                            X[idx.outer[i, 1]], sigma_reg)
    elapsed = time.time() - t0
    report(3, f"max oracle deviation = {worst:.2e} <= 1e-10 "
              f"({checked} comparisons)", elapsed,
           worst <= 1e-10 and checked >= 300 and elapsed < 5.0)


def test_criterion_4_spectral_contract():
    t0 = time.time()
    ok = True
    detail = []
    data, _ = swiss_roll(200, seed=1)
    idx = build_hierarchic(data, 6)
    ws = build_weights(data, idx, EmbedConfig(k=6, d=2, variant=Variant.RHNE))
    res = embed(build_alignment(idx, ws, 1.0), 2)
    orth = np.abs(res.Y @ res.Y.T - np.eye(2)).max()
    ok &= orth <= 1e-8
    detail.append(f"|YY^T - I| = {orth:.2e}")
    ok &= res.diagnostics.eigen_residuals.max() <= 1e-8
    detail.append(f"eigen residual = {res.diagnostics.eigen_residuals.max():.2e}")
    overlap_bound = 1e-6 * np.sqrt(res.n)
    ok &= res.diagnostics.constant_overlap.max() <= overlap_bound
    detail.append(f"constant overlap = {res.diagnostics.constant_overlap.max():.2e}")
    # full-spectrum agreement with a dense oracle on a tiny instance
    rng = np.random.default_rng(404)
    tiny = DataMatrix(rng.standard_normal((12, 4)))
    tidx = build_hierarchic(tiny, 3)
    tws = build_weights(tiny, tidx, EmbedConfig(k=3, d=2, variant=Variant.IHNE))
    am = build_alignment(tidx, tws, 1.0)
    tres = embed(am, 11)
    vals, _ = dense_spectrum(am.G)
    spectrum_gap = np.abs(tres.eigenvalues - vals[1:]).max()
    ok &= spectrum_gap <= 1e-8
    detail.append(f"oracle spectrum gap = {spectrum_gap:.2e}")
    elapsed = time.time() - t0
    report(4, "; ".join(detail), elapsed, ok and elapsed < 5.0)


def test_criterion_5_bhne_monotonicity():
    t0 = time.time()
    worst = -np.inf
    for data, idx in random_cases(505, 20, n_max=40, k_choices=(2, 3, 4), d_range=(2, 6)):
        inner = solve_inner(data, idx, 1e-3)
        _, obj = solve_bhne(data, idx, inner, 0.0, rotations=3, return_objectives=True)
        worst = max(worst, float(np.diff(obj[:, 1:], axis=1).max()))
    elapsed = time.time() - t0
    report(5, f"max objective increase across sweeps = {worst:.2e} <= 1e-9",
           elapsed, worst <= 1e-9)


def test_criterion_6_invariance_suite():
    t0 = time.time()
    rng = np.random.default_rng(606)
    worst = 0.0
    for _ in range(5):
        n, D, k = 30, 4, 3
        base = DataMatrix(rng.standard_normal((n, D)))
        idx = build_hierarchic(base, k)
        shift = rng.uniform(-20.0, 20.0, size=D)
        Q, r = np.linalg.qr(rng.standard_normal((D, D)))
        Q = Q * np.sign(np.diag(r))
        moved = DataMatrix((base.points + shift) @ Q.T)
        w0 = all_variant_weights(base, idx)
        w1 = all_variant_weights(moved, idx)
        for variant in Variant:
            worst = max(worst, np.abs(w0[variant].inner - w1[variant].inner).max())
            if variant is not Variant.LLE:
                worst = max(worst, np.abs(w0[variant].outer - w1[variant].outer).max())
    elapsed = time.time() - t0
    report(6, f"max weight drift under translation+rotation = {worst:.2e} <= 1e-9",
           elapsed, worst <= 1e-9)


def test_criterion_7_sparse_swiss_roll_trustworthiness():
    t0 = time.time()
    scores = {name: [] for name in ("lle_k5", "lle_k6", "ihne", "rhne", "bhne")}
    configs = {
        "lle_k5": EmbedConfig(k=5, d=2, variant=Variant.LLE),
        "lle_k6": EmbedConfig(k=6, d=2, variant=Variant.LLE),
        "ihne": EmbedConfig(k=5, d=2, variant=Variant.IHNE),
        "rhne": EmbedConfig(k=5, d=2, variant=Variant.RHNE),
        "bhne": EmbedConfig(k=5, d=2, variant=Variant.BHNE),
    }
    for seed in range(5):
        data, intrinsic = swiss_roll(300, seed=seed)
        for name, cfg in configs.items():
            res = embed_data(data, cfg)
            scores[name].append(embedding_quality(res, intrinsic, 10)["trustworthiness"])
    means = {name: float(np.mean(vals)) for name, vals in scores.items()}
    baseline = max(means["lle_k5"], means["lle_k6"])
    ok = all(means[v] > baseline for v in ("ihne", "rhne", "bhne"))
    elapsed = time.time() - t0
    detail = ", ".join(f"{name}={val:.4f}" for name, val in means.items())
    report(7, f"seed-averaged trustworthiness: {detail}", elapsed, ok and elapsed < 60.0)


def test_criterion_8_reconstruction_ordering():
    t0 = time.time()
    data, _ = swiss_roll(1000, seed=0)
    idx = build_hierarchic(data, 5)
    inner = solve_inner(data, idx, 1e-3)
    lle = WeightSet(inner=inner, outer=None, variant=Variant.LLE)
    rhne = solve_rhne(data, idx, inner, 1e-3)
    lle_err, _ = hierarchic_residuals(data, idx, lle)
    _, rhne_err = hierarchic_residuals(data, idx, rhne)
    ratio = lle_err.mean() / rhne_err.mean()
    elapsed = time.time() - t0
    report(8, f"LLE inner {lle_err.mean():.4f} vs RHNE hierarchic "
              f"{rhne_err.mean():.4f} ({ratio:.1f}x >= 2x)", elapsed, ratio >= 2.0)


def _external_table(directory, k_values, rotations=2):
    data = DataMatrix(load_matrix(directory).points / 255.0)
    table = {}
    for k in k_values:
        idx = build_hierarchic(data, k)
        inner = solve_inner(data, idx, 1e-3)
        table["lle", k] = avg_reconstruction_error(
            data, idx, WeightSet(inner=inner, outer=None, variant=Variant.LLE))
        table["ihne", k] = avg_reconstruction_error(
            data, idx, solve_ihne(data, idx, inner, 1e-3))
        table["rhne", k] = avg_reconstruction_error(
            data, idx, solve_rhne(data, idx, inner, 1e-3))
        table["bhne", k] = avg_reconstruction_error(
            data, idx, solve_bhne(data, idx, inner, 1e-3, rotations=rotations))
    return table


@pytest.mark.skipif(
    "HNE_STATUE_FACE_DIR" not in os.environ,
    reason="set HNE_STATUE_FACE_DIR to a directory of the 698 64x64 face images",
)
def test_criterion_9_statue_face_table():
    t0 = time.time()
    ks = (4, 6, 8, 10, 12)
    table = _external_table(os.environ["HNE_STATUE_FACE_DIR"], ks)
    ordering = all(
        table[m, k] < table["lle", k] for m in ("ihne", "rhne", "bhne") for k in ks
    )
    target = 3.0342
    lle_k4 = table["lle", 4]
    calibrated = abs(lle_k4 - target) <= 0.10 * target
    elapsed = time.time() - t0
    report(9, f"ordering holds: {ordering}; LLE k=4 = {lle_k4:.4f} "
              f"(target {target} +/- 10%)", elapsed,
           ordering and calibrated and elapsed < 300.0)


@pytest.mark.skipif(
    "HNE_TEAPOT_DIR" not in os.environ,
    reason="set HNE_TEAPOT_DIR to a directory of the 400 teapot images",
)
def test_criterion_10_teapot_table():
    t0 = time.time()
    ks = (4, 5, 6, 7, 8)
    table = _external_table(os.environ["HNE_TEAPOT_DIR"], ks)
    ordering = all(
        table[m, k] < table["lle", k] for m in ("ihne", "rhne", "bhne") for k in ks
    )
    target = 0.0181
    rhne_k4 = table["rhne", 4]
    calibrated = abs(rhne_k4 - target) <= 0.25 * target
    elapsed = time.time() - t0
    report(10, f"ordering holds: {ordering}; RHNE k=4 = {rhne_k4:.4f} "
               f"(target {target} +/- 25%)", elapsed, ordering and calibrated)
