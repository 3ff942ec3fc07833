"""Acceptance suite: the nine criteria at their stated tolerances.

Each test records one PASS/FAIL line (shown in the terminal summary and on
stdout with ``-s``) before asserting.
"""

import time

import numpy as np
import pytest

from gammadisc import (
    GammaTuple,
    canonical_extension,
    commutant,
    compute_q,
    decay_profile,
    extension_isomorphism,
    fundamental_operators,
    is_pure,
    lift_commutant,
    lift_intertwiner,
    random_gamma_tuple,
    theta,
    toeplitz_projection,
    toeplitz_space,
    verify_theorem1,
    verify_theorem2,
)
from gammadisc.dilation import isomorphism_residual, joint_spectrum_distance
from gammadisc.gamma import Certificate, classify_gamma_unitary
from gammadisc.matrixkit import adj, fro, opnorm
from gammadisc.toeplitz import choi_effros_check

import oracles
from conftest import ACCEPTANCE_LINES

PER_CLASS = 20


def _pure_instances():
    out = []
    for k in range(PER_CLASS):
        if k % 10 < 7:
            out.append(random_gamma_tuple(2 + k % 3, 1 + k % 10, "NormalInterior", 1000 + k))
        else:
            out.append(random_gamma_tuple(2, 2 + k % 9, "Ando2", 1000 + k))
    return out


def _boundary_instances():
    return [random_gamma_tuple(2 + k % 3, 1 + k % 10, "NormalBoundary", 2000 + k) for k in range(PER_CLASS)]


def _mixed_instances():
    return [random_gamma_tuple(2 + k % 3, 2 + k % 9, "MixedPurity", 3000 + k) for k in range(PER_CLASS)]


@pytest.fixture(scope="module")
def corpus():
    pure, boundary, mixed = _pure_instances(), _boundary_instances(), _mixed_instances()
    return {"pure": pure, "boundary": boundary, "mixed": mixed, "all": pure + boundary + mixed}


@pytest.fixture(scope="module")
def extensions(corpus):
    return [(t, canonical_extension(t)) for t in corpus["boundary"] + corpus["mixed"]]


def record(k: int, ok: bool, text: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {text}"
    ACCEPTANCE_LINES[k] = line
    print(line)


def test_criterion_1_theorem1_equivalence(corpus):
    start = time.perf_counter()
    disagreements = []
    expected = []
    for t in corpus["all"]:
        rep = verify_theorem1(t, 1e-8)
        values = rep["equivalence"].details["values"]
        if not rep.passed:
            disagreements.append(t.source)
        expected.append(values[1] == (not is_pure(t)))
    elapsed = time.perf_counter() - start
    pure_ok = all(not verify_theorem1(t)["q_nonzero"].details["value"] for t in corpus["pure"])
    ok = not disagreements and all(expected) and pure_ok and elapsed < 60.0
    record(
        1,
        ok,
        f"{len(corpus['all'])} instances, {len(disagreements)} disagreements, runtime {elapsed:.2f}s (limit 60s)",
    )
    assert ok, disagreements


def test_criterion_2_extension_identities(extensions):
    worst_ratio = 0.0
    boundary_bad = []
    for t, ext in extensions:
        res = ext.residuals()
        worst_ratio = max(worst_ratio, max(res.values()) / ext.scale())
        if not ext.boundary_ok(1e-7):
            boundary_bad.append(t.source)
    ok = worst_ratio < 1e-8 and not boundary_bad
    record(
        2,
        ok,
        f"{len(extensions)} non-pure instances, max residual/(1+norms) {worst_ratio:.2e} (< 1e-8), "
        f"{len(boundary_bad)} off-boundary spectra",
    )
    assert ok


def test_criterion_3_theorem2(extensions):
    failed = []
    worst = {}
    for t, _ in extensions:
        rep = verify_theorem2(t, tol=1e-7, samples=20, amp_samples=5, amp_tol=1e-6)
        dims = rep["dimension_match"].details
        if dims["commutant"] != dims["toeplitz"] or not rep.passed:
            failed.append((t.source, [c.name for c in rep.failures()]))
        for name in ("symbol_round_trip", "rho_isometric", "rho_2x2_isometric"):
            worst[name] = max(worst.get(name, 0.0), rep[name].residual)
    ok = not failed
    summary = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(3, ok, f"{len(extensions)} instances, exact dimension equality, {summary}")
    assert ok, failed


def test_criterion_4_phi_properties(corpus):
    small = [t for t in corpus["all"] if t.n <= 6]
    worst = dict(idempotence=0.0, choi=0.0, phi_identity=0.0, choi_effros=0.0)
    for t in small:
        phi = toeplitz_projection(t.P)
        worst["idempotence"] = max(worst["idempotence"], phi.idempotence_residual())
        worst["choi"] = max(worst["choi"], -phi.choi_min_eigenvalue())
        worst["phi_identity"] = max(worst["phi_identity"], fro(phi(np.eye(t.n)) - compute_q(t).Q))
        rep = choi_effros_check(phi, trials=50, seed=t.n, tol=1e-8)
        worst["choi_effros"] = max(worst["choi_effros"], rep["choi_effros_identities"].residual)
    ok = (
        worst["idempotence"] < 1e-9
        and worst["choi"] < 1e-9
        and worst["phi_identity"] < 1e-8
        and worst["choi_effros"] < 1e-8
    )
    record(
        4,
        ok,
        f"{len(small)} instances at n <= 6: idempotence {worst['idempotence']:.1e}, "
        f"Choi lambda_min {-worst['choi']:.1e}, |Phi(I) - Q| {worst['phi_identity']:.1e}, "
        f"Choi-Effros {worst['choi_effros']:.1e}",
    )
    assert ok


def test_criterion_5_decay(corpus):
    pure_bad, unitary_worst = [], 0.0
    for t in corpus["pure"]:
        for i in range(1, t.d):
            prof = decay_profile(t, i, 200)
            if not prof[-1] < 1e-6 * (prof[0] + 1):
                pure_bad.append((t.source, i, prof[-1]))
    for t in corpus["boundary"]:
        assert classify_gamma_unitary(t)
        for i in range(1, t.d):
            unitary_worst = max(unitary_worst, max(decay_profile(t, i, 200)))
    ok = not pure_bad and unitary_worst < 1e-9
    record(5, ok, f"{len(pure_bad)} pure profiles above bound, unitary profile max {unitary_worst:.1e} (< 1e-9)")
    assert ok, pure_bad


def test_criterion_6_fundamental_operators(corpus):
    worst = 0.0
    constructed = [t for t in corpus["all"] if t.certificate is Certificate.CONSTRUCTED]
    for t in constructed:
        fs = fundamental_operators(t)
        for i in range(1, t.d):
            worst = max(worst, fs.residuals[i - 1] / (1 + opnorm(t.s(i))))
    rng = np.random.default_rng(6)
    scalar_err = 0.0
    for _ in range(50):
        z = rng.uniform(0, 1, 2) * np.exp(2j * np.pi * rng.random(2))
        s, p = z.sum(), z.prod()
        fs = fundamental_operators(GammaTuple((np.array([[s]]),), np.array([[p]])))
        closed = (s - np.conj(s) * p) / (1 - abs(p) ** 2)
        scalar_err = max(scalar_err, abs(fs.ambient(1)[0, 0] - closed))
    ok = worst < 1e-8 and scalar_err < 1e-12
    record(
        6,
        ok,
        f"{len(constructed)} instances, max residual/(1+|S_i|) {worst:.1e} (< 1e-8); "
        f"scalar closed form error {scalar_err:.1e} (< 1e-12)",
    )
    assert ok


def test_criterion_7_lifting(extensions):
    rng = np.random.default_rng(7)
    norm_excess, intertwine, vs_theta = -np.inf, 0.0, 0.0
    count = 100
    for k in range(count):
        t, ext = extensions[k % len(extensions)]
        X = commutant(t.members).random_element(rng)
        res = lift_commutant(ext, X)
        norm_excess = max(norm_excess, res.norm_Y - res.norm_X - 1e-9 * (1 + res.norm_X))
        intertwine = max(intertwine, res.intertwine_residual)
        vs_theta = max(vs_theta, fro(res.Y - theta(ext, X)))

    rotated = 0.0
    for t, ext in extensions[::4]:
        q, r = np.linalg.qr(rng.standard_normal((t.n, t.n)) + 1j * rng.standard_normal((t.n, t.n)))
        W = q * (np.diag(r) / np.abs(np.diag(r)))
        copy = GammaTuple(tuple(W @ s @ adj(W) for s in t.S), W @ t.P @ adj(W), t.certificate, "rotated copy")
        e2 = canonical_extension(copy)
        res = lift_intertwiner(ext, e2, W)
        rotated = max(
            rotated,
            res.intertwine_residual,
            res.commutant_residual,
            res.norm_Y - res.norm_X - 1e-9,
        )
    ok = norm_excess <= 0 and intertwine < 1e-8 and vs_theta < 1e-8 and rotated < 1e-8
    record(
        7,
        ok,
        f"{count} commutant elements: norm excess {max(norm_excess, 0.0):.1e}, |YJ - JX| {intertwine:.1e}, "
        f"|lift - Theta| {vs_theta:.1e}; rotated-copy corollary residual {rotated:.1e}",
    )
    assert ok


def test_criterion_8_oracle_equivalence():
    mismatches = []
    for name in oracles.RATIONAL_PAIRS:
        S, P = oracles.rational_fixture(name)
        t = GammaTuple((oracles.to_numpy(S),), oracles.to_numpy(P))
        assert t.n <= 3
        got = (toeplitz_space(t).dim, commutant(t.members).dim)
        want = (oracles.exact_toeplitz_dim(S, P), oracles.exact_commutant_dim([S, P]))
        if is_pure(t):
            got += (0,)
        else:
            ext = canonical_extension(t)
            got += (commutant(ext.members).dim,)
        want += (oracles.exact_extension_commutant_dim(S, P),)
        if got != want:
            mismatches.append((name, got, want))
    ok = not mismatches
    record(
        8,
        ok,
        f"{len(oracles.RATIONAL_PAIRS)} rational fixtures, Toeplitz / commutant / extension-commutant dims "
        f"vs exact arithmetic, {len(mismatches)} mismatches",
    )
    assert ok, mismatches


def test_criterion_9_uniqueness(extensions):
    rng = np.random.default_rng(9)
    worst_iso, worst_spectrum = 0.0, 0.0
    for t, e1 in extensions:
        z = rng.standard_normal((e1.r, e1.r)) + 1j * rng.standard_normal((e1.r, e1.r))
        rot, _ = np.linalg.qr(z)
        e2 = canonical_extension(t, rank_tol=1e-6, rotation=rot)
        W = extension_isomorphism(e1, e2, tol=1e-7)
        worst_iso = max(worst_iso, isomorphism_residual(W, e1, e2))
        worst_spectrum = max(worst_spectrum, joint_spectrum_distance(e1.joint_spectrum(), e2.joint_spectrum()))
    ok = worst_iso < 1e-7 and worst_spectrum < 1e-7
    record(
        9,
        ok,
        f"{len(extensions)} instances, isomorphism residual {worst_iso:.1e}, spectrum distance {worst_spectrum:.1e} "
        "(both < 1e-7)",
    )
    assert ok
