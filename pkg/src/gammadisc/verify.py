"""Per-suite verification drivers shared by the CLI and the acceptance tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotics import compute_q, decay_profile, fundamental_operators, is_pure
from .dilation import canonical_extension, verify_theorem1
from .gamma import Certificate, GammaTuple, classify_gamma_unitary
from .lifting import lift_commutant
from .matrixkit import adj, fro, opnorm
from .report import VerificationReport
from .toeplitz import choi_effros_check, commutant, theta, toeplitz_projection, verify_theorem2

SUITES = ("thm1", "thm2", "lift", "decay", "fo", "choi")


@dataclass
class Tolerances:
    """Defaults for every suite; ``base`` (the CLI's --tol) overrides all of them when set."""

    thm1: float = 1e-8
    thm2: float = 1e-7
    amplification: float = 1e-6
    lift: float = 1e-8
    lift_norm: float = 1e-9
    decay_unitary: float = 1e-9
    decay_pure: float = 1e-6
    fo: float = 1e-8
    idempotence: float = 1e-9
    choi_psd: float = 1e-9
    phi_identity: float = 1e-8
    choi_effros: float = 1e-8

    @classmethod
    def with_base(cls, base: float | None) -> "Tolerances":
        tol = cls()
        if base is not None:
            for name in tol.__dataclass_fields__:
                setattr(tol, name, base)
        return tol


def suite_thm1(t: GammaTuple, tols: Tolerances) -> VerificationReport:
    return verify_theorem1(t, tols.thm1)


def suite_thm2(t: GammaTuple, tols: Tolerances, seed: int = 0) -> VerificationReport:
    if is_pure(t):
        rep = VerificationReport(digest=t.digest())
        rep.add("theorem2", None, reason="asymptotic limit vanishes")
        return rep
    return verify_theorem2(t, tols.thm2, amp_tol=tols.amplification, seed=seed)


def suite_lift(t: GammaTuple, tols: Tolerances, samples: int = 20, seed: int = 0) -> VerificationReport:
    """Lift random elements of the commutant of the source tuple."""
    rep = VerificationReport(digest=t.digest(), tolerances={"lift": tols.lift})
    if is_pure(t):
        rep.add("lift", None, reason="asymptotic limit vanishes")
        return rep
    ext = canonical_extension(t)
    src_comm = commutant(t.members)
    ext_comm = commutant(ext.members)
    rng = np.random.default_rng(seed)
    norm_worst = inter_worst = theta_worst = 0.0
    for _ in range(samples):
        x = src_comm.random_element(rng)
        res = lift_commutant(ext, x, tols.lift)
        norm_worst = max(norm_worst, (res.norm_Y - res.norm_X) / (1.0 + res.norm_X))
        inter_worst = max(inter_worst, res.intertwine_residual)
        theta_worst = max(theta_worst, fro(res.Y - theta(ext, x, tols.lift, cbasis=ext_comm)))
    rep.check("lift_norm_bound", norm_worst, tols.lift_norm, samples=samples)
    rep.check("lift_intertwines", inter_worst, tols.lift)
    rep.check("lift_equals_theta", theta_worst, tols.lift)
    return rep


def suite_decay(t: GammaTuple, tols: Tolerances, j_max: int = 200, seed: int = 0) -> VerificationReport:
    """Decay of ``P^{*j}(S_{d-i} - S_i^* P)P^j`` and its per-vector bound."""
    rep = VerificationReport(digest=t.digest(), tolerances={"pure": tols.decay_pure, "unitary": tols.decay_unitary})
    pure = is_pure(t)
    unitary = classify_gamma_unitary(t)
    fs = fundamental_operators(t) if t.certificate is Certificate.CONSTRUCTED else None
    rng = np.random.default_rng(seed)
    for i in range(1, t.d):
        prof = decay_profile(t, i, j_max)
        rep.check(f"decay_{i}_nonincreasing_ends", prof[-1] - prof[0], tols.thm1)
        if pure:
            rep.check(f"decay_{i}_vanishes", prof[-1] / (prof[0] + 1.0), tols.decay_pure)
        if unitary:
            rep.check(f"decay_{i}_zero_profile", max(prof), tols.decay_unitary)
        if fs is not None:
            rep.check(f"decay_{i}_vector_bound", _vector_bound_excess(t, i, fs, rng, j_max=min(j_max, 40)), tols.fo)
    return rep


def _vector_bound_excess(t, i, fs, rng, j_max: int, vectors: int = 5) -> float:
    """Largest amount by which ``||P^{*j} D h_j||`` exceeds ``||F_{d-i}|| sqrt(||P^j h||^2 - ||P^{j+1} h||^2)``."""
    P = t.P
    defect = t.s(t.d - i) - adj(t.s(i)) @ P
    f_norm = opnorm(fs.F[t.d - i - 1]) if fs.F[t.d - i - 1].size else 0.0
    worst = -np.inf
    for _ in range(vectors):
        h = rng.standard_normal(t.n) + 1j * rng.standard_normal(t.n)
        h /= np.linalg.norm(h)
        ph = h
        pstar = np.eye(t.n, dtype=complex)
        for _ in range(j_max + 1):
            lhs = np.linalg.norm(pstar @ (defect @ ph))
            nxt = P @ ph
            rhs = f_norm * np.sqrt(max(np.linalg.norm(ph) ** 2 - np.linalg.norm(nxt) ** 2, 0.0))
            worst = max(worst, lhs - rhs)
            ph = nxt
            pstar = pstar @ adj(P)
    return float(worst)


def suite_fo(t: GammaTuple, tols: Tolerances) -> VerificationReport:
    rep = VerificationReport(digest=t.digest(), tolerances={"fo": tols.fo})
    fs = fundamental_operators(t)
    for i, r in enumerate(fs.residuals, start=1):
        rep.check(f"fundamental_{i}", r / (1.0 + opnorm(t.s(i))), tols.fo, defect_rank=fs.basis.shape[1])
    return rep


def suite_choi(t: GammaTuple, tols: Tolerances, trials: int = 50, seed: int = 0) -> VerificationReport:
    rep = VerificationReport(digest=t.digest())
    phi = toeplitz_projection(t.P)
    q = compute_q(t).Q
    rep.check("phi_idempotent", phi.idempotence_residual(), tols.idempotence)
    rep.check("phi_choi_psd", -phi.choi_min_eigenvalue(), tols.choi_psd)
    rep.check("phi_of_identity_is_q", fro(phi(np.eye(t.n)) - q), tols.phi_identity)
    rep.extend(choi_effros_check(phi, trials, seed, tols.choi_effros))
    rep.add("phi_spectral_gap", True, 0.0, gap=phi.spectral_gap)
    return rep


def run_suites(
    t: GammaTuple, which=SUITES, tol: float | None = None, seed: int = 0
) -> VerificationReport:
    tols = Tolerances.with_base(tol)
    out = VerificationReport(digest=t.digest(), tolerances={} if tol is None else {"base": tol})
    for name in which:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        with out.timed(name):
            if name == "thm1":
                rep = suite_thm1(t, tols)
            elif name == "thm2":
                rep = suite_thm2(t, tols, seed)
            elif name == "lift":
                rep = suite_lift(t, tols, seed=seed)
            elif name == "decay":
                rep = suite_decay(t, tols, seed=seed)
            elif name == "fo":
                rep = suite_fo(t, tols)
            else:
                rep = suite_choi(t, tols, seed=seed)
        out.extend(rep, prefix=f"{name}.")
    return out
