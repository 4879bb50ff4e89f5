"""Experiment drivers connecting the exact engine to matrix samples.

Every driver is deterministic given its seed: per-trial seeds are split off
the root seed with SeedSequence.spawn, trials run sequentially, and aggregate
means use exact (order-insensitive) summation. Reports are plain dataclasses
with a JSON form and flat per-trial rows for CSV.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .bpoly import BElem
from .brown_hs import Region, angle_cos, hs_projection
from .cumulants import CoeffWord, scalar_moment, validate_word
from .errors import ConfigError, TruncationError
from .matrix_lab import (
    MatrixModel,
    RadialMeasure,
    build_block_dt,
    build_dt,
    gns_norm,
    inverse,
    normalized_trace,
    op_norm,
    sample_gue,
    sample_ut,
    semicircular_mix,
)

VECTOR_SUBSPACE_SLACK = 1e-8
COMPRESSION_SLACK = 1e-6
MC_REL_TOL = 0.05
RESTRICTION_REL_TOL = 0.07


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _spawn(seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(int(seed)).spawn(n)


# ---------------------------------------------------------------------------
# analytic two-cluster cosine bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterBound:
    """Lower bounds for the cosine of the angle between the spectral subspaces
    of a two-cluster model with moduli clusters inside [r, .] and [., s]."""

    main: float
    uniform: float


def two_cluster_cos_bound(r: float, s: float, c: float, t: float) -> ClusterBound:
    """main = (1 + (s^2-r^2)/(c^2 max(t,1-t)))^(-1/2); the uniform variant
    replaces max(t,1-t) by its worst case 1/2."""
    if not (0 <= r < s):
        raise ConfigError("experiments.bound", f"need 0 <= r < s, got ({r}, {s})")
    if c <= 0:
        raise ConfigError("experiments.bound", f"need c > 0, got {c}")
    if not (0 < t < 1):
        raise ConfigError("experiments.bound", f"need 0 < t < 1, got {t}")
    gap = s * s - r * r
    main = (1.0 + gap / (c * c * max(t, 1.0 - t))) ** -0.5
    uniform = (1.0 + 2.0 * gap / (c * c)) ** -0.5
    return ClusterBound(main=float(main), uniform=float(uniform))


# ---------------------------------------------------------------------------
# two-cluster angle experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleExperimentConfig:
    """Two clusters of moduli (inside [r, r_prime] and [s_prime, s]) with mass
    split t / 1-t, coupling strength c, matrix size N, series truncation K."""

    r: float = 1.0
    r_prime: float = 1.05
    s_prime: float = 1.9
    s: float = 2.0
    t: float = 0.5
    c: float = 1.0
    N: int = 256
    K: int = 40
    trials: int = 20
    seed: int = 0
    residual_cap: float | None = None  # None: 1e-6 * ||Z|| per trial

    def __post_init__(self) -> None:
        if not (0 <= self.r < self.r_prime < self.s_prime < self.s):
            raise ConfigError(
                "experiments.angle_config",
                f"need 0 <= r < r' < s' < s, got "
                f"({self.r}, {self.r_prime}, {self.s_prime}, {self.s})",
            )
        if not (0 < self.t < 1):
            raise ConfigError("experiments.angle_config", f"t must be in (0,1): {self.t}")
        if self.c <= 0:
            raise ConfigError("experiments.angle_config", f"c must be positive: {self.c}")
        if self.N < 8:
            raise ConfigError("experiments.angle_config", f"N must be >= 8: {self.N}")
        if self.K < 1 or self.trials < 1:
            raise ConfigError(
                "experiments.angle_config",
                f"K and trials must be >= 1: K={self.K}, trials={self.trials}",
            )


@dataclass(frozen=True)
class AngleTrial:
    trial: int
    ynorm_sq: float
    cos_vector: float
    cos_subspace: float
    truncation_residual: float
    sim_identity_residual: float
    decay_ratio: float
    z1_pow_norm: float
    z2_invpow_norm: float


@dataclass(frozen=True)
class AngleReport:
    config: AngleExperimentConfig
    bound_main: float
    bound_uniform: float
    ynorm_sq_bound: float
    ynorm_sq_mean: float
    cos_vector_mean: float
    cos_subspace_mean: float
    cos_subspace_min: float
    truncation_residual_max: float
    sim_identity_residual_max: float
    decay_ratio_max: float
    decay_ratio_ok: bool
    vector_le_subspace: bool
    passed: bool
    trial_records: tuple[AngleTrial, ...]

    def to_json_obj(self) -> dict:
        obj = asdict(self)
        obj["trial_records"] = [asdict(t) for t in self.trial_records]
        return obj

    def trial_rows(self) -> list[dict]:
        return [asdict(t) for t in self.trial_records]


def _block_slices(model: MatrixModel) -> list[slice]:
    out = []
    lo = 0
    for p, _ in model.blocks:
        n = int(round(np.real(np.trace(p))))
        out.append(slice(lo, lo + n))
        lo += n
    return out


def run_angle_experiment(config: AngleExperimentConfig) -> AngleReport:
    """Monte-Carlo study of the angle between the two cluster subspaces.

    Per trial: build the two-block model, invert the high block, accumulate
    the K-term intertwiner series Y, and compare three quantities against
    their analytic references: the squared GNS norm of Y (vs the series lower
    bound c^2 t(1-t)/(s^2-r^2)), the vector-pair cosine, and the subspace
    cosine from the spectral projections. The truncated similarity identity
    (1 + Y) diag(Z1, Z2) (1 - Y) = Z must hold up to the truncation residual.
    """
    cfg = config
    bounds = two_cluster_cos_bound(cfg.r, cfg.s, cfg.c, cfg.t)
    ynorm_bound = cfg.c * cfg.c * cfg.t * (1 - cfg.t) / (cfg.s**2 - cfg.r**2)
    rho_low = (cfg.r + cfg.r_prime) / 2.0
    rho_high = (cfg.s_prime + cfg.s) / 2.0
    parts = [
        (RadialMeasure(((rho_low, 1.0),)), cfg.t),
        (RadialMeasure(((rho_high, 1.0),)), 1.0 - cfg.t),
    ]
    low_region = Region.annulus(cfg.r, cfg.r_prime)
    high_region = Region.annulus(cfg.s_prime, cfg.s)

    records: list[AngleTrial] = []
    for trial, ss in enumerate(_spawn(cfg.seed, cfg.trials)):
        model = build_block_dt(parts, cfg.c, cfg.N, ss)
        s1, s2 = _block_slices(model)
        Z = model.Z
        Z1, Z2, B = Z[s1, s1], Z[s2, s2], Z[s1, s2]
        N1 = s1.stop - s1.start
        t_hat = N1 / cfg.N
        Z2inv = inverse(Z2)

        term = B @ Z2inv
        Y = term.copy()
        for _ in range(1, cfg.K):
            term = Z1 @ term @ Z2inv
            Y = Y + term
        z1k = np.linalg.matrix_power(Z1, cfg.K)
        z2invk = np.linalg.matrix_power(Z2inv, cfg.K)
        n1 = op_norm(z1k)
        n2 = op_norm(z2invk)
        ratio = (n1 * n2) ** (1.0 / cfg.K)
        if ratio >= 1.0:
            raise TruncationError(
                f"series does not decay at K={cfg.K}: per-step ratio {ratio:.4f}"
            )
        normZ = op_norm(Z)
        residual = n1 * n2 * op_norm(B) / (1.0 - ratio)
        cap = cfg.residual_cap if cfg.residual_cap is not None else 1e-6 * normZ
        if residual > cap:
            raise TruncationError(
                f"truncation residual {residual:.3e} exceeds cap {cap:.3e} at K={cfg.K}"
            )

        # similarity identity with the truncated intertwiner
        Zd = np.zeros_like(Z)
        Zd[s1, s1], Zd[s2, s2] = Z1, Z2
        S = np.eye(cfg.N, dtype=complex)
        S[s1, s2] = Y
        Sinv = np.eye(cfg.N, dtype=complex)
        Sinv[s1, s2] = -Y
        sim_res = op_norm(S @ Zd @ Sinv - Z)

        Yhat = np.zeros_like(Z)
        Yhat[s1, s2] = Y
        g2 = gns_norm(Yhat) ** 2
        cos_vec = math.sqrt(g2 / (g2 + (1.0 - t_hat)))
        p_low = hs_projection(Z, low_region)
        p_high = hs_projection(Z, high_region)
        cos_sub = angle_cos(p_low, p_high)
        records.append(
            AngleTrial(
                trial=trial,
                ynorm_sq=float(g2),
                cos_vector=float(cos_vec),
                cos_subspace=float(cos_sub),
                truncation_residual=float(residual),
                sim_identity_residual=float(sim_res),
                decay_ratio=float(ratio),
                z1_pow_norm=float(n1),
                z2_invpow_norm=float(n2),
            )
        )

    ynorm_mean = _mean([t.ynorm_sq for t in records])
    cos_vec_mean = _mean([t.cos_vector for t in records])
    cos_sub_mean = _mean([t.cos_subspace for t in records])
    cos_sub_min = min(t.cos_subspace for t in records)
    trunc_max = max(t.truncation_residual for t in records)
    sim_max = max(t.sim_identity_residual for t in records)
    ratio_max = max(t.decay_ratio for t in records)
    vector_ok = all(
        t.cos_vector <= t.cos_subspace + VECTOR_SUBSPACE_SLACK for t in records
    )
    sim_ok = all(
        t.sim_identity_residual <= t.truncation_residual for t in records
    )
    passed = (
        cos_sub_mean >= 0.9 * bounds.main
        and ynorm_mean >= 0.9 * ynorm_bound
        and sim_ok
        and vector_ok
    )
    return AngleReport(
        config=cfg,
        bound_main=bounds.main,
        bound_uniform=bounds.uniform,
        ynorm_sq_bound=float(ynorm_bound),
        ynorm_sq_mean=float(ynorm_mean),
        cos_vector_mean=float(cos_vec_mean),
        cos_subspace_mean=float(cos_sub_mean),
        cos_subspace_min=float(cos_sub_min),
        truncation_residual_max=float(trunc_max),
        sim_identity_residual_max=float(sim_max),
        decay_ratio_max=float(ratio_max),
        decay_ratio_ok=bool(ratio_max < (cfg.r_prime / cfg.s_prime) * 1.05),
        vector_le_subspace=bool(vector_ok),
        passed=bool(passed),
        trial_records=tuple(records),
    )


# ---------------------------------------------------------------------------
# power trace floors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerTraceReport:
    r: float
    s: float
    k_max: int
    forward: tuple[float, ...]  # Re tau((Z^k)* Z^k), k = 1..k_max
    inverse: tuple[float, ...]  # Re tau((Z^-k)* Z^-k)
    forward_floor: tuple[float, ...]
    inverse_floor: tuple[float, ...]
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {
                "k": k + 1,
                "forward": self.forward[k],
                "forward_floor": self.forward_floor[k],
                "inverse": self.inverse[k],
                "inverse_floor": self.inverse_floor[k],
            }
            for k in range(self.k_max)
        ]


def power_trace_floor_check(
    model: MatrixModel, r: float, s: float, k_max: int
) -> PowerTraceReport:
    """Traces of powers are floored by the extreme moduli: tau((Z^k)* Z^k)
    >= r^(2k) and tau((Z^-k)* Z^-k) >= s^(-2k), each allowed a 5% finite-size
    deficit."""
    if k_max < 1:
        raise ConfigError("experiments.power_floor", f"k_max must be >= 1: {k_max}")
    Z = model.Z
    Zinv = inverse(Z)
    fwd, inv = [], []
    pf = np.eye(model.N, dtype=complex)
    pi = np.eye(model.N, dtype=complex)
    for _ in range(k_max):
        pf = pf @ Z
        pi = pi @ Zinv
        fwd.append(float(np.real(normalized_trace(pf.conj().T @ pf))))
        inv.append(float(np.real(normalized_trace(pi.conj().T @ pi))))
    f_floor = [r ** (2 * (k + 1)) for k in range(k_max)]
    i_floor = [s ** (-2 * (k + 1)) for k in range(k_max)]
    ok = all(v - f >= -MC_REL_TOL * f for v, f in zip(fwd, f_floor)) and all(
        v - f >= -MC_REL_TOL * f for v, f in zip(inv, i_floor)
    )
    return PowerTraceReport(
        r=float(r),
        s=float(s),
        k_max=k_max,
        forward=tuple(fwd),
        inverse=tuple(inv),
        forward_floor=tuple(f_floor),
        inverse_floor=tuple(i_floor),
        passed=bool(ok),
    )


@dataclass(frozen=True)
class PowerTraceMCReport:
    r: float
    s: float
    k_max: int
    trials: int
    forward_mean: tuple[float, ...]
    inverse_mean: tuple[float, ...]
    forward_floor: tuple[float, ...]
    inverse_floor: tuple[float, ...]
    passed: bool
    per_trial: tuple[PowerTraceReport, ...]

    def to_json_obj(self) -> dict:
        obj = asdict(self)
        obj["per_trial"] = [asdict(t) for t in self.per_trial]
        return obj

    def trial_rows(self) -> list[dict]:
        rows = []
        for i, rep in enumerate(self.per_trial):
            for row in rep.trial_rows():
                rows.append({"trial": i, **row})
        return rows


def run_power_trace_floor(
    mu: RadialMeasure,
    c: float,
    N: int,
    r: float,
    s: float,
    k_max: int,
    trials: int,
    seed: int,
) -> PowerTraceMCReport:
    """Trial-averaged power trace floors for the model built from mu and c."""
    reps = [
        power_trace_floor_check(build_dt(mu, c, N, ss), r, s, k_max)
        for ss in _spawn(seed, trials)
    ]
    fwd = tuple(_mean([rep.forward[k] for rep in reps]) for k in range(k_max))
    inv = tuple(_mean([rep.inverse[k] for rep in reps]) for k in range(k_max))
    f_floor, i_floor = reps[0].forward_floor, reps[0].inverse_floor
    ok = all(v - f >= -MC_REL_TOL * f for v, f in zip(fwd, f_floor)) and all(
        v - f >= -MC_REL_TOL * f for v, f in zip(inv, i_floor)
    )
    return PowerTraceMCReport(
        r=float(r),
        s=float(s),
        k_max=k_max,
        trials=trials,
        forward_mean=fwd,
        inverse_mean=inv,
        forward_floor=f_floor,
        inverse_floor=i_floor,
        passed=bool(ok),
        per_trial=tuple(reps),
    )


# ---------------------------------------------------------------------------
# diagonal power floors (entrywise conditional expectation)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalFloorReport:
    n_max: int
    trials: int
    worst_forward_margin: tuple[float, ...]  # min over entries of value/floor - 1
    worst_inverse_margin: tuple[float, ...]
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {
                "n": n + 1,
                "worst_forward_margin": self.worst_forward_margin[n],
                "worst_inverse_margin": self.worst_inverse_margin[n],
            }
            for n in range(self.n_max)
        ]


def diagonal_power_floor_check(
    f: BElem, c: float, N: int, n_max: int, trials: int, seed: int
) -> DiagonalFloorReport:
    """Entrywise floors for the diagonal of (Z^n)* Z^n, Z = diag(f(i/N)) + cT.

    The diagonal extraction plays the conditional expectation; each entry of
    the trial-averaged diagonal must be >= |f(i/N)|^(2n) (1 - 5%), and the
    inverse powers likewise with |f(i/N)|^(-2n)."""
    if n_max < 1 or trials < 1:
        raise ConfigError(
            "experiments.diag_floor", f"n_max and trials must be >= 1: {n_max}, {trials}"
        )
    xs = [Fraction(i, N) for i in range(1, N + 1)]
    b = np.array([float(f(x)) for x in xs])
    if np.min(np.abs(b)) <= 1e-9:
        raise ConfigError(
            "experiments.diag_floor", "f must be bounded away from 0 on the grid"
        )
    hi, lo = float(np.max(np.abs(b))), float(np.min(np.abs(b)))
    if 2 * n_max * max(abs(math.log10(hi)), abs(math.log10(lo))) > 300:
        raise ConfigError(
            "experiments.diag_floor",
            f"powers up to {n_max} lose resolution for values in [{lo:.3g}, {hi:.3g}]",
        )
    fwd_acc = [np.zeros(N) for _ in range(n_max)]
    inv_acc = [np.zeros(N) for _ in range(n_max)]
    for ss in _spawn(seed, trials):
        Z = np.diag(b).astype(complex) + c * sample_ut(N, ss)
        Zinv = inverse(Z)
        pf = np.eye(N, dtype=complex)
        pi = np.eye(N, dtype=complex)
        for n in range(n_max):
            pf = pf @ Z
            pi = pi @ Zinv
            fwd_acc[n] += np.sum(np.abs(pf) ** 2, axis=0)  # diag of (Z^n)* Z^n
            inv_acc[n] += np.sum(np.abs(pi) ** 2, axis=0)
    worst_f, worst_i = [], []
    for n in range(n_max):
        floor_f = np.abs(b) ** (2 * (n + 1))
        floor_i = np.abs(b) ** (-2 * (n + 1))
        worst_f.append(float(np.min(fwd_acc[n] / trials / floor_f - 1.0)))
        worst_i.append(float(np.min(inv_acc[n] / trials / floor_i - 1.0)))
    ok = all(m >= -MC_REL_TOL for m in worst_f) and all(
        m >= -MC_REL_TOL for m in worst_i
    )
    return DiagonalFloorReport(
        n_max=n_max,
        trials=trials,
        worst_forward_margin=tuple(worst_f),
        worst_inverse_margin=tuple(worst_i),
        passed=bool(ok),
    )


# ---------------------------------------------------------------------------
# operator norm domination of coefficiented words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WordNormReport:
    word: str
    coeff_sup_product: float
    median_coeff_norm: float
    median_plain_norm: float
    passed: bool
    per_trial: tuple[tuple[float, float], ...]  # (coeff word norm, plain word norm)

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {"trial": i, "coeff_norm": a, "plain_norm": b}
            for i, (a, b) in enumerate(self.per_trial)
        ]


def coeff_word_norm_check(
    word: str,
    coeffs: Sequence[BElem],
    N: int,
    trials: int,
    seed: int,
) -> WordNormReport:
    """Operator norm of a coefficiented word is dominated by the product of
    coefficient sup norms times the plain word's norm (trial medians, 5%
    slack). Coefficients are realized as diag(b_j(i/N))."""
    validate_word(word)
    if len(coeffs) != len(word):
        raise ConfigError(
            "experiments.word_norm",
            f"{len(word)} letters but {len(coeffs)} coefficients",
        )
    xs = [Fraction(i, N) for i in range(1, N + 1)]
    diags = [np.array([float(b(x)) for x in xs]) for b in coeffs]
    sup_prod = 1.0
    for d in diags:
        sup_prod *= float(np.max(np.abs(d)))
    coeff_norms, plain_norms = [], []
    for ss in _spawn(seed, trials):
        T = sample_ut(N, ss)
        Th = T.conj().T
        M = np.eye(N, dtype=complex)
        P = np.eye(N, dtype=complex)
        for letter, d in zip(word, diags):
            F = T if letter == "1" else Th
            M = M @ F * d  # right multiply by diag(d)
            P = P @ F
        coeff_norms.append(op_norm(M))
        plain_norms.append(op_norm(P))
    med_c = float(np.median(coeff_norms))
    med_p = float(np.median(plain_norms))
    return WordNormReport(
        word=word,
        coeff_sup_product=float(sup_prod),
        median_coeff_norm=med_c,
        median_plain_norm=med_p,
        passed=bool(med_c <= sup_prod * med_p * (1.0 + MC_REL_TOL)),
        per_trial=tuple(zip(map(float, coeff_norms), map(float, plain_norms))),
    )


# ---------------------------------------------------------------------------
# angle monotonicity under compression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompressionAngleReport:
    cos_compressed: float
    cos_full: float
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [asdict(self)]


def compression_angle_check(
    Z: np.ndarray, B: Region, C: Region
) -> CompressionAngleReport:
    """Compressing to the spectral subspace of B can only open the angle
    between the C / complement-of-C subspaces: the compressed cosine must not
    exceed the full-space cosine (1e-6 slack)."""
    q = hs_projection(Z, B)
    if q.rank == 0:
        raise ConfigError("experiments.compression", "B selects no eigenvalues")
    M = q.basis.conj().T @ np.asarray(Z, dtype=complex) @ q.basis
    Cc = C.complement()
    p1 = hs_projection(M, C)
    p2 = hs_projection(M, Cc)
    f1 = hs_projection(Z, C)
    f2 = hs_projection(Z, Cc)
    if min(p1.rank, p2.rank, f1.rank, f2.rank) == 0:
        raise ConfigError(
            "experiments.compression", "C must split both the full and compressed spectra"
        )
    cos_c = angle_cos(p1, p2)
    cos_f = angle_cos(f1, f2)
    return CompressionAngleReport(
        cos_compressed=float(cos_c),
        cos_full=float(cos_f),
        passed=bool(cos_c <= cos_f + COMPRESSION_SLACK),
    )


# ---------------------------------------------------------------------------
# restriction law: compressed model vs directly built model
# ---------------------------------------------------------------------------


def all_words(max_len: int) -> list[str]:
    """Every word over {1, *} of length 1..max_len, in a fixed order."""
    out: list[str] = []
    for n in range(1, max_len + 1):
        for bits in range(2**n):
            out.append("".join("1*"[(bits >> i) & 1] for i in range(n)))
    return out


def _word_trace(Z: np.ndarray, Zh: np.ndarray, word: str) -> complex:
    M = np.eye(Z.shape[0], dtype=complex)
    for letter in word:
        M = M @ (Z if letter == "1" else Zh)
    return normalized_trace(M)


@dataclass(frozen=True)
class RestrictionReport:
    region: dict
    mass: float
    compressed_dim: int
    words: tuple[str, ...]
    compressed_moments: tuple[tuple[float, float], ...]
    direct_moments: tuple[tuple[float, float], ...]
    worst_excess: float
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {
                "word": w,
                "compressed_re": cm[0],
                "compressed_im": cm[1],
                "direct_re": dm[0],
                "direct_im": dm[1],
            }
            for w, cm, dm in zip(self.words, self.compressed_moments, self.direct_moments)
        ]


def restriction_model_check(
    mu: RadialMeasure,
    c: float,
    B: Region,
    N: int,
    trials: int,
    seed: int,
    max_word_len: int = 4,
) -> RestrictionReport:
    """The compression of a model to the spectral subspace of B has the same
    *-moments (up to finite-size error) as a model built directly from the
    restricted measure with coupling rescaled by sqrt of the retained mass.

    Trial-averaged moments of all words up to max_word_len are compared with
    tolerance 7% relative, floored at 0.07 absolute for near-zero moments.
    """
    inside = [(r, w) for r, w in mu.atoms if B.contains(complex(r, 0.0))]
    if not inside:
        raise ConfigError("experiments.restriction", "B retains no atoms")
    mass = math.fsum(w for _, w in inside)
    mu_b = RadialMeasure(tuple((r, w / mass) for r, w in inside))
    words = all_words(max_word_len)

    seeds = _spawn(seed, 2 * trials)
    comp_acc = [0.0 + 0.0j] * len(words)
    dir_acc = [0.0 + 0.0j] * len(words)
    k_dim = None
    for i in range(trials):
        model = build_dt(mu, c, N, seeds[2 * i])
        q = hs_projection(model.Z, B)
        if q.rank == 0:
            raise ConfigError("experiments.restriction", "B selects no eigenvalues")
        if k_dim is None:
            k_dim = q.rank
        M = q.basis.conj().T @ model.Z @ q.basis
        Mh = M.conj().T
        c_restricted = c * math.sqrt(q.rank / N)
        direct = build_dt(mu_b, c_restricted, q.rank, seeds[2 * i + 1]).Z
        Dh = direct.conj().T
        for j, w in enumerate(words):
            comp_acc[j] += _word_trace(M, Mh, w)
            dir_acc[j] += _word_trace(direct, Dh, w)
    comp = [v / trials for v in comp_acc]
    direct_m = [v / trials for v in dir_acc]
    worst = 0.0
    for a, b in zip(comp, direct_m):
        tol = RESTRICTION_REL_TOL * max(1.0, abs(b))
        worst = max(worst, abs(a - b) / tol * RESTRICTION_REL_TOL)
    return RestrictionReport(
        region=B.to_json_obj(),
        mass=float(mass),
        compressed_dim=int(k_dim or 0),
        words=tuple(words),
        compressed_moments=tuple((float(v.real), float(v.imag)) for v in comp),
        direct_moments=tuple((float(v.real), float(v.imag)) for v in direct_m),
        worst_excess=float(worst),
        passed=bool(worst <= RESTRICTION_REL_TOL),
    )


# ---------------------------------------------------------------------------
# Monte-Carlo word traces vs the exact engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceMCReport:
    N: int
    trials: int
    words: tuple[str, ...]
    estimates: tuple[float, ...]
    references: tuple[float, ...]
    rel_errors: tuple[float, ...]
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {"word": w, "estimate": e, "reference": r, "rel_error": x}
            for w, e, r, x in zip(
                self.words, self.estimates, self.references, self.rel_errors
            )
        ]


def word_trace_mc(
    words: Sequence[str], N: int, trials: int, seed: int
) -> TraceMCReport:
    """Monte-Carlo normalized traces of words in the triangular sample against
    the exact engine values (relative tolerance 5%; zero-reference words are
    compared absolutely at the same tolerance)."""
    for w in words:
        validate_word(w)
    refs = [float(scalar_moment(w)) for w in words]
    acc = [0.0] * len(words)
    for ss in _spawn(seed, trials):
        T = sample_ut(N, ss)
        Th = T.conj().T
        for j, w in enumerate(words):
            acc[j] += _word_trace(T, Th, w).real
    est = [a / trials for a in acc]
    rel = [
        abs(e - r) / (abs(r) if r != 0.0 else 1.0) for e, r in zip(est, refs)
    ]
    return TraceMCReport(
        N=N,
        trials=trials,
        words=tuple(words),
        estimates=tuple(map(float, est)),
        references=tuple(refs),
        rel_errors=tuple(map(float, rel)),
        passed=bool(all(x <= MC_REL_TOL for x in rel)),
    )


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class SemicircleMCReport:
    N: int
    trials: int
    kind: str
    k_max: int
    estimates: tuple[float, ...]
    references: tuple[float, ...]
    rel_errors: tuple[float, ...]
    passed: bool

    def to_json_obj(self) -> dict:
        return asdict(self)

    def trial_rows(self) -> list[dict]:
        return [
            {"k": k + 1, "estimate": e, "reference": r, "rel_error": x}
            for k, (e, r, x) in enumerate(
                zip(self.estimates, self.references, self.rel_errors)
            )
        ]


def semicircle_trace_mc(
    N: int,
    trials: int,
    seed: int,
    k_max: int = 4,
    mix_weights: Sequence[float] | None = None,
) -> SemicircleMCReport:
    """Even moments tau(Y^(2k)) against the Catalan numbers, for a plain
    Hermitian Gaussian sample or (with mix_weights) the block mixture of two
    independent samples, whose law is the same."""
    if k_max < 1:
        raise ConfigError("experiments.semicircle", f"k_max must be >= 1: {k_max}")
    kind = "gue" if mix_weights is None else "mix"
    projections = None
    if mix_weights is not None:
        from .matrix_lab import apportion, _diag_projection

        sizes = apportion([float(w) for w in mix_weights], N)
        bounds = np.concatenate([[0], np.cumsum(sizes)])
        projections = [
            _diag_projection(N, bounds[i], bounds[i + 1]) for i in range(len(sizes))
        ]
    acc = [0.0] * k_max
    for ss in _spawn(seed, trials):
        if projections is None:
            Y = sample_gue(N, ss)
        else:
            ss1, ss2 = ss.spawn(2)
            Y = semicircular_mix(sample_gue(N, ss1), sample_gue(N, ss2), projections)
        p = np.eye(N, dtype=complex)
        Y2 = Y @ Y
        for k in range(k_max):
            p = p @ Y2
            acc[k] += float(np.real(normalized_trace(p)))
    est = [a / trials for a in acc]
    refs = [float(catalan(k + 1)) for k in range(k_max)]
    rel = [abs(e - r) / r for e, r in zip(est, refs)]
    return SemicircleMCReport(
        N=N,
        trials=trials,
        kind=kind,
        k_max=k_max,
        estimates=tuple(map(float, est)),
        references=tuple(refs),
        rel_errors=tuple(map(float, rel)),
        passed=bool(all(x <= MC_REL_TOL for x in rel)),
    )


# ---------------------------------------------------------------------------
# concentration ladder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcentrationFamilyConfig:
    """Family of circles at radii a + 1/n with weights proportional to
    n^(-b), concentrating at modulus a. The analytic ladder uses the full
    (infinite) family tail masses; n_max bounds the ladder length and is the
    truncation used when sampling matrices (trials > 0)."""

    a: float = 1.0
    b: float = 1.5
    n_max: int = 64
    c: float = 1.0
    N: int = 256
    trials: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ConfigError("experiments.family", f"a must be >= 0: {self.a}")
        if not (1.0 < self.b < 2.0):
            raise ConfigError("experiments.family", f"b must be in (1,2): {self.b}")
        if self.n_max < 2:
            raise ConfigError("experiments.family", f"n_max must be >= 2: {self.n_max}")
        if self.c <= 0:
            raise ConfigError("experiments.family", f"c must be positive: {self.c}")
        if self.trials < 0 or (self.trials > 0 and self.N < 8):
            raise ConfigError(
                "experiments.family", f"bad trials/N: {self.trials}, {self.N}"
            )


@dataclass(frozen=True)
class LadderRung:
    n_param: int
    n_eps: int
    eps: float
    r: float
    r_prime: float
    s_prime: float
    s: float
    mass: float
    t_split: float
    bound_main: float
    bound_uniform: float
    rhs_floor: float
    concentration_at_eps: float
    rhs_ok: bool
    cos_matrix_mean: float | None = None
    matrix_status: str = "analytic-only"


@dataclass(frozen=True)
class ConcentrationReport:
    config: ConcentrationFamilyConfig
    z_norm_est: float
    rungs: tuple[LadderRung, ...]
    nondecreasing: bool
    final_bound: float
    passed: bool

    def to_json_obj(self) -> dict:
        obj = asdict(self)
        obj["rungs"] = [asdict(r) for r in self.rungs]
        return obj

    def trial_rows(self) -> list[dict]:
        return [asdict(r) for r in self.rungs]


def _tail_mass(b: float, n: int) -> float:
    """Mass of atoms n, n+1, ... in the infinite family, normalized."""
    return float(_hurwitz_zeta(b, n) / _hurwitz_zeta(b, 1))


def _find_n_eps(b: float, n_param: int) -> int:
    """Smallest n with n * S(n) > n_param and n * S(n+1) >= n_param, so the
    mass-to-width ratio clears n_param for every width down to 1/n."""
    n = 2
    prev_check = -math.inf
    while True:
        s_n = _tail_mass(b, n)
        s_n1 = _tail_mass(b, n + 1)
        check = n * s_n1
        # the family's ratio profile must be nondecreasing for the single
        # test at n to cover all smaller widths; holds for exponents in (1,2)
        if check < prev_check - 1e-12:
            raise ConfigError(
                "experiments.family",
                f"concentration profile not monotone near n={n}",
            )
        prev_check = check
        if n * s_n > n_param and check >= n_param:
            return n
        n += 1
        if n > 10**8:  # pragma: no cover - defensive
            raise ConfigError("experiments.family", "no feasible width found")


def _balanced_split(b: float, n_eps: int, mass: float) -> int:
    """Index m such that atoms > m go inside, atoms n_eps..m go outside,
    with the inside share closest to 1/2."""
    best_m, best_d = n_eps, math.inf
    m = n_eps
    while True:
        share = _tail_mass(b, m + 1) / mass
        d = abs(share - 0.5)
        if d < best_d:
            best_d, best_m = d, m
        if share < 0.5 and m >= best_m + 4:
            return best_m
        m += 1


def run_concentration_ladder(config: ConcentrationFamilyConfig) -> ConcentrationReport:
    """Analytic lower-bound ladder for the angle of the concentrating family.

    For each rung parameter (1, 2, 4, ... up to n_max) construct the widest
    annulus around modulus a whose mass-to-width ratio clears the parameter,
    split it in two mass-balanced sub-annuli between consecutive atom radii,
    and evaluate the two-cluster cosine bound for the restricted model. Each
    rung's bound must clear the composed floor
    (1 + 8 ||Z||_est / (c^2 n_param))^(-1/2) and the ladder must be
    nondecreasing. With trials > 0, rungs realizable at the n_max truncation
    also get a Monte-Carlo subspace-angle estimate.
    """
    cfg = config
    z_norm_est = (cfg.a + 1.0) + cfg.c * math.sqrt(math.e)
    rungs: list[LadderRung] = []
    n_param = 1
    rung_index = 0
    while n_param <= cfg.n_max:
        n_eps = _find_n_eps(cfg.b, n_param)
        eps = 1.0 / n_eps
        r = max(0.0, cfg.a - eps)
        s = cfg.a + eps
        mass = _tail_mass(cfg.b, n_eps)
        m = _balanced_split(cfg.b, n_eps, mass)
        rho_hi, rho_lo = cfg.a + 1.0 / m, cfg.a + 1.0 / (m + 1)
        gap = rho_hi - rho_lo
        r_prime = rho_lo + gap / 3.0
        s_prime = rho_hi - gap / 3.0
        t_split = _tail_mass(cfg.b, m + 1) / mass
        c_eff = cfg.c * math.sqrt(mass)
        bound = two_cluster_cos_bound(r, s, c_eff, t_split)
        rhs = (1.0 + 8.0 * z_norm_est / (cfg.c * cfg.c * n_param)) ** -0.5
        cos_mat, status = _ladder_matrix_estimate(cfg, n_eps, m, r_prime, s_prime, rung_index)
        rungs.append(
            LadderRung(
                n_param=n_param,
                n_eps=n_eps,
                eps=float(eps),
                r=float(r),
                r_prime=float(r_prime),
                s_prime=float(s_prime),
                s=float(s),
                mass=float(mass),
                t_split=float(t_split),
                bound_main=bound.main,
                bound_uniform=bound.uniform,
                rhs_floor=float(rhs),
                concentration_at_eps=float(n_eps * mass),
                rhs_ok=bool(bound.main >= rhs - 1e-12),
                cos_matrix_mean=cos_mat,
                matrix_status=status,
            )
        )
        n_param *= 2
        rung_index += 1
    nondec = all(
        rungs[i + 1].bound_main >= rungs[i].bound_main for i in range(len(rungs) - 1)
    )
    passed = nondec and all(r.rhs_ok for r in rungs)
    return ConcentrationReport(
        config=cfg,
        z_norm_est=float(z_norm_est),
        rungs=tuple(rungs),
        nondecreasing=bool(nondec),
        final_bound=float(rungs[-1].bound_main),
        passed=bool(passed),
    )


def _ladder_matrix_estimate(
    cfg: ConcentrationFamilyConfig,
    n_eps: int,
    m: int,
    r_prime: float,
    s_prime: float,
    rung_index: int,
) -> tuple[float | None, str]:
    """Subspace-angle Monte Carlo for one rung using the n_max-truncated
    family, when the rung is realizable there. Returns (mean cosine, status)."""
    if cfg.trials <= 0:
        return None, "analytic-only"
    if m + 1 > cfg.n_max:
        return None, "skipped: split exceeds truncation"
    weights = np.arange(n_eps, cfg.n_max + 1, dtype=float) ** (-cfg.b)
    weights /= weights.sum()
    min_slots = float(np.min(weights)) * cfg.N
    if min_slots < 1.0:
        return None, "skipped: measure resolution exceeds N"
    # radii ascending: large n first
    atoms = tuple(
        (cfg.a + 1.0 / n, float(w))
        for n, w in sorted(zip(range(n_eps, cfg.n_max + 1), weights), reverse=True)
    )
    mu_b = RadialMeasure(atoms)
    mass_trunc = 1.0  # already normalized to the restricted family
    c_eff = cfg.c * math.sqrt(
        float(np.sum(np.arange(n_eps, cfg.n_max + 1, dtype=float) ** (-cfg.b)))
        / float(np.sum(np.arange(1, cfg.n_max + 1, dtype=float) ** (-cfg.b)))
    ) * math.sqrt(mass_trunc)
    # enlarge the outer region boundary to the midpoint toward the first
    # excluded atom so no eigenvalue sits exactly on it
    if n_eps > 1:
        s_region = cfg.a + (1.0 / n_eps + 1.0 / (n_eps - 1)) / 2.0
    else:
        s_region = cfg.a + 1.0 + 0.5
    low = Region.annulus(max(0.0, cfg.a - 1.0 / n_eps), r_prime)
    high = Region.annulus(s_prime, s_region)
    vals = []
    root = np.random.SeedSequence(cfg.seed).spawn(64)[min(rung_index, 63)]
    for ss in root.spawn(cfg.trials):
        model = build_dt(mu_b, c_eff, cfg.N, ss)
        p_low = hs_projection(model.Z, low)
        p_high = hs_projection(model.Z, high)
        vals.append(angle_cos(p_low, p_high))
    return float(_mean(vals)), "ok"


# ---------------------------------------------------------------------------
# concentration hypothesis diagnostics for discretized measures
# ---------------------------------------------------------------------------


def quantile_radial_atoms(power: float, n_atoms: int, radius_max: float = 1.0) -> RadialMeasure:
    """Equal-weight quantile discretization of the radial density
    f(rho) proportional to rho^(-power) on (0, radius_max], power in (0, 1)."""
    if not (0.0 < power < 1.0):
        raise ConfigError("experiments.quantile", f"power must be in (0,1): {power}")
    if n_atoms < 1:
        raise ConfigError("experiments.quantile", f"n_atoms must be >= 1: {n_atoms}")
    exponent = 1.0 / (1.0 - power)
    radii = [radius_max * ((j + 0.5) / n_atoms) ** exponent for j in range(n_atoms)]
    w = 1.0 / n_atoms
    return RadialMeasure(tuple((r, w) for r in radii))


def concentration_ratios(
    mu: RadialMeasure, x0: float, deltas: Sequence[float]
) -> list[float]:
    """Direct weight sums: ratio(delta) = mu(annulus of width delta around x0,
    minus the circle at x0 itself) / delta."""
    out = []
    for d in deltas:
        if d <= 0:
            raise ConfigError("experiments.ratios", f"delta must be positive: {d}")
        total = math.fsum(
            w
            for r, w in mu.atoms
            if abs(r - x0) <= d and r != x0
        )
        out.append(total / d)
    return out
