"""Random matrix models and the dense linear algebra services built on them.

Entries are complex128 throughout. Every sampler is a pure function of
(size, seed): the same arguments reproduce the same matrix bit for bit on a
fixed numpy version. Seeds may be plain 64-bit integers or numpy SeedSequence
objects; internal compositions split substreams via SeedSequence.spawn so that
component draws never alias.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.linalg import lapack as _lapack

from .errors import (
    ConfigError,
    MeasureResolutionError,
    NumericalAbortError,
    SchurSwapError,
    SingularMatrixError,
)

SeedLike = int | np.random.SeedSequence

CONDITION_CUTOFF = 1e12
INVERSE_RESIDUAL_TOL = 1e-8


def _seed_seq(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if not isinstance(seed, (int, np.integer)):
        raise ConfigError("matrix.seed", f"seed must be an integer, got {seed!r}")
    return np.random.SeedSequence(int(seed))


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(_seed_seq(seed))


# -- samplers ----------------------------------------------------------------


def sample_gue(N: int, seed: SeedLike) -> np.ndarray:
    """Hermitian Gaussian matrix normalized so the trace of its square has
    expectation 1: off-diagonal entries complex with variance 1/N, diagonal
    real with variance 1/N."""
    if N < 1:
        raise ConfigError("matrix.size", f"N must be >= 1, got {N}")
    rng = _rng(seed)
    a = rng.standard_normal((N, N))
    b = rng.standard_normal((N, N))
    g = (a + 1j * b) / np.sqrt(2.0)
    return (g + g.conj().T) / np.sqrt(2.0 * N)


def sample_ut(N: int, seed: SeedLike) -> np.ndarray:
    """Strictly upper triangular matrix with iid centered complex Gaussian
    entries of variance 1/N above the diagonal. E tau(T* T) = (N-1)/(2N)."""
    if N < 1:
        raise ConfigError("matrix.size", f"N must be >= 1, got {N}")
    rng = _rng(seed)
    a = rng.standard_normal((N, N))
    b = rng.standard_normal((N, N))
    g = (a + 1j * b) / np.sqrt(2.0 * N)
    return np.triu(g, k=1)


# -- radially symmetric atomic measures --------------------------------------


@dataclass(frozen=True)
class RadialMeasure:
    """Finite positive combination of uniform measures on centered circles.

    atoms: tuple of (radius, weight); radii strictly increasing and
    nonnegative, weights positive and summing to 1 within 1e-12.
    """

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ConfigError("matrix.measure", "measure needs at least one atom")
        atoms = tuple((float(r), float(w)) for r, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        radii = [r for r, _ in atoms]
        if any(r < 0 for r in radii):
            raise ConfigError("matrix.measure", f"negative radius in {radii}")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConfigError(
                "matrix.measure", f"radii must be strictly increasing: {radii}"
            )
        weights = [w for _, w in atoms]
        if any(w <= 0 for w in weights):
            raise ConfigError("matrix.measure", f"weights must be positive: {weights}")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ConfigError(
                "matrix.measure", f"weights sum to {sum(weights)}, expected 1"
            )

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.atoms)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.atoms)

    def to_json_obj(self) -> list[dict[str, float]]:
        return [{"radius": r, "weight": w} for r, w in self.atoms]

    @staticmethod
    def from_json_obj(obj: Sequence[dict]) -> "RadialMeasure":
        try:
            return RadialMeasure(tuple((d["radius"], d["weight"]) for d in obj))
        except (KeyError, TypeError) as exc:
            raise ConfigError("matrix.measure_json", f"bad measure JSON: {obj!r}") from exc


def apportion(weights: Sequence[float], N: int) -> list[int]:
    """Largest-remainder apportionment of N slots to weights.

    Deterministic: remainder ties go to the lower index. Raises if a weight
    would receive zero slots.
    """
    quotas = [w * N for w in weights]
    base = [int(np.floor(q)) for q in quotas]
    rem = N - sum(base)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:rem]:
        base[i] += 1
    if any(n == 0 for n in base):
        raise MeasureResolutionError(
            f"measure resolution exceeds N: sizes {base} from weights {list(weights)} at N={N}"
        )
    return base


def diag_from_measure(mu: RadialMeasure, N: int, seed: SeedLike) -> np.ndarray:
    """Diagonal matrix with the atom radii in contiguous blocks, phases equally
    spaced on each circle. The seed only rotates each block's phase offset."""
    if N < len(mu.atoms):
        raise MeasureResolutionError(
            f"measure resolution exceeds N: {len(mu.atoms)} atoms, N={N}"
        )
    sizes = apportion(mu.weights, N)
    rng = _rng(seed)
    diag = np.empty(N, dtype=complex)
    pos = 0
    for (radius, _), n_k in zip(mu.atoms, sizes):
        offset = rng.uniform(0.0, 2.0 * np.pi)
        theta = offset + 2.0 * np.pi * np.arange(n_k) / n_k
        diag[pos : pos + n_k] = radius * np.exp(1j * theta)
        pos += n_k
    return np.diag(diag)


# -- models -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MatrixModel:
    """A sampled matrix Z together with its decomposition Z = D + c T.

    blocks lists (projection, weight) pairs for block constructions; empty for
    single-measure models. D is diagonal (block-diagonal for block models),
    T strictly upper triangular.
    """

    Z: np.ndarray
    D: np.ndarray
    T: np.ndarray
    c: float
    blocks: tuple[tuple[np.ndarray, float], ...] = field(default=())

    @property
    def N(self) -> int:
        return self.Z.shape[0]


def build_dt(mu: RadialMeasure, c: float, N: int, seed: SeedLike) -> MatrixModel:
    """Z = diag-from-measure + c * strictly upper Gaussian, independent streams."""
    if c < 0:
        raise ConfigError("matrix.c", f"c must be nonnegative, got {c}")
    ss = _seed_seq(seed)
    ss_d, ss_t = ss.spawn(2)
    D = diag_from_measure(mu, N, ss_d)
    T = sample_ut(N, ss_t)
    return MatrixModel(Z=D + c * T, D=D, T=T, c=float(c))


def _diag_projection(N: int, lo: int, hi: int) -> np.ndarray:
    p = np.zeros((N, N), dtype=complex)
    idx = np.arange(lo, hi)
    p[idx, idx] = 1.0
    return p


def build_block_dt(
    parts: Sequence[tuple[RadialMeasure, float]],
    c: float,
    N: int,
    seed: SeedLike,
) -> MatrixModel:
    """Block upper triangular model over a diagonal partition.

    Each diagonal block i is an independent model for (mu_i, c*sqrt(t_i)) at
    its own size N_i (realized as t_i: N_i/N); the strictly-upper off-diagonal
    blocks are c times the corresponding blocks of a single Hermitian Gaussian
    sample, so a lower-indexed block never sees a higher one: p_j Z p_i = 0
    exactly for i < j.
    """
    if c < 0:
        raise ConfigError("matrix.c", f"c must be nonnegative, got {c}")
    if not parts:
        raise ConfigError("matrix.parts", "need at least one part")
    weights = [float(t) for _, t in parts]
    if any(w <= 0 for w in weights):
        raise ConfigError("matrix.parts", f"part weights must be positive: {weights}")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ConfigError(
            "matrix.parts", f"part weights sum to {sum(weights)}, expected 1"
        )
    sizes = apportion(weights, N)
    if any(n < 2 for n in sizes):
        raise MeasureResolutionError(
            f"block sizes {sizes} at N={N}: every block needs >= 2 slots"
        )
    ss = _seed_seq(seed)
    streams = ss.spawn(2 * len(parts) + 1)
    X = sample_gue(N, streams[-1])

    D = np.zeros((N, N), dtype=complex)
    T = np.zeros((N, N), dtype=complex)
    blocks: list[tuple[np.ndarray, float]] = []
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    for i, ((mu_i, t_i), n_i) in enumerate(zip(parts, sizes)):
        lo, hi = bounds[i], bounds[i + 1]
        D[lo:hi, lo:hi] = diag_from_measure(mu_i, n_i, streams[2 * i])
        # entries of the big T must have variance 1/N inside diagonal blocks
        # too; a size-n_i sample has variance 1/n_i, so rescale.
        T[lo:hi, lo:hi] = np.sqrt(n_i / N) * sample_ut(n_i, streams[2 * i + 1])
        blocks.append((_diag_projection(N, lo, hi), float(t_i)))
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            T[bounds[i] : bounds[i + 1], bounds[j] : bounds[j + 1]] = X[
                bounds[i] : bounds[i + 1], bounds[j] : bounds[j + 1]
            ]
    return MatrixModel(Z=D + c * T, D=D, T=T, c=float(c), blocks=tuple(blocks))


def semicircular_mix(
    Xtilde: np.ndarray, X: np.ndarray, projections: Sequence[np.ndarray]
) -> np.ndarray:
    """Mix two Hermitian samples across a diagonal partition: diagonal
    compressions from the first, off-diagonal cross terms from the second.
    The result is Hermitian and (in law) again a semicircular sample."""
    N = Xtilde.shape[0]
    if Xtilde.shape != (N, N) or X.shape != (N, N):
        raise ConfigError("matrix.mix", "shape mismatch between samples")
    for M, name in ((Xtilde, "Xtilde"), (X, "X")):
        if np.linalg.norm(M - M.conj().T, 2) > 1e-10 * max(1.0, np.linalg.norm(M, 2)):
            raise ConfigError("matrix.mix", f"{name} is not Hermitian")
    total = np.zeros(N)
    masks = []
    for p in projections:
        d = np.real(np.diag(p))
        if not np.array_equal(p, np.diag(d)) or not np.all((d == 0) | (d == 1)):
            raise ConfigError("matrix.mix", "projections must be diagonal 0/1 matrices")
        total += d
        masks.append(d)
    if not np.all(total == 1.0):
        raise ConfigError("matrix.mix", "projections must partition the identity")
    diag_mask = np.zeros((N, N))
    for d in masks:
        diag_mask += np.outer(d, d)
    return Xtilde * diag_mask + X * (1.0 - diag_mask)


# -- linear algebra services ---------------------------------------------------


def op_norm(A: np.ndarray) -> float:
    """Operator norm (largest singular value)."""
    return float(np.linalg.norm(A, 2))


def normalized_trace(A: np.ndarray) -> complex:
    return complex(np.trace(A) / A.shape[0])


def gns_norm(A: np.ndarray) -> float:
    """sqrt(tau(A* A)): Frobenius norm scaled by 1/sqrt(N)."""
    return float(np.linalg.norm(A, "fro") / np.sqrt(A.shape[0]))


def inverse(A: np.ndarray) -> np.ndarray:
    """Inverse with a condition-number guard and a residual check."""
    N = A.shape[0]
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > CONDITION_CUTOFF:
        cond = np.inf if sv[-1] == 0.0 else sv[0] / sv[-1]
        raise SingularMatrixError(
            f"condition estimate {cond:.3e} exceeds cutoff {CONDITION_CUTOFF:.1e}"
        )
    Ainv = np.linalg.inv(A)
    resid = np.linalg.norm(A @ Ainv - np.eye(N), 2)
    if resid > INVERSE_RESIDUAL_TOL:
        raise SingularMatrixError(f"inverse residual {resid:.3e} above tolerance")
    return Ainv


def schur(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur decomposition A = Q U Q* with U upper triangular.

    Returns (Q, U). Non-convergence is surfaced as a numerical abort.
    """
    try:
        U, Q = scipy.linalg.schur(np.asarray(A, dtype=complex), output="complex")
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalAbortError("matrix.schur", f"Schur failed: {exc}") from exc
    return Q, U


def reorder_schur(
    Q: np.ndarray, U: np.ndarray, predicate: Callable[[complex], bool]
) -> tuple[np.ndarray, np.ndarray, int]:
    """Reorder a Schur pair so all eigenvalues satisfying the predicate occupy
    the leading diagonal positions. Returns (Q', U', k) with k the number of
    selected eigenvalues; Q' U' Q'* still equals the original matrix.

    Uses LAPACK ztrexc moves; an ill-conditioned swap is reported as a
    reordering failure rather than silently degrading the factorization.
    """
    n = U.shape[0]
    A_ref = Q @ U @ Q.conj().T
    U = np.array(U, dtype=complex, order="F")
    Q = np.array(Q, dtype=complex, order="F")
    k = 0
    for target in range(n):
        j = next(
            (jj for jj in range(target, n) if predicate(complex(U[jj, jj]))), None
        )
        if j is None:
            break
        if j != target:
            U, Q, info = _lapack.ztrexc(U, Q, j + 1, target + 1)
            if info != 0:
                raise SchurSwapError(
                    f"ztrexc failed moving position {j} to {target} (info={info})"
                )
        k += 1
    resid = np.linalg.norm(Q @ U @ Q.conj().T - A_ref, 2)
    if resid > 1e-8 * max(1.0, np.linalg.norm(A_ref, 2)):
        raise SchurSwapError(f"reordering destroyed the factorization: residual {resid:.3e}")
    return Q, U, k


# -- serialization --------------------------------------------------------------

_MAGIC = b"DTLM"


def matrix_to_bytes(A: np.ndarray) -> bytes:
    """Simple binary container: magic, version, dims, row-major complex doubles
    (little endian)."""
    A = np.ascontiguousarray(A, dtype=np.complex128)
    header = _MAGIC + struct.pack("<BQQ", 1, A.shape[0], A.shape[1])
    return header + A.astype("<c16").tobytes()


def matrix_from_bytes(buf: bytes) -> np.ndarray:
    if buf[:4] != _MAGIC:
        raise ConfigError("matrix.container", "bad magic in matrix container")
    version, rows, cols = struct.unpack("<BQQ", buf[4:21])
    if version != 1:
        raise ConfigError("matrix.container", f"unsupported container version {version}")
    data = np.frombuffer(buf[21:], dtype="<c16", count=rows * cols)
    return data.reshape(rows, cols).astype(np.complex128)


def matrix_to_json_obj(A: np.ndarray) -> dict:
    """JSON form for small matrices: row-major [re, im] pairs."""
    A = np.asarray(A, dtype=complex)
    return {
        "rows": A.shape[0],
        "cols": A.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in A.ravel()],
    }


def matrix_from_json_obj(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        flat = np.array([complex(re, im) for re, im in obj["entries"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("matrix.json", f"bad matrix JSON: {exc}") from exc
    if flat.size != rows * cols:
        raise ConfigError("matrix.json", "entry count does not match dims")
    return flat.reshape(rows, cols)


def model_to_json_obj(model: MatrixModel) -> dict:
    return {
        "c": model.c,
        "N": model.N,
        "Z": matrix_to_json_obj(model.Z),
        "D": matrix_to_json_obj(model.D),
        "T": matrix_to_json_obj(model.T),
        "block_weights": [w for _, w in model.blocks],
    }


def save_matrix(path: str, A: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(matrix_to_bytes(A))


def load_matrix(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        return matrix_from_bytes(fh.read())


def to_json(A: np.ndarray) -> str:
    return json.dumps(matrix_to_json_obj(A))


def from_json(s: str) -> np.ndarray:
    return matrix_from_json_obj(json.loads(s))
