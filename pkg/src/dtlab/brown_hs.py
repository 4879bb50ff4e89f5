"""Spectral-subspace computations at matrix scale.

The empirical Brown measure of a matrix is its eigenvalue counting measure.
For a region of the plane built from centered annuli, the associated spectral
projection is the orthogonal projection onto the span of the generalized
eigenvectors whose eigenvalues lie in the region, realized by reordering a
complex Schur decomposition. Angles between two such subspaces are measured by
the largest singular value of the product of the projections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BoundaryAmbiguityError, ConfigError
from .matrix_lab import inverse, op_norm, reorder_schur, schur

BOUNDARY_TOL = 1e-8
INVARIANCE_TOL = 1e-8
LATTICE_TOL = 1e-8
SIMILARITY_TOL = 1e-6
CERTIFICATE_SLACK = 1.05


# -- regions -------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Boolean combination of centered annuli.

    Tree nodes: kind "annulus" (leaf, radii r <= s, closed or open bounds),
    "union"/"intersect" (n-ary), "complement" (unary). Membership for exact
    radius values is decided by plain comparisons, so inputs whose moduli are
    exactly representable classify exactly.
    """

    kind: str
    r: float = 0.0
    s: float = 0.0
    closed: bool = True
    args: tuple["Region", ...] = ()

    @staticmethod
    def annulus(r: float, s: float, closed: bool = True) -> "Region":
        if not (0 <= r <= s):
            raise ConfigError("region.annulus", f"need 0 <= r <= s, got ({r}, {s})")
        return Region(kind="annulus", r=float(r), s=float(s), closed=closed)

    @staticmethod
    def disc(s: float, closed: bool = True) -> "Region":
        return Region.annulus(0.0, s, closed)

    @staticmethod
    def union(*regions: "Region") -> "Region":
        if not regions:
            raise ConfigError("region.union", "union needs at least one operand")
        return Region(kind="union", args=tuple(regions))

    @staticmethod
    def intersect(*regions: "Region") -> "Region":
        if not regions:
            raise ConfigError("region.intersect", "intersect needs at least one operand")
        return Region(kind="intersect", args=tuple(regions))

    def complement(self) -> "Region":
        return Region(kind="complement", args=(self,))

    def contains(self, z: complex) -> bool:
        m = abs(z)
        if self.kind == "annulus":
            if self.closed:
                return self.r <= m <= self.s
            return self.r < m < self.s
        if self.kind == "union":
            return any(a.contains(z) for a in self.args)
        if self.kind == "intersect":
            return all(a.contains(z) for a in self.args)
        if self.kind == "complement":
            return not self.args[0].contains(z)
        raise ConfigError("region.kind", f"unknown region kind {self.kind!r}")

    def boundary_radii(self) -> tuple[float, ...]:
        """All annulus radii in the tree; a conservative superset of the
        region's true topological boundary. Radius 0 is a point, not a
        separating circle, so it is excluded."""
        if self.kind == "annulus":
            return tuple(v for v in (self.r, self.s) if v > 0.0)
        out: list[float] = []
        for a in self.args:
            out.extend(a.boundary_radii())
        return tuple(sorted(set(out)))

    def to_json_obj(self) -> dict:
        if self.kind == "annulus":
            return {"annulus": {"r": self.r, "s": self.s, "closed": self.closed}}
        if self.kind == "complement":
            return {"op": "complement", "arg": self.args[0].to_json_obj()}
        return {"op": self.kind, "args": [a.to_json_obj() for a in self.args]}

    @staticmethod
    def from_json_obj(obj: dict) -> "Region":
        if not isinstance(obj, dict):
            raise ConfigError("region.json", f"expected an object, got {obj!r}")
        if "annulus" in obj:
            a = obj["annulus"]
            try:
                return Region.annulus(a["r"], a["s"], bool(a.get("closed", True)))
            except (KeyError, TypeError) as exc:
                raise ConfigError("region.json", f"bad annulus: {a!r}") from exc
        op = obj.get("op")
        if op == "complement":
            return Region.from_json_obj(obj["arg"]).complement()
        if op in ("union", "intersect"):
            parts = [Region.from_json_obj(o) for o in obj["args"]]
            return Region.union(*parts) if op == "union" else Region.intersect(*parts)
        raise ConfigError("region.json", f"unknown region node: {obj!r}")


# -- empirical Brown measure -----------------------------------------------------


def brown_empirical(Z: np.ndarray) -> np.ndarray:
    """Eigenvalues of Z (multiset of the counting measure), sorted by
    (real, imag) so reports are stable."""
    ev = np.linalg.eigvals(np.asarray(Z, dtype=complex))
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]


# -- spectral projections ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HSProjection:
    """Orthogonal projection onto the generalized eigenspace span for a region.

    basis: orthonormal N x k matrix spanning the range; P = basis basis*.
    source is the matrix the projection belongs to.
    """

    basis: np.ndarray
    region: Region
    source: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def P(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def hs_projection(Z: np.ndarray, region: Region) -> HSProjection:
    """Spectral projection of Z for the given region.

    Aborts if any eigenvalue is within 1e-8 of a boundary radius (ambiguous
    classification) and validates the defining invariance property
    ||(1-P) Z P|| <= 1e-8 ||Z||.
    """
    Z = np.asarray(Z, dtype=complex)
    Q, U = schur(Z)
    eigs = np.diag(U)
    radii = region.boundary_radii()
    if radii:
        dist = np.min(np.abs(np.abs(eigs)[:, None] - np.array(radii)[None, :]), axis=1)
        bad = int(np.argmin(dist))
        if dist[bad] < BOUNDARY_TOL:
            raise BoundaryAmbiguityError(
                f"eigenvalue {eigs[bad]:.12g} lies within {dist[bad]:.3e} "
                f"of a region boundary (tolerance {BOUNDARY_TOL:.1e})"
            )
    Qr, Ur, k = reorder_schur(Q, U, region.contains)
    basis = np.ascontiguousarray(Qr[:, :k])
    proj = HSProjection(basis=basis, region=region, source=Z)
    if k:
        nrmZ = op_norm(Z)
        P = proj.P
        resid = op_norm((np.eye(Z.shape[0]) - P) @ Z @ P)
        if resid > INVARIANCE_TOL * max(1.0, nrmZ):
            raise BoundaryAmbiguityError(
                f"projection range is not invariant: residual {resid:.3e}"
            )
    return proj


def angle_cos(P: HSProjection, Q: HSProjection) -> float:
    """Cosine of the smallest angle between the ranges: the largest singular
    value of the product of the two projections, clipped into [0, 1]."""
    if P.rank == 0 or Q.rank == 0:
        raise ConfigError("spectral.angle", "angle needs two nonzero projections")
    sv = np.linalg.svd(Q.basis.conj().T @ P.basis, compute_uv=False)
    return float(np.clip(sv[0], 0.0, 1.0))


# -- subspace utilities ------------------------------------------------------------


def _orth(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the column span, rank cut at tol relative to the
    largest singular value."""
    if M.shape[1] == 0:
        return M
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    return np.ascontiguousarray(u[:, s > tol * s[0]])


def subspace_join(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return _orth(np.concatenate([A, B], axis=1))


def subspace_meet(A: np.ndarray, B: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Intersection of two spans via principal vectors: directions whose
    principal cosine is within tol of 1."""
    if A.shape[1] == 0 or B.shape[1] == 0:
        return A[:, :0]
    u, s, _ = np.linalg.svd(A.conj().T @ B, full_matrices=False)
    keep = s >= 1.0 - tol
    return _orth(A @ u[:, keep])


def subspace_distance(A: np.ndarray, B: np.ndarray) -> float:
    """Operator-norm distance between the orthogonal projections onto the two
    spans; for equal dimensions this is the sine of the largest principal
    angle, and it is 1 when the dimensions differ."""
    PA = A @ A.conj().T
    PB = B @ B.conj().T
    return float(np.linalg.norm(PA - PB, 2))


# -- law checks ---------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeReport:
    union_distance: float
    intersect_distance: float
    rank_b1: int
    rank_b2: int
    rank_union: int
    rank_intersect: int
    passed: bool


def check_lattice(Z: np.ndarray, B1: Region, B2: Region) -> LatticeReport:
    """Verify the subspace lattice laws: the projection for a union matches the
    join of the projections, and the intersection matches the meet."""
    p1 = hs_projection(Z, B1)
    p2 = hs_projection(Z, B2)
    pu = hs_projection(Z, Region.union(B1, B2))
    pi = hs_projection(Z, Region.intersect(B1, B2))
    join = subspace_join(p1.basis, p2.basis)
    meet = subspace_meet(p1.basis, p2.basis)
    du = subspace_distance(pu.basis, join)
    di = subspace_distance(pi.basis, meet)
    return LatticeReport(
        union_distance=du,
        intersect_distance=di,
        rank_b1=p1.rank,
        rank_b2=p2.rank,
        rank_union=pu.rank,
        rank_intersect=pi.rank,
        passed=bool(du < LATTICE_TOL and di < LATTICE_TOL),
    )


@dataclass(frozen=True)
class SimilarityReport:
    eig_hausdorff: float
    subspace_dist: float
    passed: bool


def check_similarity(Z: np.ndarray, A: np.ndarray, B: Region) -> SimilarityReport:
    """A similarity A Z A^-1 keeps the eigenvalue multiset and maps the region
    subspace to A times it. Checked with Hausdorff distance on spectra
    (relative to ||Z||) and subspace distance, both at 1e-6."""
    Z = np.asarray(Z, dtype=complex)
    A = np.asarray(A, dtype=complex)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > 1e8:
        raise ConfigError("spectral.similarity", "similarity is too ill-conditioned")
    ZA = A @ Z @ inverse(A)
    ev1 = np.linalg.eigvals(Z)
    ev2 = np.linalg.eigvals(ZA)
    d = np.abs(ev1[:, None] - ev2[None, :])
    haus = max(float(d.min(axis=0).max()), float(d.min(axis=1).max()))
    haus_rel = haus / max(1.0, op_norm(Z))
    p = hs_projection(Z, B)
    pa = hs_projection(ZA, B)
    mapped = _orth(A @ p.basis)
    dist = subspace_distance(mapped, pa.basis)
    return SimilarityReport(
        eig_hausdorff=haus_rel,
        subspace_dist=dist,
        passed=bool(haus_rel < SIMILARITY_TOL and dist < SIMILARITY_TOL),
    )


def sot_qn_decay(T: np.ndarray, n_max: int) -> list[float]:
    """Norms ||(T*^n T^n)^(1/2n)|| for n = 1..n_max, which equal ||T^n||^(1/n).

    For strictly upper triangular T the sequence collapses to exactly 0 once
    n reaches the matrix size.
    """
    if n_max < 1:
        raise ConfigError("spectral.decay", f"n_max must be >= 1, got {n_max}")
    T = np.asarray(T, dtype=complex)
    out: list[float] = []
    power = np.eye(T.shape[0], dtype=complex)
    for n in range(1, n_max + 1):
        power = power @ T
        nrm = op_norm(power)
        out.append(0.0 if nrm == 0.0 else float(nrm ** (1.0 / n)))
    return out


@dataclass(frozen=True)
class CertificateReport:
    values: tuple[float, ...]
    tail_max: float
    threshold: float
    passed: bool


def hs_membership_certificate(
    Z: np.ndarray, r: float, xi: np.ndarray, n_max: int = 64
) -> CertificateReport:
    """Growth certificate for membership of xi in the disc-r subspace.

    Computes ||Z^n xi||^(1/n) for n = 1..n_max; the tail max (last quarter of
    the sequence) must not exceed r * 1.05. xi must be a unit vector.
    """
    if r <= 0:
        raise ConfigError("spectral.certificate", f"r must be positive, got {r}")
    if n_max < 4:
        raise ConfigError("spectral.certificate", f"n_max must be >= 4, got {n_max}")
    xi = np.asarray(xi, dtype=complex).ravel()
    if abs(np.linalg.norm(xi) - 1.0) > 1e-8:
        raise ConfigError("spectral.certificate", "xi must be a unit vector")
    Z = np.asarray(Z, dtype=complex)
    vals: list[float] = []
    v = xi
    for n in range(1, n_max + 1):
        v = Z @ v
        nrm = float(np.linalg.norm(v))
        vals.append(0.0 if nrm == 0.0 else nrm ** (1.0 / n))
    tail = vals[-max(1, n_max // 4) :]
    tail_max = max(tail)
    threshold = r * CERTIFICATE_SLACK
    return CertificateReport(
        values=tuple(vals),
        tail_max=tail_max,
        threshold=threshold,
        passed=bool(tail_max <= threshold),
    )
