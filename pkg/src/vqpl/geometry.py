"""Backbone geometry: CA traces <-> internal-coordinate angle sequences.

A chain of n CA atoms is described by n+2 triples (r, alpha, beta):

* entry 0 and entry n+1 are fixed virtual boundary triples (1, 1, 1),
* entry u (1 <= u <= n) gives the placement of atom u relative to the
  local frame of its three predecessors: bond length r, the angle alpha
  between the reversed previous bond and the new bond, and the signed
  dihedral beta between the two frame planes.

The first three atoms have no real predecessors, so three virtual atoms
are synthesised by walking the (1, 1, 1) triples backwards out of the
first real frame.  This makes the representation exactly invertible:
the leading entries of any parameterized chain come out as (1, 1, 1),
(r2, 1, 1), (r3, alpha3, 1), which together with the free triples from
atom 4 onwards carry exactly the 3n - 6 shape degrees of freedom.

Reconstruction replays the triples from a canonical seed frame (virtual
atom -2 at the origin, atom -1 on +x, atom 0 in the xy-plane), so token
-> structure output is reproducible bit for bit.

All functions are pure; coordinates are float64 arrays in Angstrom.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfigurationWarning,
    DegenerateGeometry,
    InvalidAngle,
    ShapeMismatch,
    TooShort,
)

VIRTUAL_TRIPLE = (1.0, 1.0, 1.0)

_MIN_CONSECUTIVE_DIST = 1e-6
_MIN_CROSS_NORM = 1e-9


@dataclass(frozen=True)
class RigidTransform:
    """Proper rigid motion x -> rotation @ x + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.rotation.T + self.translation


def validate_coords(coords: np.ndarray) -> np.ndarray:
    """Check chain validity for parameterization.

    Args:
        coords: (n, 3) CA positions.

    Returns:
        The input as a float64 array.

    Raises:
        TooShort: fewer than 4 atoms.
        DegenerateGeometry: coincident consecutive atoms or three
            consecutive atoms collinear (dihedrals undefined).
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 3:
        raise ShapeMismatch(f"expected (n, 3) coordinates, got {coords.shape}")
    n = coords.shape[0]
    if n < 4:
        raise TooShort(f"need at least 4 atoms, got {n}")
    diffs = np.diff(coords, axis=0)
    dists = np.linalg.norm(diffs, axis=1)
    if np.any(dists <= _MIN_CONSECUTIVE_DIST):
        i = int(np.argmax(dists <= _MIN_CONSECUTIVE_DIST))
        raise DegenerateGeometry(f"atoms {i} and {i + 1} coincide")
    cross = np.cross(diffs[:-1], diffs[1:])
    cross_norm = np.linalg.norm(cross, axis=1)
    if np.any(cross_norm <= _MIN_CROSS_NORM):
        i = int(np.argmax(cross_norm <= _MIN_CROSS_NORM))
        raise DegenerateGeometry(f"atoms {i}..{i + 2} are collinear")
    return coords


def place_atom(a, b, c, r: float, alpha: float, beta: float) -> np.ndarray:
    """Place atom d past frame (a, b, c) with the given internal triple.

    d sits at distance r from c, with angle(b - c, d - c) = alpha and
    signed dihedral(a, b, c, d) = beta.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    v2 = c - b
    u = v2 / np.linalg.norm(v2)
    q = np.cross(b - a, v2)
    q /= np.linalg.norm(q)
    p = np.cross(q, u)
    sin_a = math.sin(alpha)
    return c + r * (
        -math.cos(alpha) * u
        + sin_a * math.cos(beta) * p
        + sin_a * math.sin(beta) * q
    )


def measure_triple(a, b, c, d) -> tuple[float, float, float]:
    """Internal triple (r, alpha, beta) of atom d relative to frame (a, b, c)."""
    v1 = np.subtract(b, a)
    v2 = np.subtract(c, b)
    v3 = np.subtract(d, c)
    r = float(np.linalg.norm(v3))
    cos_a = float(np.dot(-v2, v3) / (np.linalg.norm(v2) * r))
    alpha = math.acos(min(1.0, max(-1.0, cos_a)))
    n1 = np.cross(v1, v2)
    n2 = np.cross(v2, v3)
    y = float(np.dot(np.cross(n1, n2), v2 / np.linalg.norm(v2)))
    x = float(np.dot(n1, n2))
    return r, alpha, math.atan2(y, x)


def _virtual_predecessors(coords: np.ndarray) -> np.ndarray:
    """Three virtual atoms obtained by inverting (1,1,1) out of the first frame."""
    v0 = place_atom(coords[2], coords[1], coords[0], *VIRTUAL_TRIPLE)
    vm1 = place_atom(coords[1], coords[0], v0, *VIRTUAL_TRIPLE)
    vm2 = place_atom(coords[0], v0, vm1, *VIRTUAL_TRIPLE)
    return np.array([vm2, vm1, v0])


def torsion_parametrize(coords: np.ndarray) -> np.ndarray:
    """Convert a CA trace to its angle sequence.

    Args:
        coords: (n, 3) CA positions satisfying `validate_coords`.

    Returns:
        (n + 2, 3) array of (r, alpha, beta) triples; rows 0 and n+1 are
        the fixed virtual triples (1, 1, 1).
    """
    coords = validate_coords(coords)
    n = coords.shape[0]
    ext = np.concatenate([_virtual_predecessors(coords), coords], axis=0)

    a = ext[:-3]
    b = ext[1:-2]
    c = ext[2:-1]
    d = ext[3:]
    v1 = b - a
    v2 = c - b
    v3 = d - c
    r = np.linalg.norm(v3, axis=1)
    v2n = np.linalg.norm(v2, axis=1)
    cos_a = np.einsum("ij,ij->i", -v2, v3) / (v2n * r)
    alpha = np.arccos(np.clip(cos_a, -1.0, 1.0))
    n1 = np.cross(v1, v2)
    n2 = np.cross(v2, v3)
    y = np.einsum("ij,ij->i", np.cross(n1, n2), v2 / v2n[:, None])
    x = np.einsum("ij,ij->i", n1, n2)
    beta = np.arctan2(y, x)

    out = np.empty((n + 2, 3))
    out[0] = VIRTUAL_TRIPLE
    out[1:-1, 0] = r
    out[1:-1, 1] = alpha
    out[1:-1, 2] = beta
    out[-1] = VIRTUAL_TRIPLE
    return out


def validate_angles(angles: np.ndarray) -> np.ndarray:
    """Check an angle sequence before reconstruction.

    Raises:
        InvalidAngle: r <= 0 or alpha outside (0, pi) at a real entry,
            or boundary entries not equal to (1, 1, 1).
        TooShort: fewer than 4 real entries.
    """
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim != 2 or angles.shape[1] != 3:
        raise ShapeMismatch(f"expected (n + 2, 3) triples, got {angles.shape}")
    if angles.shape[0] < 6:
        raise TooShort(f"need at least 4 real entries, got {angles.shape[0] - 2}")
    if not np.allclose(angles[0], VIRTUAL_TRIPLE, rtol=0.0, atol=1e-9) or not np.allclose(
        angles[-1], VIRTUAL_TRIPLE, rtol=0.0, atol=1e-9
    ):
        raise InvalidAngle("boundary entries must be the virtual triple (1, 1, 1)")
    real = angles[1:-1]
    if not np.all(np.isfinite(real)):
        raise InvalidAngle("non-finite angle entry")
    if np.any(real[:, 0] <= 0.0):
        raise InvalidAngle("bond length r must be positive")
    if np.any(real[:, 1] <= 0.0) or np.any(real[:, 1] >= math.pi):
        raise InvalidAngle("alpha must lie strictly inside (0, pi)")
    return angles


# Canonical reconstruction seed: virtual atom -2 at the origin, -1 on the
# +x axis, 0 in the xy-plane, mutually posed like the inverted (1,1,1)
# frame (unit bonds, 1 rad bend).
_SEED = np.array(
    [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0 - math.cos(1.0), math.sin(1.0), 0.0],
    ]
)


def torsion_reconstruct(angles: np.ndarray) -> np.ndarray:
    """Rebuild CA coordinates from an angle sequence.

    The output pose is canonical (determined by the fixed seed frame);
    it matches the original chain up to a proper rigid motion.

    Args:
        angles: (n + 2, 3) triples including the virtual boundary rows.

    Returns:
        (n, 3) coordinates.
    """
    angles = validate_angles(angles)
    n = angles.shape[0] - 2
    chain = np.empty((n + 3, 3))
    chain[:3] = _SEED
    for i in range(n):
        r, alpha, beta = angles[i + 1]
        chain[i + 3] = place_atom(chain[i], chain[i + 1], chain[i + 2], r, alpha, beta)
    return chain[3:]


def kabsch(p: np.ndarray, q: np.ndarray) -> tuple[RigidTransform, float]:
    """Least-squares rigid superposition of p onto q.

    Args:
        p: (n, 3) points to move.
        q: (n, 3) reference points.

    Returns:
        (transform, rmsd): the proper rotation+translation minimising
        ||R p + t - q|| and the resulting RMSD in Angstrom.

    Raises:
        ShapeMismatch: unequal lengths or n < 3.

    Warns:
        DegenerateConfigurationWarning: covariance is rank-deficient so
        the optimum is non-unique; one optimum is still returned.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 2 or p.shape[1] != 3:
        raise ShapeMismatch(f"incompatible point sets {p.shape} vs {q.shape}")
    if p.shape[0] < 3:
        raise ShapeMismatch("need at least 3 points")
    p_mean = p.mean(axis=0)
    q_mean = q.mean(axis=0)
    h = (p - p_mean).T @ (q - q_mean)
    u, s, vt = np.linalg.svd(h)
    if s[1] <= 1e-12 * max(s[0], 1.0):
        warnings.warn(
            "rank-deficient covariance; superposition is not unique",
            DegenerateConfigurationWarning,
            stacklevel=2,
        )
    d = np.sign(np.linalg.det(vt.T @ u.T))
    rot = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    trans = q_mean - rot @ p_mean
    moved = p @ rot.T + trans
    rmsd = float(np.sqrt(np.mean(np.sum((moved - q) ** 2, axis=1))))
    return RigidTransform(rotation=rot, translation=trans), rmsd


def tm_d0(length: int) -> float:
    """Length-dependent distance scale, floored at 0.5 for short chains."""
    return max(1.24 * np.cbrt(length - 15.0) - 1.8, 0.5)


def _tm_from_distances(dists: np.ndarray, d0: float) -> float:
    return float(np.mean(1.0 / (1.0 + (dists / d0) ** 2)))


def tm_score(p: np.ndarray, q: np.ndarray) -> float:
    """Structure similarity in (0, 1] after optimal superposition.

    Residue correspondence is positional (no alignment search).  The
    superposition is refined iteratively from several fragment seeds:
    align on a fragment, score all residues, keep the close ones,
    realign, repeat; the best score over all seeds is reported.

    Args:
        p, q: equal-length (L, 3) CA coordinates, L >= 3.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 2 or p.shape[1] != 3:
        raise ShapeMismatch(f"incompatible point sets {p.shape} vs {q.shape}")
    length = p.shape[0]
    if length < 3:
        raise ShapeMismatch("need at least 3 residues")
    d0 = tm_d0(length)
    keep_cutoff = max(d0, 1.0) + 1.0

    seeds: list[np.ndarray] = []
    for frag in {length, max(length // 2, 4), max(length // 4, 4)}:
        step = max(frag // 2, 1)
        for start in range(0, length - frag + 1, step):
            seeds.append(np.arange(start, start + frag))

    best = 0.0
    for seed in seeds:
        sel = seed
        prev: np.ndarray | None = None
        for _ in range(20):
            if sel.shape[0] < 3:
                break
            transform, _ = kabsch(p[sel], q[sel])
            dists = np.linalg.norm(transform.apply(p) - q, axis=1)
            best = max(best, _tm_from_distances(dists, d0))
            cutoff = keep_cutoff
            nxt = np.nonzero(dists < cutoff)[0]
            while nxt.shape[0] < 3:
                cutoff *= 1.5
                nxt = np.nonzero(dists < cutoff)[0]
            if prev is not None and nxt.shape[0] == prev.shape[0] and np.all(nxt == prev):
                break
            prev, sel = sel, nxt
    return best


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random proper rotation matrix (QR of a Gaussian matrix)."""
    m, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(m) < 0:
        m[:, 0] = -m[:, 0]
    return m


def angles_to_record(chain_id: str, angles: np.ndarray) -> dict:
    """Angle sequence as a JSON-lines record (radians, full precision)."""
    return {"id": chain_id, "triples": np.asarray(angles, dtype=np.float64).tolist()}


def angles_from_record(record: dict) -> tuple[str, np.ndarray]:
    """Inverse of `angles_to_record`."""
    return str(record["id"]), np.asarray(record["triples"], dtype=np.float64)
