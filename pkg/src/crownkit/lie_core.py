"""Matrix models of Hermitian Lie algebras and their restricted root structure.

Supported pairs: sl(2,R), su(p,q) with p+q <= 4, sp(4,R).  Everything downstream
works in coordinates over an ordered basis adapted to the decomposition

    g = a (+) p-blocks (+) m (+) k-blocks,

which is assembled by :func:`build_so_system` and carried by :class:`SOSystem`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    ConfigurationError,
    DecompositionError,
    DomainError,
    NotHermitianError,
    StructureError,
)

__all__ = [
    "LieAlgebraModel",
    "Root",
    "RootDatum",
    "RootBlock",
    "SOSystem",
    "PDecomposition",
    "SUPPORTED_SPACES",
    "build_algebra",
    "restricted_root_decomposition",
    "build_so_system",
    "decompose_p_vector",
    "debug_dump",
]

# Generic element of a used to split the ad-eigenspaces: square roots of distinct
# primes keep all root values on it separated.
_GENERIC_WEIGHTS = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0]))

_CLUSTER_TOL = 1e-8


# ---------------------------------------------------------------------------
# matrix realizations
# ---------------------------------------------------------------------------

def _sl2r_realization():
    a = np.array([[1.0, 0.0], [0.0, -1.0]])
    p = np.array([[0.0, 1.0], [1.0, 0.0]])
    k = np.array([[0.0, 1.0], [-1.0, 0.0]])
    basis = [a, p, k]
    theta = lambda x: -x.T
    return basis, [a], theta


def _supq_realization(p: int, q: int):
    n = p + q
    basis = []
    # diagonal part of k: i(E_jj - E_{j+1,j+1})
    for j in range(n - 1):
        m = np.zeros((n, n), dtype=complex)
        m[j, j] = 1j
        m[j + 1, j + 1] = -1j
        basis.append(m)
    # off-diagonal k inside the two diagonal blocks
    for lo, hi in ((0, p), (p, n)):
        for j in range(lo, hi):
            for k in range(j + 1, hi):
                m = np.zeros((n, n), dtype=complex)
                m[j, k] = 1.0
                m[k, j] = -1.0
                basis.append(m)
                m = np.zeros((n, n), dtype=complex)
                m[j, k] = 1j
                m[k, j] = 1j
                basis.append(m)
    # p: mixed blocks
    a_basis = []
    for j in range(p):
        for k in range(p, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            basis.append(m)
            if k - p == j:
                a_basis.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = 1j
            m[k, j] = -1j
            basis.append(m)
    theta = lambda x: -np.conj(x).T
    return basis, a_basis, theta


def _sp4r_realization():
    basis = []
    # block form [[a, b], [c, -a^T]] with b, c symmetric
    for j in range(2):
        for k in range(2):
            m = np.zeros((4, 4))
            m[j, k] = 1.0
            m[2 + k, 2 + j] = -1.0
            basis.append(m)
    sym = [np.array([[1.0, 0.0], [0.0, 0.0]]),
           np.array([[0.0, 0.0], [0.0, 1.0]]),
           np.array([[0.0, 1.0], [1.0, 0.0]])]
    for s in sym:
        m = np.zeros((4, 4))
        m[:2, 2:] = s
        basis.append(m)
    for s in sym:
        m = np.zeros((4, 4))
        m[2:, :2] = s
        basis.append(m)
    a1 = np.zeros((4, 4))
    a1[0, 0], a1[2, 2] = 1.0, -1.0
    a2 = np.zeros((4, 4))
    a2[1, 1], a2[3, 3] = 1.0, -1.0
    theta = lambda x: -x.T
    return basis, [a1, a2], theta


_SUPQ_NAME = re.compile(r"^su(\d)(\d)$")

SUPPORTED_SPACES = ("sl2r", "su11", "su12", "su21", "su13", "su31", "su22", "sp4r")


def _realization(name: str):
    if name == "sl2r":
        return _sl2r_realization()
    if name == "sp4r":
        return _sp4r_realization()
    m = _SUPQ_NAME.match(name)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if p >= 1 and q >= 1 and p + q <= 4:
            return _supq_realization(p, q)
    raise ConfigurationError(
        f"unsupported space {name!r}; supported: {', '.join(SUPPORTED_SPACES)}"
    )


# ---------------------------------------------------------------------------
# the Lie algebra model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebraModel:
    """A real matrix Lie algebra with Cartan involution and Killing form.

    Coordinates are real vectors over ``basis``; ``ad[i]`` is the adjoint
    matrix of ``basis[i]`` in those coordinates, and ``killing`` is computed
    from traces of adjoint products, not from a pre-tabulated multiple of the
    defining trace form.
    """

    name: str
    dim: int
    basis: tuple
    theta: np.ndarray          # (n, n) involution in coordinates
    killing: np.ndarray        # (n, n) symmetric
    ad: np.ndarray             # (n, n, n), ad[i] = ad(basis[i])
    a_coords: np.ndarray       # (r, n) chosen maximal abelian subspace of p
    _vec_pinv: np.ndarray      # matrix -> coordinates solver

    @property
    def rank(self) -> int:
        return self.a_coords.shape[0]

    @property
    def b_theta(self) -> np.ndarray:
        """Positive definite form B_theta(x, y) = -B(x, theta y)."""
        return -self.killing @ self.theta

    def coords_of(self, matrix: np.ndarray) -> np.ndarray:
        flat = np.concatenate([matrix.real.ravel(), matrix.imag.ravel()])
        coords = self._vec_pinv @ flat
        rebuilt = self.matrix_of(coords)
        if np.max(np.abs(rebuilt - matrix)) > 1e-9 * max(1.0, np.max(np.abs(matrix))):
            raise DomainError("matrix does not lie in the algebra")
        return coords

    def matrix_of(self, coords: np.ndarray) -> np.ndarray:
        return sum(c * b for c, b in zip(coords, self.basis))

    def ad_of(self, x: np.ndarray) -> np.ndarray:
        return np.tensordot(x, self.ad, axes=([0], [0]))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.ad_of(x) @ y

    def b_form(self, x: np.ndarray, y: np.ndarray):
        return x @ self.killing @ y


def build_algebra(name: str) -> LieAlgebraModel:
    """Construct the matrix model of the named pair and validate its structure.

    Raises:
        ConfigurationError: unknown name.
        StructureError: the realization fails a structural sanity check.
    """
    matrices, a_matrices, theta_fn = _realization(name)
    n = len(matrices)
    d = matrices[0].shape[0]
    vecs = np.stack(
        [np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in matrices], axis=1
    )
    vec_pinv = np.linalg.pinv(vecs)

    def coords(m):
        c = vec_pinv @ np.concatenate([m.real.ravel(), m.imag.ravel()])
        res = np.max(np.abs(sum(ci * bi for ci, bi in zip(c, matrices)) - m))
        if res > 1e-10:
            raise StructureError(f"{name}: basis is not closed under the operation requested")
        return c

    theta = np.stack([coords(theta_fn(m)) for m in matrices], axis=1)
    ad = np.empty((n, n, n))
    for i in range(n):
        for j in range(n):
            ad[i, :, j] = coords(matrices[i] @ matrices[j] - matrices[j] @ matrices[i])
    killing = np.einsum("ikl,jlk->ij", ad, ad)
    a_coords = np.stack([coords(m) for m in a_matrices])

    model = LieAlgebraModel(
        name=name,
        dim=n,
        basis=tuple(matrices),
        theta=theta,
        killing=killing,
        ad=ad,
        a_coords=a_coords,
        _vec_pinv=vec_pinv,
    )
    _validate_model(model)
    return model


def _validate_model(model: LieAlgebraModel) -> None:
    n = model.dim
    if np.max(np.abs(model.theta @ model.theta - np.eye(n))) > 1e-12:
        raise StructureError(f"{model.name}: involution does not square to the identity")
    if np.max(np.abs(model.theta.T @ model.killing @ model.theta - model.killing)) > 1e-9:
        raise StructureError(f"{model.name}: involution is not an isometry of the Killing form")
    # definiteness on the eigenspaces of theta
    evals, evecs = np.linalg.eigh((model.theta + model.theta.T) / 2)
    k_mask = evals > 0
    bk = evecs[:, k_mask].T @ model.killing @ evecs[:, k_mask]
    bp = evecs[:, ~k_mask].T @ model.killing @ evecs[:, ~k_mask]
    if np.max(np.linalg.eigvalsh(bk)) >= 0:
        raise StructureError(f"{model.name}: Killing form not negative definite on k")
    if np.min(np.linalg.eigvalsh(bp)) <= 0:
        raise StructureError(f"{model.name}: Killing form not positive definite on p")
    for h in model.a_coords:
        if np.max(np.abs(model.theta @ h + h)) > 1e-12:
            raise StructureError(f"{model.name}: abelian subspace not contained in p")
        for h2 in model.a_coords:
            if np.max(np.abs(model.bracket(h, h2))) > 1e-12:
                raise StructureError(f"{model.name}: chosen subspace of p is not abelian")


# ---------------------------------------------------------------------------
# restricted roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    """A restricted root: its values on the a-basis, integer e-coefficients,
    and a B_theta-orthogonal basis of its root space (rows, model coordinates)."""

    avals: np.ndarray
    ecoeffs: np.ndarray
    mult: int
    space: np.ndarray


@dataclass(frozen=True)
class RootDatum:
    model: LieAlgebraModel
    a_basis: np.ndarray          # (r, n) B_theta-normalized generators of a
    rank: int
    roots: tuple                 # all of Sigma
    positive: tuple              # indices into roots, in the canonical order
    m_basis: np.ndarray          # (dim_m, n)
    block_bases: tuple           # per positive root: (p_block (mult,n), k_block (mult,n))
    system_type: str             # "C" or "BC"

    @property
    def positive_roots(self) -> tuple:
        return tuple(self.roots[i] for i in self.positive)


def _eigh_in_metric(op: np.ndarray, gram: np.ndarray):
    """Eigendecomposition of a gram-self-adjoint operator; eigenvectors come out
    gram-orthonormal."""
    chol = np.linalg.cholesky(gram)
    sym = chol.T @ op @ np.linalg.inv(chol.T)
    sym = (sym + sym.T) / 2
    evals, v = np.linalg.eigh(sym)
    return evals, np.linalg.solve(chol.T, v)


def restricted_root_decomposition(model: LieAlgebraModel) -> RootDatum:
    """Simultaneous ad(a)-eigenspace decomposition with the standard labeling.

    Positive roots are ordered so their integer e-coordinates are
    lexicographically decreasing; the long roots 2e_j come first.
    """
    n = model.dim
    r = model.rank
    btheta = model.b_theta
    btheta = (btheta + btheta.T) / 2
    a_basis = np.stack(
        [h / np.sqrt(h @ btheta @ h) for h in model.a_coords]
    )
    h0 = _GENERIC_WEIGHTS[:r] @ a_basis
    evals, vecs = _eigh_in_metric(model.ad_of(h0), btheta)

    order = np.argsort(evals)
    evals, vecs = evals[order], vecs[:, order]
    clusters: list[list[int]] = [[0]]
    for i in range(1, n):
        if evals[i] - evals[clusters[-1][0]] < _CLUSTER_TOL:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    zero_cluster = None
    raw_roots = []
    for idxs in clusters:
        val = float(np.mean(evals[idxs]))
        basis = vecs[:, idxs].T
        if abs(val) < _CLUSTER_TOL:
            zero_cluster = basis
            continue
        avals = np.empty(r)
        for j in range(r):
            adj = model.ad_of(a_basis[j])
            images = basis @ adj.T
            rho = np.einsum("ik,kl,il->i", images, btheta, basis)
            if np.max(np.abs(rho - rho[0])) > 1e-7:
                raise DecompositionError(
                    f"{model.name}: cluster at {val:.3g} is not a joint eigenspace"
                )
            avals[j] = float(np.mean(rho))
            if np.max(np.abs(images - avals[j] * basis)) > 1e-8:
                raise DecompositionError(
                    f"{model.name}: ad-action not scalar on a root space"
                )
        raw_roots.append((avals, basis))
    if zero_cluster is None:
        raise DecompositionError(f"{model.name}: centralizer of a is empty")

    # m = k-part of the zero eigenspace (a itself is the p-part)
    k_proj = (np.eye(n) + model.theta) / 2
    m_candidates = zero_cluster @ k_proj.T
    m_basis = _orthonormal_rows(m_candidates, btheta)
    if m_basis.shape[0] + r != zero_cluster.shape[0]:
        raise DecompositionError(f"{model.name}: zero eigenspace does not split as a + m")

    # long positive roots define the e_j labels
    ba = a_basis @ model.killing @ a_basis.T
    ba_inv = np.linalg.inv(ba)
    positive_raw = [rr for rr in raw_roots if rr[0] @ _GENERIC_WEIGHTS[:r] > 0]
    norms = [av @ ba_inv @ av for av, _ in positive_raw]
    longest = max(norms)
    long_idx = [i for i, nm in enumerate(norms) if nm > longest - 1e-8]
    if len(long_idx) != r:
        raise DecompositionError(
            f"{model.name}: found {len(long_idx)} long positive roots, expected {r}"
        )
    long_idx.sort(key=lambda i: -(positive_raw[i][0] @ _GENERIC_WEIGHTS[:r]))
    emat = np.stack([positive_raw[i][0] / 2 for i in long_idx])  # rows e_j on a-basis

    def e_coefficients(avals: np.ndarray) -> np.ndarray:
        m = np.linalg.solve(emat.T, avals)
        rounded = np.round(m)
        if np.max(np.abs(m - rounded)) > 1e-8:
            raise DecompositionError(f"{model.name}: root not integral in the e-labels")
        return rounded.astype(int)

    roots = []
    for avals, basis in raw_roots:
        ec = e_coefficients(avals)
        roots.append(Root(avals=avals, ecoeffs=ec, mult=basis.shape[0],
                          space=basis / np.sqrt(2.0)))
    # dimension bookkeeping of the full decomposition
    total = r + m_basis.shape[0] + sum(rt.mult for rt in roots)
    if total != n:
        raise DecompositionError(f"{model.name}: eigenspace dimensions sum to {total} != {n}")

    pos = [i for i, rt in enumerate(roots) if rt.avals @ _GENERIC_WEIGHTS[:r] > 0]
    pos.sort(key=lambda i: tuple(-roots[i].ecoeffs))
    system_type = _classify(roots, pos, r, model.name)

    block_bases = []
    for i in pos:
        rt = roots[i]
        x = rt.space
        theta_x = x @ model.theta.T
        p_block = x - theta_x
        k_block = x + theta_x
        block_bases.append((p_block, k_block))

    return RootDatum(
        model=model,
        a_basis=a_basis,
        rank=r,
        roots=tuple(roots),
        positive=tuple(pos),
        m_basis=m_basis,
        block_bases=tuple(block_bases),
        system_type=system_type,
    )


def _orthonormal_rows(rows: np.ndarray, gram: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    out: list[np.ndarray] = []
    for v in rows:
        w = v.copy()
        for u in out:
            w = w - (u @ gram @ w) * u
        nm = np.sqrt(max(w @ gram @ w, 0.0))
        if nm > tol:
            out.append(w / nm)
    return np.stack(out) if out else np.zeros((0, rows.shape[1]))


def _classify(roots, pos, r, name) -> str:
    patterns = set()
    for i in pos:
        ec = tuple(roots[i].ecoeffs)
        nz = [(j, c) for j, c in enumerate(ec) if c != 0]
        if len(nz) == 1 and nz[0][1] == 2:
            patterns.add("long")
        elif len(nz) == 1 and nz[0][1] == 1:
            patterns.add("short")
        elif (len(nz) == 2 and abs(nz[0][1]) == 1 and abs(nz[1][1]) == 1
              and nz[0][1] == 1):
            patterns.add("mixed")
        else:
            raise DecompositionError(f"{name}: positive root {ec} outside the C/BC patterns")
    if "long" not in patterns:
        raise DecompositionError(f"{name}: no long roots 2e_j found")
    return "BC" if "short" in patterns else "C"


# ---------------------------------------------------------------------------
# strongly orthogonal system and the adapted frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootBlock:
    """Index bookkeeping of one positive root inside the adapted basis."""

    ecoeffs: np.ndarray
    mult: int
    p_slice: slice
    k_slice: slice
    partner: int  # index of the block I0 maps this p-block onto; -1 means a

    def value(self, t: np.ndarray) -> float:
        """Root value on H = sum t_j A_j."""
        return float(self.ecoeffs @ t)


@dataclass(frozen=True)
class SOSystem:
    """Strongly orthogonal triples, Z_0, and the adapted coordinate frame.

    Adapted basis layout: ``A_1..A_r`` | p-blocks (positive-root order) |
    m-basis | k-blocks (same order, paired index-wise with the p-blocks so
    that [H, P_i] = alpha(H) K_i holds exactly by construction).
    """

    model: LieAlgebraModel
    roots: RootDatum
    lambdas: tuple               # e-coefficient vectors of the long roots
    triples: tuple               # per j: (E, thetaE, A) adapted coordinates
    KP: tuple                    # per j: (K, P) adapted coordinates
    Z0: np.ndarray               # (n,) adapted
    S: np.ndarray                # (n,) adapted, lies in m
    C_const: float
    I0: np.ndarray               # (dim_p, dim_p) = ad(Z0) restricted to p
    # adapted frame data
    basis_model: np.ndarray      # (n, n) columns: adapted basis in model coordinates
    ad: np.ndarray               # structure tensor, adapted
    B: np.ndarray                # Killing form, adapted
    Btheta: np.ndarray           # positive form, adapted
    dim_p: int
    dim_m: int
    blocks: tuple                # RootBlock per positive root

    @property
    def name(self) -> str:
        return self.model.name

    @property
    def n(self) -> int:
        return self.model.dim

    @property
    def rank(self) -> int:
        return self.roots.rank

    @property
    def dim_k_perp(self) -> int:
        return self.dim_p - self.rank

    # -- coordinate helpers ------------------------------------------------
    def embed_p(self, vp: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=vp.dtype)
        out[: self.dim_p] = vp
        return out

    def embed_a(self, t: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.asarray(t).dtype)
        out[: self.rank] = t
        return out

    def embed_k_perp(self, c: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.asarray(c).dtype)
        out[self.dim_p + self.dim_m:] = c
        return out

    def p_part(self, x: np.ndarray) -> np.ndarray:
        return x[: self.dim_p]

    def k_part(self, x: np.ndarray) -> np.ndarray:
        return x[self.dim_p:]

    def ad_of(self, x: np.ndarray) -> np.ndarray:
        return np.tensordot(x, self.ad, axes=([0], [0]))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.ad_of(x) @ y

    def exp_ad(self, x: np.ndarray) -> np.ndarray:
        """Ad(exp x) for x in g^C, via the matrix exponential of ad x."""
        return scipy.linalg.expm(self.ad_of(x))

    def b_form(self, x, y):
        return x @ self.B @ y

    def b_p(self, zp, wp):
        """Complex-bilinear Killing pairing of two p^C coordinate vectors."""
        return zp @ self.B[: self.dim_p, : self.dim_p] @ wp

    def btheta_norm(self, x) -> float:
        return float(np.sqrt(max(np.real(np.conj(x) @ self.Btheta @ x), 0.0)))

    def to_adapted(self, model_coords: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.basis_model, model_coords)

    def to_model(self, adapted_coords: np.ndarray) -> np.ndarray:
        return self.basis_model @ adapted_coords

    def dexp_series(self, x: np.ndarray, tol: float = 1e-16) -> np.ndarray:
        """sum_n (-1)^n / (n+1)! ad(x)^n, truncated at relative tolerance."""
        adx = self.ad_of(x)
        term = np.eye(self.n, dtype=adx.dtype)
        total = term.copy()
        for k in range(1, 60):
            term = term @ adx * (-1.0 / (k + 1))
            total = total + term
            if np.max(np.abs(term)) < tol * max(1.0, np.max(np.abs(total))):
                break
        return total


def build_so_system(model: LieAlgebraModel, roots: RootDatum) -> SOSystem:
    """Normalize the sl(2)-triples, solve for Z_0, and assemble the adapted frame."""
    r = roots.rank
    n = model.dim
    btheta = (model.b_theta + model.b_theta.T) / 2

    # long roots in label order: ecoeffs 2 e_j
    long_pos = []
    for j in range(r):
        target = np.zeros(r, dtype=int)
        target[j] = 2
        hits = [i for i in roots.positive if np.array_equal(roots.roots[i].ecoeffs, target)]
        if len(hits) != 1:
            raise StructureError(f"{model.name}: long root 2e_{j + 1} missing")
        long_pos.append(hits[0])

    triples_model = []
    for j, i in enumerate(long_pos):
        rt = roots.roots[i]
        if rt.mult != 1:
            raise StructureError(
                f"{model.name}: long root space has dimension {rt.mult}, expected 1"
            )
        e = rt.space[0]
        te = model.theta @ e
        a_raw = model.bracket(te, e)
        img = model.bracket(a_raw, e)
        mu = (img @ btheta @ e) / (e @ btheta @ e)
        if mu <= 0 or np.max(np.abs(img - mu * e)) > 1e-8:
            raise StructureError(f"{model.name}: triple normalization failed for j={j + 1}")
        e = e * np.sqrt(2.0 / mu)
        te = model.theta @ e
        a = model.bracket(te, e)
        triples_model.append((e, te, a))

    # adapted basis: A_j | p-blocks | m | k-blocks, with B-orthonormal block rows
    a_rows = [a for (_, _, a) in triples_model]
    p_rows, k_rows = [], []
    block_meta = []
    offset_p = r
    for bi, i in enumerate(roots.positive):
        rt = roots.roots[i]
        p_block, k_block = roots.block_bases[bi]
        p_on = _orthonormal_rows(p_block, model.killing)
        if p_on.shape[0] != rt.mult:
            raise StructureError(f"{model.name}: degenerate p-block for root {rt.ecoeffs}")
        # carry the same recombination over to the k-partners, so [H, P_i] = alpha(H) K_i
        coeff = np.linalg.lstsq(p_block.T, p_on.T, rcond=None)[0]
        k_on = coeff.T @ k_block
        p_rows.append(p_on)
        k_rows.append(k_on)
        block_meta.append((rt.ecoeffs, rt.mult))
        offset_p += rt.mult
    dim_p = offset_p
    dim_m = roots.m_basis.shape[0]

    cols = a_rows + [row for blk in p_rows for row in blk]
    cols += [row for row in roots.m_basis]
    cols += [row for blk in k_rows for row in blk]
    basis_model = np.stack(cols, axis=1)
    if basis_model.shape != (n, n):
        raise StructureError(f"{model.name}: adapted basis has wrong dimension")
    if np.linalg.cond(basis_model) > 1e8:
        raise StructureError(f"{model.name}: adapted basis is ill-conditioned")
    binv = np.linalg.inv(basis_model)

    # ad'(e_i) = Binv @ ad(M e_i) @ M
    ad_ap = np.empty((n, n, n))
    for i in range(n):
        ad_ap[i] = binv @ model.ad_of(basis_model[:, i]) @ basis_model
    b_ap = basis_model.T @ model.killing @ basis_model
    btheta_ap = basis_model.T @ btheta @ basis_model

    # block slices
    blocks = []
    pos_p, pos_k = r, dim_p + dim_m
    for ecoeffs, mult in block_meta:
        blocks.append((ecoeffs, mult, slice(pos_p, pos_p + mult), slice(pos_k, pos_k + mult)))
        pos_p += mult
        pos_k += mult

    so_partial = _PartialFrame(n=n, r=r, dim_p=dim_p, dim_m=dim_m, ad=ad_ap,
                               b=b_ap, btheta=btheta_ap)

    triples = [
        (so_partial.adapt(binv, e), so_partial.adapt(binv, te), so_partial.adapt(binv, a))
        for (e, te, a) in triples_model
    ]
    a_vecs = [a for (_, _, a) in triples]

    z0 = _solve_z0(so_partial, triples, model.name)
    # the sign of each E^j beyond the first is still free; make [Z0, P^j] = +A_j
    adz0 = so_partial.ad_of(z0)
    for j in range(1, r):
        e, te, a = triples[j]
        kappa = ((adz0 @ (e - te)) @ so_partial.btheta @ a) / (a @ so_partial.btheta @ a)
        if abs(abs(kappa) - 1.0) > 1e-8:
            raise StructureError(f"{model.name}: Z0 does not rotate triple {j + 1}")
        if kappa < 0:
            triples[j] = (-e, -te, a)
    triples = tuple(triples)
    kp = tuple((e + te, e - te) for (e, te, a) in triples)
    i0 = adz0[:dim_p, :dim_p]

    # I0 block pattern: partner of each p-block
    partner = _partner_map(so_partial, blocks, i0, model.name)

    s_vec = z0 - 0.5 * sum(k for (k, p) in kp)
    m_slice = slice(dim_p, dim_p + dim_m)
    off_m = s_vec.copy()
    off_m[m_slice] = 0.0
    if np.max(np.abs(off_m)) > 1e-10:
        raise StructureError(f"{model.name}: Z0 minus the half-sum of the K^j is not in m")

    c_vals = [a @ b_ap @ a for a in a_vecs]
    if np.max(np.abs(np.array(c_vals) - c_vals[0])) > 1e-10 * abs(c_vals[0]):
        raise StructureError(f"{model.name}: B(A_j, A_j) is not constant across j")

    so = SOSystem(
        model=model,
        roots=roots,
        lambdas=tuple(roots.roots[i].ecoeffs for i in long_pos),
        triples=triples,
        KP=kp,
        Z0=z0,
        S=s_vec,
        C_const=float(c_vals[0]),
        I0=i0,
        basis_model=basis_model,
        ad=ad_ap,
        B=b_ap,
        Btheta=btheta_ap,
        dim_p=dim_p,
        dim_m=dim_m,
        blocks=tuple(
            RootBlock(ecoeffs=ec, mult=mult, p_slice=ps, k_slice=ks, partner=partner[bi])
            for bi, (ec, mult, ps, ks) in enumerate(blocks)
        ),
    )
    _validate_so(so)
    return so


@dataclass
class _PartialFrame:
    n: int
    r: int
    dim_p: int
    dim_m: int
    ad: np.ndarray
    b: np.ndarray
    btheta: np.ndarray

    def ad_of(self, x):
        return np.tensordot(x, self.ad, axes=([0], [0]))

    def adapt(self, binv, model_coords):
        return binv @ model_coords


def _solve_z0(fr: _PartialFrame, triples, name: str) -> np.ndarray:
    """Z in the center of k with [Z, P^1] = A_1; unique for Hermitian pairs."""
    n, dim_p = fr.n, fr.dim_p
    dim_k = n - dim_p
    rows = []
    for i in range(dim_p, n):
        basis_vec = np.zeros(n)
        basis_vec[i] = 1.0
        adb = fr.ad_of(basis_vec)
        rows.append(adb[:, dim_p:])
    system = np.vstack(rows)
    _, sing, vt = np.linalg.svd(system)
    null_dim = int(np.sum(sing < 1e-9 * max(1.0, sing[0])))
    if null_dim != 1:
        raise NotHermitianError(
            f"{name}: center of k has dimension {null_dim}, expected 1"
        )
    z_k = vt[-1]
    z = np.zeros(n)
    z[dim_p:] = z_k
    e1, te1, a1 = triples[0]
    p1 = e1 - te1
    image = fr.ad_of(z) @ p1
    kappa = (image @ fr.btheta @ a1) / (a1 @ fr.btheta @ a1)
    if abs(kappa) < 1e-12 or np.max(np.abs(image - kappa * a1)) > 1e-8 * abs(kappa):
        raise NotHermitianError(f"{name}: central element does not rotate the first triple")
    return z / kappa


def _partner_map(fr: _PartialFrame, blocks, i0, name: str):
    partner = []
    for bi, (ec, mult, ps, ks) in enumerate(blocks):
        img = np.zeros(fr.dim_p)
        for col in range(ps.start, ps.stop):
            v = np.zeros(fr.dim_p)
            v[col] = 1.0
            img += np.abs(i0 @ v)
        targets = []
        if np.max(img[: fr.r]) > 1e-8:
            targets.append(-1)
        for bj, (_, _, ps2, _) in enumerate(blocks):
            if np.max(img[ps2]) > 1e-8:
                targets.append(bj)
        if len(targets) != 1:
            raise StructureError(
                f"{name}: I0 image of block {tuple(ec)} meets {len(targets)} blocks"
            )
        partner.append(targets[0])
    return partner


def _validate_so(so: SOSystem) -> None:
    name = so.name
    r = so.rank
    for j, (e, te, a) in enumerate(so.triples):
        if np.max(np.abs(so.bracket(a, e) - 2 * e)) > 1e-12:
            raise StructureError(f"{name}: [A_{j + 1}, E^{j + 1}] != 2 E^{j + 1}")
        for l, (e2, te2, a2) in enumerate(so.triples):
            if l == j:
                continue
            if np.max(np.abs(so.bracket(e, e2))) > 1e-12:
                raise StructureError(f"{name}: [E^{j + 1}, E^{l + 1}] != 0")
            if np.max(np.abs(so.bracket(e, te2))) > 1e-12:
                raise StructureError(f"{name}: [E^{j + 1}, theta E^{l + 1}] != 0")
            if np.max(np.abs(so.bracket(a2, e))) > 1e-12:
                raise StructureError(f"{name}: lambda_{j + 1}(A_{l + 1}) != 0")
    # central element behaviour
    adz = so.ad_of(so.Z0)
    if np.max(np.abs(adz[:, so.dim_p:])) > 1e-10:
        raise StructureError(f"{name}: Z0 does not centralize k")
    i0 = so.I0
    if np.max(np.abs(i0 @ i0 + np.eye(so.dim_p))) > 1e-10:
        raise StructureError(f"{name}: ad(Z0)^2 != -Id on p")
    for j, (k, p) in enumerate(so.KP):
        a = so.triples[j][2]
        if np.max(np.abs(i0 @ so.p_part(p) - so.p_part(a))) > 1e-10:
            raise StructureError(f"{name}: I0 P^{j + 1} != A_{j + 1}")
        if np.max(np.abs(i0 @ so.p_part(a) + so.p_part(p))) > 1e-10:
            raise StructureError(f"{name}: I0 A_{j + 1} != -P^{j + 1}")


# ---------------------------------------------------------------------------
# block decomposition of elements of p
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PDecomposition:
    """X = X_a + sum_alpha P^alpha with the k-partners K^alpha."""

    a_part: np.ndarray           # (r,) coefficients over A_j
    p_components: tuple          # per positive root: (n,) adapted vector
    k_partners: tuple            # per positive root: (n,) adapted vector


def decompose_p_vector(so: SOSystem, x: np.ndarray) -> PDecomposition:
    """Split an element of p into its a-part and per-root components.

    ``x`` may be a full adapted coordinate vector (length n) or a p-coordinate
    vector (length dim_p).  Raises DomainError when x has a k-component.
    """
    x = np.asarray(x, dtype=float)
    if x.shape == (so.n,):
        if so.btheta_norm(_k_only(so, x)) > 1e-10 * max(1.0, so.btheta_norm(x)):
            raise DomainError("vector is not in p")
        xp = so.p_part(x)
    elif x.shape == (so.dim_p,):
        xp = x
    else:
        raise DomainError(f"expected length {so.n} or {so.dim_p}, got {x.shape}")
    a_part = xp[: so.rank].copy()
    p_comps, k_parts = [], []
    for blk in so.blocks:
        coeffs = xp[blk.p_slice]
        pv = np.zeros(so.n)
        pv[blk.p_slice] = coeffs
        kv = np.zeros(so.n)
        kv[blk.k_slice] = coeffs
        p_comps.append(pv)
        k_parts.append(kv)
    return PDecomposition(a_part=a_part, p_components=tuple(p_comps), k_partners=tuple(k_parts))


def _k_only(so: SOSystem, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    out[so.dim_p:] = x[so.dim_p:]
    return out


# ---------------------------------------------------------------------------
# debug serialization
# ---------------------------------------------------------------------------

def _matrix_json(m: np.ndarray):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return [[[float(v.real), float(v.imag)] for v in row] for row in m]
    return [[float(v) for v in row] for row in m]


def debug_dump(so: SOSystem) -> str:
    """JSON dump of the model, root datum and triple system for inspection."""
    model, roots = so.model, so.roots
    doc = {
        "name": model.name,
        "dim": model.dim,
        "rank": roots.rank,
        "system_type": roots.system_type,
        "basis": [_matrix_json(b) for b in model.basis],
        "killing": _matrix_json(model.killing),
        "theta": _matrix_json(model.theta),
        "positive_roots": [
            {
                "ecoeffs": [int(c) for c in roots.roots[i].ecoeffs],
                "mult": roots.roots[i].mult,
            }
            for i in roots.positive
        ],
        "C_const": so.C_const,
        "Z0": _matrix_json(np.atleast_2d(so.to_model(so.Z0))),
        "A": [_matrix_json(np.atleast_2d(so.to_model(a))) for (_, _, a) in so.triples],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
