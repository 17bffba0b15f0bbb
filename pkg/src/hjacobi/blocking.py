"""Block partitions, structured Cholesky, and the blocked sequential solvers.

The full block solver diagonalizes every block-pivot Gram submatrix per
block-step; the block-oriented solver makes exactly one annihilation pass
over each off-diagonal block.  ``off_diagonal_pass`` is the single-pass
building block reused by the three-level parallel variants.
"""

from dataclasses import dataclass

import numpy as np

from .core import column_norms_squared, gram, hermitize
from .errors import DefinitenessError
from .rotations import DEFAULT_TOL, DiagInfo, Tolerances, jacobi_cycle, jacobi_diagonalize


@dataclass(frozen=True)
class BlockPartition:
    """Block-column sizes and their offsets (prefix sums)."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s < 1 for s in self.sizes):
            raise ValueError("all block sizes must be >= 1")

    @property
    def b(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return tuple(out)

    def columns(self, i):
        """Column slice of block i (0-based)."""
        off = self.offsets
        return slice(off[i], off[i + 1])


def num_blocks(n: int, n_t: int) -> int:
    """Number of blocks for target block size n_t: ceil(n / n_t)."""
    if n < 1 or n_t < 1:
        raise ValueError("n and n_t must be >= 1")
    return -(-n // n_t)


def greedy_partition(n: int, n_t: int) -> BlockPartition:
    """All blocks of size n_t except a possibly smaller last one."""
    b = num_blocks(n, n_t)
    last = (n - 1) % n_t + 1
    return BlockPartition(tuple([n_t] * (b - 1) + [last]))


def uniform_partition(n: int, b: int) -> BlockPartition:
    """b blocks whose sizes differ by at most one, larger blocks first."""
    if not 1 <= b <= n:
        raise ValueError(f"need 1 <= b <= n, got b={b}, n={n}")
    n_min, b_r = divmod(n, b)
    return BlockPartition(tuple([n_min + 1] * b_r + [n_min] * (b - b_r)))


@dataclass
class ColumnTracker:
    """Permutation mapping current block positions to original block indices.

    The sequential drivers never relocate blocks, so this stays the identity;
    it exists so a strategy step that does move blocks has a place to record
    it, and ``restore`` composes back to the original order.
    """

    perm: np.ndarray

    @classmethod
    def identity(cls, b):
        return cls(np.arange(b))

    def swap(self, i, j):
        self.perm[[i, j]] = self.perm[[j, i]]

    def restore(self):
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size)
        return inv


class Workspace:
    """Scratch array for block-column updates (n rows x 2*max block width)."""

    def __init__(self, n_rows, max_block, dtype=np.float64):
        self.buf = np.zeros((n_rows, 2 * max_block), dtype=dtype, order="F")

    @classmethod
    def for_partition(cls, n_rows, part: BlockPartition, dtype=np.float64):
        return cls(n_rows, max(part.sizes), dtype)


def chol_upper(A):
    """Upper-triangular R with A = R^* R; DefinitenessError on failure."""
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError("matrix is not positive definite") from exc
    return np.asfortranarray(L.conj().T)


def structured_cholesky(lam_ii, A_ij, lam_jj):
    """Cholesky factor of [[diag(lam_ii), A_ij], [A_ij^*, diag(lam_jj)]].

    R_ii = sqrt(lam_ii) on the diagonal, R_ij = R_ii^{-1} A_ij, and R_jj from
    a dense Cholesky of the Schur complement.  Raises DefinitenessError when
    the Schur complement is not positive definite; the caller then falls back
    to a dense factorization of the assembled pivot.
    """
    lam_ii = np.asarray(lam_ii, dtype=np.float64)
    lam_jj = np.asarray(lam_jj, dtype=np.float64)
    if np.any(lam_ii <= 0) or np.any(lam_jj <= 0):
        raise DefinitenessError("diagonal blocks must be strictly positive")
    n_i, n_j = lam_ii.size, lam_jj.size
    if A_ij.shape != (n_i, n_j):
        raise ValueError("off-diagonal block shape does not match")
    r_ii = np.sqrt(lam_ii)
    R_ij = A_ij / r_ii[:, None]
    S = hermitize(np.diag(lam_jj).astype(A_ij.dtype) - R_ij.conj().T @ R_ij)
    R_jj = chol_upper(S)
    R = np.zeros((n_i + n_j, n_i + n_j), dtype=A_ij.dtype, order="F")
    R[np.arange(n_i), np.arange(n_i)] = r_ii
    R[:n_i, n_i:] = R_ij
    R[n_i:, n_i:] = R_jj
    return R


def update_block_columns(Gp, W, ws: Workspace | None = None, tracker=None):
    """Gp <- Gp @ W through a workspace (the product must not alias Gp)."""
    k = Gp.shape[1]
    if W.shape != (k, k):
        raise ValueError("accumulator W must be square of the pivot width")
    if ws is not None:
        if ws.buf.shape[0] != Gp.shape[0] or ws.buf.shape[1] < k:
            raise ValueError("workspace too small for this pivot pair")
        view = ws.buf[:, :k]
        np.matmul(Gp, W, out=view)
        Gp[:, :] = view
    else:
        Gp[:, :] = Gp @ W


def _pivot_factor(Gi, Gj):
    """Dense route: Gram of [Gi, Gj], hermitized, then Cholesky."""
    Gp = np.concatenate([Gi, Gj], axis=1)
    return chol_upper(gram(Gp))


def _local_pivot(G, signs, part, i, j):
    ci, cj = part.columns(i), part.columns(j)
    Gp = np.concatenate([G[:, ci], G[:, cj]], axis=1)
    Jp = np.concatenate([signs[ci], signs[cj]])
    return Gp, Jp, ci, cj


def _scatter(G, ci, cj, Gp, n_i):
    G[:, ci] = Gp[:, :n_i]
    G[:, cj] = Gp[:, n_i:]


def _accumulate(V, ci, cj, Wp, n_i, ws):
    """Fold the local pivot transformation into a global accumulator V."""
    cols = np.concatenate([np.arange(ci.start, ci.stop), np.arange(cj.start, cj.stop)])
    block = np.asfortranarray(V[:, cols])
    update_block_columns(block, Wp, ws)
    V[:, cols[:n_i]] = block[:, :n_i]
    V[:, cols[n_i:]] = block[:, n_i:]


def _diag_block_pass(G, signs, part, tol, V, ws, vws, one_sweep):
    """Diagonalize (or single-sweep) every diagonal Gram block in place."""
    sub_tol = tol.with_max_sweeps(1) if one_sweep else tol
    agg = DiagInfo()
    for i in range(part.b):
        ci = part.columns(i)
        Gi = np.asfortranarray(G[:, ci])
        R = chol_upper(gram(Gi))
        info = jacobi_diagonalize(R, signs[ci], sub_tol, accumulate=True)
        if info.rotations:
            update_block_columns(Gi, info.W, ws)
            G[:, ci] = Gi
            if V is not None:
                block = np.asfortranarray(V[:, ci])
                update_block_columns(block, info.W, vws)
                V[:, ci] = block
        agg.rotations += info.rotations
        agg.big_rotations += info.big_rotations
        agg.max_abs_t = max(agg.max_abs_t, info.max_abs_t)
    return agg


def full_block(G, signs, part: BlockPartition, tol: Tolerances = DEFAULT_TOL,
               accumulate_V=False):
    """Sequential full block solver: per sweep, a diagonal pre-processing
    pass, then full diagonalization of every block-pivot in block
    column-cyclic order, until a sweep applies no rotations."""
    n = G.shape[1]
    if part.n != n:
        raise ValueError("partition does not cover all columns")
    V = np.eye(n, dtype=G.dtype, order="F") if accumulate_V else None
    ws = Workspace.for_partition(G.shape[0], part, G.dtype)
    vws = Workspace.for_partition(n, part, G.dtype) if accumulate_V else None
    info = DiagInfo(W=V)
    while info.sweeps < tol.max_sweeps:
        info.sweeps += 1
        sweep_rot = 0
        d = _diag_block_pass(G, signs, part, tol, V, ws, vws, one_sweep=False)
        sweep_rot += d.rotations
        info.rotations += d.rotations
        info.big_rotations += d.big_rotations
        info.max_abs_t = max(info.max_abs_t, d.max_abs_t)
        lam = [column_norms_squared(G[:, part.columns(i)]) for i in range(part.b)]
        for j in range(1, part.b):
            for i in range(j):
                Gp, Jp, ci, cj = _local_pivot(G, signs, part, i, j)
                n_i = ci.stop - ci.start
                A_ij = gram(np.asfortranarray(G[:, ci]), np.asfortranarray(G[:, cj]))
                try:
                    R = structured_cholesky(lam[i], A_ij, lam[j])
                except DefinitenessError:
                    R = _pivot_factor(G[:, ci], G[:, cj])
                sub = jacobi_diagonalize(R, Jp, tol, accumulate=True)
                if sub.rotations:
                    update_block_columns(Gp, sub.W, ws)
                    _scatter(G, ci, cj, Gp, n_i)
                    lam[i] = column_norms_squared(G[:, ci])
                    lam[j] = column_norms_squared(G[:, cj])
                    if V is not None:
                        _accumulate(V, ci, cj, sub.W, n_i, vws)
                sweep_rot += sub.rotations
                info.rotations += sub.rotations
                info.big_rotations += sub.big_rotations
                info.max_abs_t = max(info.max_abs_t, sub.max_abs_t)
        if sweep_rot == 0:
            info.converged = True
            break
    return info


def block_oriented(G, signs, part: BlockPartition, tol: Tolerances = DEFAULT_TOL,
                   accumulate_V=False):
    """Sequential block-oriented solver: per sweep, one cycle through each
    diagonal block, then one annihilation pass over each off-diagonal block."""
    n = G.shape[1]
    if part.n != n:
        raise ValueError("partition does not cover all columns")
    V = np.eye(n, dtype=G.dtype, order="F") if accumulate_V else None
    ws = Workspace.for_partition(G.shape[0], part, G.dtype)
    vws = Workspace.for_partition(n, part, G.dtype) if accumulate_V else None
    info = DiagInfo(W=V)
    while info.sweeps < tol.max_sweeps:
        info.sweeps += 1
        sweep_rot = 0
        d = _diag_block_pass(G, signs, part, tol, V, ws, vws, one_sweep=True)
        sweep_rot += d.rotations
        info.rotations += d.rotations
        info.big_rotations += d.big_rotations
        info.max_abs_t = max(info.max_abs_t, d.max_abs_t)
        for j in range(1, part.b):
            for i in range(j):
                Gp, Jp, ci, cj = _local_pivot(G, signs, part, i, j)
                n_i = ci.stop - ci.start
                n_j = cj.stop - cj.start
                R = chol_upper(gram(Gp))
                Wp = np.eye(R.shape[1], dtype=R.dtype, order="F")
                D = column_norms_squared(R)
                stats = jacobi_cycle(R, Jp, D, Wp, n_i, n_j, False, tol)
                if stats.rotations_applied:
                    update_block_columns(Gp, Wp, ws)
                    _scatter(G, ci, cj, Gp, n_i)
                    if V is not None:
                        _accumulate(V, ci, cj, Wp, n_i, vws)
                sweep_rot += stats.rotations_applied
                info.rotations += stats.rotations_applied
                info.big_rotations += stats.big_rotations
                info.max_abs_t = max(info.max_abs_t, stats.max_abs_t)
        if sweep_rot == 0:
            info.converged = True
            break
    return info


def off_diagonal_pass(G, signs, n_r: int, inner_t: int,
                      tol: Tolerances = DEFAULT_TOL, accumulate_V=False):
    """Single blocked annihilation pass over the cross block of G = [G_r, G_s].

    G_r (first n_r columns) and G_s are partitioned separately with target
    inner block size ``inner_t``, so the inner partition respects the
    boundary between the two outer blocks; every (left, right) inner pair is
    visited exactly once (no convergence loop).
    """
    n = G.shape[1]
    n_s = n - n_r
    if not (0 < n_r < n):
        raise ValueError("need 0 < n_r < total column count")
    pr = uniform_partition(n_r, num_blocks(n_r, inner_t))
    ps = uniform_partition(n_s, num_blocks(n_s, inner_t))
    sizes = pr.sizes + ps.sizes
    part = BlockPartition(sizes)
    V = np.eye(n, dtype=G.dtype, order="F") if accumulate_V else None
    ws = Workspace.for_partition(G.shape[0], part, G.dtype)
    vws = Workspace.for_partition(n, part, G.dtype) if accumulate_V else None
    info = DiagInfo(sweeps=1, W=V)
    for j in range(pr.b, part.b):
        for i in range(pr.b):
            Gp, Jp, ci, cj = _local_pivot(G, signs, part, i, j)
            n_i = ci.stop - ci.start
            n_j = cj.stop - cj.start
            R = chol_upper(gram(Gp))
            Wp = np.eye(R.shape[1], dtype=R.dtype, order="F")
            D = column_norms_squared(R)
            stats = jacobi_cycle(R, Jp, D, Wp, n_i, n_j, False, tol)
            if stats.rotations_applied:
                update_block_columns(Gp, Wp, ws)
                _scatter(G, ci, cj, Gp, n_i)
                if V is not None:
                    _accumulate(V, ci, cj, Wp, n_i, vws)
            info.rotations += stats.rotations_applied
            info.big_rotations += stats.big_rotations
            info.max_abs_t = max(info.max_abs_t, stats.max_abs_t)
    info.converged = True
    return info
