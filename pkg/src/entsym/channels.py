"""Completely positive maps and channels between Frobenius algebras.

Two independent verification routes are provided and calibrated against each
other in the test suite:

* the categorical positivity operator built from the algebras' structure
  tensors (:func:`cp_condition_operator`), whose PSD-ness is decided by the
  in-house Jacobi eigensolver, and
* the standard Choi matrix of the map transported to concrete block matrices
  (:func:`choi_matrix`), available whenever both algebras carry a multimatrix
  presentation, decided by LAPACK.

A channel is a CP map that preserves the counit (the canonical functional).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frobenius import FrobeniusAlgebra, check_star_cohomomorphism, HomReport
from .tensors import DEFAULT_TOL, Tolerance, as_matrix, is_psd, residual

__all__ = [
    "ChannelMap",
    "CpWitness",
    "ChannelReport",
    "identity_channel",
    "compose",
    "tensor_channel",
    "cp_condition_operator",
    "choi_matrix",
    "is_channel",
    "check_cohom_is_channel",
    "element_to_blockmatrix",
    "blockmatrix_to_element",
    "channel_from_blockmap",
]


@dataclass(frozen=True, eq=False)
class ChannelMap:
    """A linear map between algebra carriers, stored as a dense matrix.

    Verification status is never cached here; call :func:`is_channel` (or the
    finer-grained checks) to recompute it.
    """

    source: FrobeniusAlgebra
    target: FrobeniusAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"({self.target.dim}, {self.source.dim})"
            )

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ as_matrix(x)


@dataclass(frozen=True, eq=False)
class CpWitness:
    """The positivity operator of a map with its minimal eigenvalue."""

    operator: np.ndarray
    min_eigenvalue: float
    hermitian_residual: float


@dataclass(frozen=True, eq=False)
class ChannelReport:
    """Outcome of the channel check: CP witness plus counit residual."""

    cp_ok: bool
    cp_min_eigenvalue: float
    cp_hermitian_residual: float
    counit_residual: float
    epsilon: float

    @property
    def passes(self) -> bool:
        return self.cp_ok and self.counit_residual <= self.epsilon


def identity_channel(alg: FrobeniusAlgebra) -> ChannelMap:
    return ChannelMap(alg, alg, np.eye(alg.dim, dtype=complex))


def compose(g: ChannelMap, f: ChannelMap) -> ChannelMap:
    """The composite ``g . f`` (apply f first)."""
    if f.target is not g.source and f.target.dim != g.source.dim:
        raise ValueError("channels are not composable")
    return ChannelMap(f.source, g.target, g.matrix @ f.matrix)


def tensor_channel(f: ChannelMap, g: ChannelMap) -> ChannelMap:
    """``f (x) g`` between the tensor-product algebras."""
    from .frobenius import tensor_product

    src = tensor_product(f.source, g.source)
    tgt = tensor_product(f.target, g.target)
    return ChannelMap(src, tgt, np.kron(f.matrix, g.matrix))


def cp_condition_operator(f: ChannelMap) -> CpWitness:
    """The endomorphism of ``source (x) target`` whose positivity is the
    categorical CP condition.

    Wiring (fixed by calibration against the Choi oracle): comultiply on the
    source, apply ``f`` to the right output leg, multiply the result into the
    target from the left:
    ``(id_A (x) m_B) . (id_A (x) f (x) id_B) . (comult_A (x) id_B)``.
    """
    a, b = f.source, f.target
    op = np.einsum(
        "xza,yz,byc->xbac", a.comult3, f.matrix, b.mult3, optimize=True
    ).reshape(a.dim * b.dim, a.dim * b.dim)
    ok, min_eig = is_psd(op)
    herm = residual(op - op.conj().T) / 2.0
    return CpWitness(operator=op, min_eigenvalue=min_eig, hermitian_residual=herm)


def element_to_blockmatrix(alg: FrobeniusAlgebra, x) -> np.ndarray:
    """Carrier coordinates -> concrete block-diagonal matrix in M_n, n = sum n_i."""
    if alg.blocks is None:
        raise ValueError("algebra has no multimatrix presentation")
    from .frobenius import AlgebraElement

    coords = x.coords if isinstance(x, AlgebraElement) else as_matrix(x)
    n = sum(alg.blocks)
    out = np.zeros((n, n), dtype=complex)
    coff = 0
    moff = 0
    for b in alg.blocks:
        blk = coords[coff : coff + b * b, 0].reshape(b, b) / np.sqrt(b)
        out[moff : moff + b, moff : moff + b] = blk
        coff += b * b
        moff += b
    return out


def blockmatrix_to_element(alg: FrobeniusAlgebra, mat: np.ndarray) -> np.ndarray:
    """Concrete block-diagonal matrix -> carrier coordinates (pinching off-block entries)."""
    if alg.blocks is None:
        raise ValueError("algebra has no multimatrix presentation")
    mat = np.asarray(mat, dtype=complex)
    n = sum(alg.blocks)
    if mat.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {mat.shape}")
    coords = np.zeros((alg.dim, 1), dtype=complex)
    coff = 0
    moff = 0
    for b in alg.blocks:
        blk = mat[moff : moff + b, moff : moff + b]
        coords[coff : coff + b * b, 0] = np.sqrt(b) * blk.reshape(-1)
        coff += b * b
        moff += b
    return coords


def channel_from_blockmap(src: FrobeniusAlgebra, tgt: FrobeniusAlgebra, phi) -> ChannelMap:
    """Lift a concrete linear map on block matrices to a ChannelMap."""
    cols = []
    for k in range(src.dim):
        e = np.zeros((src.dim, 1), dtype=complex)
        e[k, 0] = 1.0
        x = element_to_blockmatrix(src, e)
        cols.append(blockmatrix_to_element(tgt, phi(x)))
    return ChannelMap(src, tgt, np.hstack(cols))


def choi_matrix(f: ChannelMap) -> np.ndarray:
    """Choi matrix of the transported map, block by block.

    The map is read as ``phi: M_n -> M_m`` through the multimatrix
    presentations (entries outside the blocks are pinched away, which neither
    creates nor destroys complete positivity), and the standard
    ``sum_ij E_ij (x) phi(E_ij)`` is assembled.  PSD iff ``f`` is CP.
    """
    if f.source.blocks is None or f.target.blocks is None:
        raise ValueError("Choi oracle needs multimatrix presentations on both sides")
    n = sum(f.source.blocks)
    m = sum(f.target.blocks)
    choi = np.zeros((n * m, n * m), dtype=complex)
    moff = 0
    for b in f.source.blocks:
        for i in range(moff, moff + b):
            for j in range(moff, moff + b):
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = 1.0
                out = element_to_blockmatrix(f.target, f.matrix @ blockmatrix_to_element(f.source, e))
                choi += np.kron(e, out)
        moff += b
    return choi


def is_channel(f: ChannelMap, tol: Tolerance = DEFAULT_TOL) -> ChannelReport:
    """CP condition (scale-invariant eigenvalue threshold) plus counit preservation."""
    wit = cp_condition_operator(f)
    eigs_scale = max(1.0, float(np.abs(wit.operator).max()))
    cp_ok = (
        wit.hermitian_residual <= tol.epsilon * eigs_scale
        and wit.min_eigenvalue >= -tol.epsilon * eigs_scale
    )
    counit_res = residual(f.target.counit @ f.matrix - f.source.counit, tol)
    return ChannelReport(
        cp_ok=cp_ok,
        cp_min_eigenvalue=wit.min_eigenvalue,
        cp_hermitian_residual=wit.hermitian_residual,
        counit_residual=counit_res,
        epsilon=tol.epsilon,
    )


@dataclass(frozen=True, eq=False)
class CohomChannelReport:
    """Joint report for the fact that *-cohomomorphisms between special
    algebras are channels."""

    cohom: HomReport
    channel: ChannelReport | None
    lemma_applies: bool

    @property
    def lemma_holds(self) -> bool | None:
        if not self.lemma_applies or self.channel is None:
            return None
        return self.channel.passes


def check_cohom_is_channel(
    f: ChannelMap, tol: Tolerance = DEFAULT_TOL
) -> CohomChannelReport:
    """If ``f`` verifies as a *-cohomomorphism, it must also verify as a channel.

    When the cohomomorphism residuals exceed the tolerance the lemma makes no
    claim and the channel check is still reported for information.
    """
    cohom = check_star_cohomomorphism(f.matrix, f.source, f.target, tol)
    chan = is_channel(f, tol)
    return CohomChannelReport(cohom=cohom, channel=chan, lemma_applies=cohom.passes)
