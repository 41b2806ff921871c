"""Shared generators for randomized structure tests.

Everything takes an explicit numpy Generator so seeds stay local to tests.
"""

import numpy as np
import pytest

from entsym.channels import ChannelMap, channel_from_blockmap
from entsym.frobenius import FrobeniusAlgebra, multimatrix_algebra

BLOCK_SHAPES = [[1], [2], [1, 1], [2, 1], [1, 1, 1], [3], [2, 2], [1, 2], [1, 1, 2]]


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_multimatrix(rng) -> FrobeniusAlgebra:
    return multimatrix_algebra(BLOCK_SHAPES[rng.integers(len(BLOCK_SHAPES))])


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hermitian_preserving_map(src, tgt, rng, terms=3) -> ChannelMap:
    """sum_k c_k A_k X A_k^+ with real (possibly negative) weights."""
    n, m = sum(src.blocks), sum(tgt.blocks)
    mats = [random_complex(rng, (m, n)) for _ in range(terms)]
    coeffs = rng.normal(size=terms)
    return channel_from_blockmap(
        src, tgt, lambda x: sum(c * a @ x @ a.conj().T for c, a in zip(coeffs, mats))
    )


def random_stinespring_map(src, tgt, rng, terms=3) -> ChannelMap:
    """sum_k A_k X A_k^+, completely positive by construction."""
    n, m = sum(src.blocks), sum(tgt.blocks)
    mats = [random_complex(rng, (m, n)) for _ in range(terms)]
    return channel_from_blockmap(
        src, tgt, lambda x: sum(a @ x @ a.conj().T for a in mats)
    )


def random_kraus_channel(alg, rng, terms=3) -> ChannelMap:
    """Trace-preserving Kraus channel on a single-block algebra; since the
    counit is a multiple of the trace on each block this preserves it."""
    (d,) = alg.blocks
    raw = random_complex(rng, (terms * d, d))
    q, _ = np.linalg.qr(raw)
    kraus = [q[k * d : (k + 1) * d, :] for k in range(terms)]
    return channel_from_blockmap(alg, alg, lambda x: sum(a @ x @ a.conj().T for a in kraus))
