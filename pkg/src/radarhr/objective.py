"""Sample entropy, the regularity score the parameter search minimizes.

SampEn(m, r) = -ln(A/B) where B counts pairs of length-m templates within
Chebyshev distance r*std(x) (self-matches excluded) and A counts pairs
whose length-(m+1) extensions also match. Lower values mean a more
self-similar, more regular series.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import DegenerateInputError, InvalidArgumentError

if _accel.NUMBA_ENABLED:
    from ._kernels_numba import sampen_pair_counts
else:
    from ._kernels_numpy import sampen_pair_counts


@dataclass(frozen=True)
class SampEnConfig:
    """Template length m and tolerance r in units of the signal std."""

    embedding_m: int = 2
    tolerance_r: float = 0.2

    def __post_init__(self):
        if self.embedding_m < 1:
            raise InvalidArgumentError("embedding_m must be >= 1")
        if self.tolerance_r <= 0:
            raise InvalidArgumentError("tolerance_r must be positive")


def sample_entropy(signal, cfg: SampEnConfig = SampEnConfig()) -> float:
    """Sample entropy of a real series; nonnegative, scale invariant.

    When no (m+1)-template pair matches (A = 0) the undefined -ln(0) is
    replaced by the finite ceiling -ln(1/(B*(N-m))); when not even the
    length-m templates match (B = 0) by -ln(1/((N-m)*(N-m-1))). The
    optimizer needs finite, comparable fitness values either way.
    """
    x = np.ascontiguousarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    m = cfg.embedding_m
    if x.size < m + 2:
        raise InvalidArgumentError(f"need at least {m + 2} samples for m = {m}")
    if not np.isfinite(x).all():
        raise InvalidArgumentError("signal contains non-finite samples")
    std = float(x.std())
    if std == 0.0:
        raise DegenerateInputError("constant series has no std-relative tolerance")

    r = cfg.tolerance_r * std
    a, b = sampen_pair_counts(x, m, r)
    n_templates = x.size - m
    if b == 0:
        return math.log(n_templates) + math.log(n_templates - 1)
    if a == 0:
        return math.log(b) + math.log(n_templates)
    return -math.log(a / b)
