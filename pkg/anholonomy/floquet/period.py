"""Parameter period of a kicked family for a general Hermitian kick."""
from fractions import Fraction
from math import lcm
from typing import Optional, Union
import logging

import numpy as np

from anholonomy.config import PERIOD_MAX_DENOMINATOR
from anholonomy.numerics import HermitianOperator

logger = logging.getLogger(__name__)


def family_period(v: Union[HermitianOperator, np.ndarray], tol: float = 1e-9,
                  max_denominator: int = PERIOD_MAX_DENOMINATOR) -> Optional[float]:
    """Smallest Lambda > 0 with Lambda * v_n / (2 pi) integral for every eigenvalue v_n.

    The eigenvalue ratios against the largest-magnitude eigenvalue are
    reconstructed as fractions with bounded denominators; the integrality
    of ``L * ratio`` is then checked directly, which rejects good rational
    approximations of irrational ratios. Returns ``None`` when no common
    period exists within the search bound.
    """
    if not isinstance(v, HermitianOperator):
        v = HermitianOperator.from_matrix(v)
    eigenvalues = v.eigenvalues
    scale = float(np.max(np.abs(eigenvalues)))
    if scale == 0.0:
        logger.info("Zero kick: every Lambda is a period, none is minimal")
        return None
    nonzero = eigenvalues[np.abs(eigenvalues) > tol * scale]
    reference = nonzero[np.argmax(np.abs(nonzero))]
    ratios = nonzero / reference

    common = 1
    for ratio in ratios:
        frac = Fraction(float(ratio)).limit_denominator(max_denominator)
        common = lcm(common, frac.denominator)
        if common > max_denominator:
            logger.info(f"Denominators exceed {max_denominator}; treating spectrum as incommensurate")
            return None

    multiples = common * ratios
    if np.max(np.abs(multiples - np.round(multiples))) > tol:
        logger.info("Eigenvalue ratios are not commensurate within tolerance")
        return None
    return float(2.0 * np.pi * common / abs(reference))
