"""Scenario validation: conditions under which the anholonomy analysis is clean."""
from typing import Dict, List, Optional, Tuple
import logging

from anholonomy.analytics.spectral_flow import SpectralFlow, minimum_gap
from anholonomy.analytics.structure import degeneracy_report
from anholonomy.floquet.analysis import bandwidth_condition, trivial_eigenvector_report
from anholonomy.floquet.family import KickedModel, Rank1Perturbation
from anholonomy.models.schemas import TrivialEigenvectorReport

logger = logging.getLogger(__name__)

SMALL_GAP = 1e-3


class ScenarioValidator:
    """Collects issues for a kicked model before and after a sweep.

    Issues are dicts with ``type``, ``severity`` (error | warning | info),
    ``description`` and ``affected_levels``.
    """

    def __init__(self, tol: float = 1e-8, small_gap: float = SMALL_GAP):
        self.tol = tol
        self.small_gap = small_gap

    def validate_model(self, model: KickedModel) -> Tuple[Optional[TrivialEigenvectorReport], List[Dict]]:
        """Check U0 and v before any sweep.

        Returns:
            Tuple of (trivial-eigenvector report, issues list)
        """
        issues = []
        if not isinstance(model.perturbation, Rank1Perturbation):
            issues.append({
                "type": "general_kick",
                "severity": "info",
                "description": "Kick is not rank one; bound and permutation shift are not guaranteed",
                "affected_levels": 0,
            })
            return None, issues

        u0 = model.u0
        trivial = trivial_eigenvector_report(u0, model.perturbation, tol=self.tol)

        degenerate = [c for c in degeneracy_report(u0) if c.size > 1]
        if degenerate:
            issues.append({
                "type": "degeneracy",
                "severity": "warning",
                "description": f"U0 has {len(degenerate)} degenerate eigenphase clusters; reduction required",
                "affected_levels": sum(c.size for c in degenerate),
            })

        if trivial.second_kind:
            issues.append({
                "type": "v_is_eigenvector",
                "severity": "error",
                "description": "v is an eigenvector of U0; the kick does not mix levels",
                "affected_levels": 1,
            })
        elif trivial.count:
            issues.append({
                "type": "trivial_eigenvector",
                "severity": "warning",
                "description": f"Found {trivial.count} eigenvectors of U0 orthogonal to v; "
                               f"the anholonomy of the other levels is fragile",
                "affected_levels": trivial.count,
            })

        bandwidth = bandwidth_condition(model)
        if not bandwidth.satisfied:
            issues.append({
                "type": "bandwidth",
                "severity": "info",
                "description": f"T = {model.period_t:g} exceeds 2pi/W = {bandwidth.limit:.6g}; "
                               f"level labels wrap around the quasienergy cell",
                "affected_levels": model.dim,
            })

        for issue in issues:
            logger.log(_LEVELS[issue["severity"]], issue["description"])
        return trivial, issues

    def validate_flow(self, flow: SpectralFlow) -> List[Dict]:
        """Gap check along a completed sweep."""
        issues = []
        gap, lam = minimum_gap(flow)
        if gap < self.small_gap:
            issues.append({
                "type": "small_gap",
                "severity": "warning",
                "description": f"Minimum quasienergy gap {gap:.3e} at lam = {lam:.6g}",
                "affected_levels": 2,
            })
            logger.warning(issues[-1]["description"])
        return issues


_LEVELS = {"error": logging.ERROR, "warning": logging.WARNING, "info": logging.INFO}
