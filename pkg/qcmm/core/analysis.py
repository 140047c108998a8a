"""
Single-state analysis report: Fano form, spectra, PHC verdict and, for D-7
states, the CMM picture.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from qcmm.config import Config
from qcmm.core.cmm_geometry import (
    CmmCoords,
    QuadDistances,
    RegionLabel,
    coords_from_d7,
    invariance_residual,
    quad_distances,
    region_of,
)
from qcmm.core.ppt_spectra import (
    PhcVerdict,
    Spectrum4,
    classify_phc,
    eigenvalues_hermitian4,
    partial_transpose,
)
from qcmm.core.state_core import D7Params, FanoParams, MatrixLike, as_density, decompose_to_fano, project_d7
from qcmm.errors import NotD7Class

logger = logging.getLogger("QCMMAnalysis")


@dataclass(frozen=True)
class AnalysisReport:
    fano: FanoParams
    d7: Optional[D7Params]
    not_d7_reason: Optional[str]
    spectrum: Spectrum4
    pt_spectrum: Spectrum4
    verdict: PhcVerdict
    coords: Optional[CmmCoords]
    quad: Optional[QuadDistances]
    region: Optional[RegionLabel]
    invariance_residual: Optional[float]

    def to_dict(self) -> dict:
        cmm = "n/a"
        if self.d7 is not None:
            cmm = {
                "coords": self.coords.to_dict(),
                "quad_distances": self.quad.to_dict(),
                "region": self.region.label.value,
                "region_driver": self.region.driver,
                "invariance_residual": self.invariance_residual,
            }
        return {
            "fano": self.fano.to_dict(),
            "d7": self.d7.to_dict() if self.d7 is not None else "n/a",
            "not_d7_reason": self.not_d7_reason,
            "spectrum": self.spectrum.to_list(),
            "pt_spectrum": self.pt_spectrum.to_list(),
            "phc": self.verdict.to_dict(),
            "cmm": cmm,
        }

    def to_text(self) -> str:
        lines = [
            f"PHC verdict:        {self.verdict.label.value}",
            f"min PT eigenvalue:  {self.verdict.min_pt_eigenvalue!r}",
            f"spectrum:           {list(self.spectrum.values)!r}",
            f"PT spectrum:        {list(self.pt_spectrum.values)!r}",
            f"p1:                 {self.fano.p1.tolist()!r}",
            f"p2:                 {self.fano.p2.tolist()!r}",
            f"m:                  {self.fano.m.tolist()!r}",
        ]
        if self.d7 is None:
            lines.append(f"CMM:                n/a ({self.not_d7_reason})")
        else:
            lines.append(f"d7:                 {self.d7.to_dict()!r}")
            lines.append(f"coords:             {self.coords.to_dict()!r}")
            lines.append(f"quad distances:     {self.quad.to_dict()!r}")
            lines.append(f"region:             {self.region.label.value} (via {self.region.driver})")
            lines.append(f"invariance residual: {self.invariance_residual!r}")
        return "\n".join(lines)


def build_report(rho: MatrixLike, tol: float = Config.DEFAULT_TOL) -> AnalysisReport:
    """Analyse a valid state; a failed D-7 projection leaves the CMM section empty."""
    rho = as_density(rho)
    verdict = classify_phc(rho, tol)
    fano = decompose_to_fano(rho, tol)
    spectrum = eigenvalues_hermitian4(rho, tol)
    pt_spectrum = eigenvalues_hermitian4(partial_transpose(rho, 2, tol), tol)

    d7 = coords = quad = region = residual = None
    reason = None
    try:
        d7 = project_d7(fano, tol)
    except NotD7Class as e:
        reason = str(e)
        logger.info(f"CMM section skipped: {reason}")
    else:
        coords = coords_from_d7(d7)
        quad = quad_distances(coords)
        region = region_of(quad, tol)
        residual = invariance_residual(quad)

    return AnalysisReport(
        fano=fano,
        d7=d7,
        not_d7_reason=reason,
        spectrum=spectrum,
        pt_spectrum=pt_spectrum,
        verdict=verdict,
        coords=coords,
        quad=quad,
        region=region,
        invariance_residual=residual,
    )
