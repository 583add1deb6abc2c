"""CSV and YAML writers for flows, certificates and run reports.

Floats are written with 17 significant digits so files round-trip doubles
exactly; identical inputs give byte-identical files.
"""
from pathlib import Path
from typing import Optional, Union
import logging

import numpy as np
import pandas as pd
import yaml
from pydantic import BaseModel

from anholonomy.analytics.adiabatic import AdiabaticRun
from anholonomy.analytics.spectral_flow import SpectralFlow

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def output_path(output_dir: Union[str, Path], scenario: str, suffix: str) -> Path:
    """``<output_dir>/<scenario>_<suffix>``, creating the directory."""
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"{scenario}_{suffix}"


def flow_frame(flow: SpectralFlow) -> pd.DataFrame:
    """One row per grid point: lambda, unwrapped E_n, kick weight and return probability per level."""
    columns = {"lambda": flow.lambdas}
    for n in range(flow.dim):
        columns[f"E_{n}"] = flow.quasienergies[:, n]
    for n in range(flow.dim):
        columns[f"weight_{n}"] = flow.kick_weights[:, n]
    start = flow.start.eigenvectors
    returns = np.abs(np.einsum("in,jin->jn", start.conj(), flow.eigenvectors)) ** 2
    for n in range(flow.dim):
        columns[f"return_{n}"] = returns[:, n]
    return pd.DataFrame(columns)


def write_flow_csv(flow: SpectralFlow, path: Union[str, Path]) -> Path:
    path = Path(path)
    flow_frame(flow).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {flow.steps + 1} grid points to {path}")
    return path


def write_norms_csv(run: AdiabaticRun, path: Union[str, Path]) -> Path:
    path = Path(path)
    lambdas = np.concatenate([[run.schedule.lambda0], run.schedule.lambdas])
    frame = pd.DataFrame({
        "step": np.arange(len(run.norms)),
        "lambda": lambdas[: len(run.norms)],
        "norm": run.norms,
    })
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_report(report: BaseModel, path: Union[str, Path], header: Optional[str] = None) -> Path:
    """Dump a pydantic report as YAML, fields in declaration order."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if header:
            f.write(f"# {header}\n")
        yaml.safe_dump(report.model_dump(mode="json"), f, sort_keys=False, allow_unicode=True)
    logger.info(f"Wrote {type(report).__name__} to {path}")
    return path
