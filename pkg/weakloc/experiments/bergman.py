"""Bergman-space Toeplitz and Hankel operators on the unit disc."""

import logging
from typing import Any, Optional

import numpy as np
import pandas as pd
from scipy import special

from weakloc.core.errors import ConfigError
from weakloc.experiments.config import ExperimentConfig
from weakloc.experiments.report import ExperimentReport
from weakloc.experiments.runner import run_experiment
from weakloc.experiments.stages import RunState, describe_frame
from weakloc.frames.duals import parseval_dual
from weakloc.frames.sampled import bergman_disc_frame
from weakloc.geometry.grids import sample_grid
from weakloc.geometry.spaces import SpaceTag
from weakloc.operators.disc import hankel_berezin, hankel_identity_residual, toeplitz_matrix
from weakloc.operators.localized import FrameContext
from weakloc.operators.symbols import Symbol

logger = logging.getLogger(__name__)


def closed_form_diagonal(symbol: Symbol, N: int) -> Optional[np.ndarray]:
    """<T_u e_n, e_n> for n = 0..N where a closed form is known, else None."""
    n = np.arange(N + 1, dtype=float)
    name = symbol.descriptor.partition(":")[0]
    if name == "constant":
        return np.full(N + 1, symbol.param)
    if name == "radial":
        return (n + 1.0) / (n + 2.0)
    if name == "disc":
        return symbol.param ** (2.0 * n + 2.0)
    if name == "conj":
        return np.zeros(N + 1)
    if name == "gaussian":
        # (n + 1)! s^(2n + 2) P(n + 1, 1 / s^2), P the regularized lower incomplete gamma
        s2 = symbol.param ** 2
        return np.exp(
            special.gammaln(n + 2.0) + (n + 1.0) * np.log(s2) + np.log(special.gammainc(n + 1.0, 1.0 / s2))
        )
    return None


def setup_bergman(state: RunState) -> RunState:
    config = state.config
    state.domain = sample_grid(SpaceTag.BERGMAN_DISC, config.grid.resolution, config.grid.truncation)
    state.frame = bergman_disc_frame(
        state.domain, config.frame.degree_cap, config.frame.degree_tolerance
    )
    state.context = FrameContext(state.frame, parseval_dual(state.frame))
    describe_frame(state, "parseval")
    state.frame_info["degree_cap"] = state.frame.family.degree_cap
    return state


def toeplitz_stage(state: RunState) -> RunState:
    """T_u in the monomial basis: diagonal against its closed form, off-diagonal mass."""
    config, symbol = state.config, state.symbol
    N = config.bergman.basis_cap
    T = toeplitz_matrix(symbol, N)
    entries = np.real(np.diag(T))
    exact = closed_form_diagonal(symbol, N)
    table = pd.DataFrame({
        "n": np.arange(N + 1),
        "entry": entries,
        "exact": exact if exact is not None else np.full(N + 1, np.nan),
    })
    state.extracts["toeplitz_diagonal.csv"] = table

    diag_mass = float(np.abs(np.diag(T)).sum())
    off_mass = float(np.abs(T - np.diag(np.diag(T))).sum())
    off_ratio = off_mass / diag_mass if diag_mass else 0.0
    block = {
        "basis_cap": N,
        "diagonal": entries[: min(N + 1, 6)].tolist(),
        "off_diagonal_ratio": off_ratio,
        "radial": symbol.radial_profile is not None,
    }
    if exact is None:
        block.update(verdict="no_closed_form", max_error=None)
    else:
        error = float(np.abs(entries - exact).max())
        block.update(
            verdict="match" if error <= config.bergman.diagonal_tolerance else "mismatch",
            max_error=error,
            tolerance=config.bergman.diagonal_tolerance,
        )
    if symbol.radial_profile is not None and off_ratio > config.bergman.diagonal_tolerance:
        state.note(f"radial symbol {symbol.descriptor} has off-diagonal mass ratio {off_ratio:.3e}")
    state.extras["toeplitz"] = block
    state.verdicts["toeplitz_diagonal"] = {
        key: block[key] for key in ("verdict", "max_error") if key in block
    }
    logger.info("Toeplitz diagonal for %s: %s", symbol.descriptor, block["verdict"])
    return state


def hankel_stage(state: RunState) -> RunState:
    """Toeplitz-Hankel identity residual and ||H_u k_z||^2 along the radius."""
    config, symbol = state.config, state.symbol
    N = config.bergman.basis_cap
    residual = hankel_identity_residual(symbol, N)
    state.extracts["hankel_residual.csv"] = residual.to_frame()
    tolerance = config.bergman.hankel_tolerance
    state.verdicts["hankel_identity"] = {
        "verdict": "pass" if residual.max_residual <= tolerance else "fail",
        "max_residual": residual.max_residual,
        "tolerance": tolerance,
        "degrees_checked": int(len(residual.degrees)),
    }

    radii = np.linspace(0.0, 0.95, config.bergman.hankel_radii)
    profile = hankel_berezin(symbol, N, radii, tolerance=config.frame.degree_tolerance)
    realizable = profile[profile["realizable"]]
    state.extras["hankel_berezin"] = {
        "profile": profile.to_dict(orient="records"),
        "origin": float(profile["hankel_berezin"].iloc[0]),
        "last_realizable_radius": float(realizable["radius"].iloc[-1]),
        "last_realizable_value": float(realizable["hankel_berezin"].iloc[-1]),
    }
    return state


def run_bergman(
    config: ExperimentConfig,
    audit_logger: Optional[Any] = None,
    write: bool = True
) -> ExperimentReport:
    """
    Monomial Toeplitz/Hankel checks plus the frame-sum pipeline on the disc.

    Raises:
        ExperimentError: wrapping FrameError when an explicit degree cap
            cannot resolve the outermost ring
    """
    if config.experiment != "bergman":
        raise ConfigError(f"run_bergman needs a bergman config, got {config.experiment}")
    extras = [
        ("toeplitz", toeplitz_stage, "Monomial Toeplitz matrix and diagonal formula"),
        ("hankel", hankel_stage, "Toeplitz-Hankel identity and Hankel Berezin profile"),
    ]
    return run_experiment(config, setup_bergman, extras, audit_logger=audit_logger, write=write)
