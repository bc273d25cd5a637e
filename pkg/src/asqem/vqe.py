"""Statevector VQE: exact expectation values, quasi-Newton minimization with
central-difference gradients, and an optional derivative-free fallback."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .pauli import PauliOperator
from .statevector import expectation
from .uccsd import UCCSDAnsatz

__all__ = ["VqeConfig", "VqeResult", "vqe_minimize"]


@dataclass(frozen=True)
class VqeConfig:
    optimizer: str = "l-bfgs-b"       # or "nelder-mead" (derivative-free)
    energy_tol: float = 1e-9
    max_evaluations: int = 10000
    fd_step: float = 1e-5
    trace_path: str | Path | None = None
    initial_point: np.ndarray | None = None


@dataclass
class VqeResult:
    energy: float
    theta: np.ndarray
    n_iterations: int
    n_evaluations: int
    converged: bool
    state: np.ndarray
    trace: list = field(default_factory=list)


def vqe_minimize(
    op: PauliOperator, ansatz: UCCSDAnsatz, config: VqeConfig = VqeConfig()
) -> VqeResult:
    if op.n_qubits != ansatz.n_qubits:
        raise ValueError("operator and ansatz qubit widths differ")
    evals = [0]

    def energy(theta: np.ndarray) -> float:
        evals[0] += 1
        return expectation(op, ansatz.prepare_state(theta)).real

    h = config.fd_step

    def gradient(theta: np.ndarray) -> np.ndarray:
        grad = np.empty_like(theta)
        for k in range(theta.size):
            step = np.zeros_like(theta)
            step[k] = h
            grad[k] = (energy(theta + step) - energy(theta - step)) / (2.0 * h)
        return grad

    trace: list[tuple[int, float, float]] = []

    def callback(theta):
        e = energy(theta)
        g = float(np.linalg.norm(gradient(theta))) if record_grad else float("nan")
        trace.append((len(trace), e, g))

    x0 = (
        np.zeros(ansatz.n_parameters)
        if config.initial_point is None
        else np.asarray(config.initial_point, dtype=float)
    )
    record_grad = config.trace_path is not None

    method = config.optimizer.lower()
    if method == "l-bfgs-b":
        res = minimize(
            energy,
            x0,
            jac=gradient,
            method="L-BFGS-B",
            callback=callback if record_grad else None,
            options={
                "maxfun": config.max_evaluations,
                "ftol": config.energy_tol * 1e-2,
                "gtol": 1e-7,
            },
        )
    elif method == "nelder-mead":
        res = minimize(
            energy,
            x0,
            method="Nelder-Mead",
            callback=callback if record_grad else None,
            options={
                "maxfev": config.max_evaluations,
                "fatol": config.energy_tol,
                "xatol": 1e-8,
            },
        )
    else:
        raise ValueError(f"unknown optimizer {config.optimizer!r}")

    theta = np.asarray(res.x, dtype=float)
    state = ansatz.prepare_state(theta)
    result = VqeResult(
        energy=float(res.fun),
        theta=theta,
        n_iterations=int(getattr(res, "nit", 0)),
        n_evaluations=evals[0],
        converged=bool(res.success),
        state=state,
        trace=trace,
    )
    if config.trace_path is not None:
        _write_trace(Path(config.trace_path), trace)
    return result


def _write_trace(path: Path, trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "energy", "gradient_norm"])
        writer.writerows(trace)
