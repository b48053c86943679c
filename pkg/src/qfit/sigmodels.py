"""Forward diffusion signal models (ADC, IVIM) and their parameter Jacobians.

Units follow the convention that keeps b*D dimensionless and the network
outputs of comparable magnitude: b-values in ms/um^2, diffusivities in
um^2/ms, S0 in arbitrary units.  A b-value quoted as 800 s/mm^2 is 0.8 in
these units.

Parameter column order is fixed: ADC ``(S0, D)``, IVIM ``(S0, f, Dp, Dt)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "ModelKind",
    "Protocol",
    "PARAM_RANGES",
    "default_protocol",
    "adc_signal",
    "ivim_signal",
    "model_signals",
    "signal_jacobian",
    "signal_jacobians",
]


class ModelKind(str, Enum):
    ADC = "adc"
    IVIM = "ivim"

    @property
    def param_names(self):
        return _PARAM_NAMES[self]

    @property
    def n_params(self):
        return len(_PARAM_NAMES[self])


_PARAM_NAMES = {
    ModelKind.ADC: ("S0", "D"),
    ModelKind.IVIM: ("S0", "f", "Dp", "Dt"),
}

# Physiologically plausible simulation ranges (S0 in a.u., f unitless,
# diffusivities in um^2/ms).
PARAM_RANGES = {
    ModelKind.ADC: {"S0": (0.8, 1.2), "D": (0.4, 2.0)},
    ModelKind.IVIM: {"S0": (0.8, 1.2), "f": (0.1, 0.5), "Dp": (10.0, 150.0), "Dt": (0.4, 2.0)},
}


@dataclass(eq=False)
class Protocol:
    """Ordered acquisition b-values (ms/um^2) plus the model they feed."""

    b_values: np.ndarray
    model_kind: ModelKind

    def __post_init__(self):
        self.b_values = np.asarray(self.b_values, dtype=np.float64)
        self.model_kind = ModelKind(self.model_kind)
        if self.b_values.ndim != 1:
            raise ValueError("b_values must be one-dimensional")
        if np.any(self.b_values < 0):
            raise ValueError("b-values must be non-negative")
        if not np.any(self.b_values == 0):
            raise ValueError("protocol must include at least one b=0 acquisition")
        if self.b_values.size < self.model_kind.n_params:
            raise ValueError(
                f"protocol needs at least {self.model_kind.n_params} b-values "
                f"for {self.model_kind.value}, got {self.b_values.size}"
            )

    @property
    def n_measurements(self):
        return self.b_values.size


def default_protocol(model_kind):
    """The acquisition protocols used throughout: ten b-values per model.

    ADC: linearly spaced on [0, 1] ms/um^2. IVIM: the practical set
    {0, 10, 20, 30, 50, 80, 100, 200, 400, 800} s/mm^2 converted to ms/um^2.
    """
    model_kind = ModelKind(model_kind)
    if model_kind is ModelKind.ADC:
        b = np.linspace(0.0, 1.0, 10)
    else:
        b = np.array([0.0, 10.0, 20.0, 30.0, 50.0, 80.0, 100.0, 200.0, 400.0, 800.0]) / 1000.0
    return Protocol(b, model_kind)


def adc_signal(params, b):
    """Mono-exponential decay S0 * exp(-b * D).

    Parameters
    ----------
    params : array_like
        ``(S0, D)``.
    b : float or array_like
        b-value(s), ms/um^2.
    """
    s0, d = params
    return s0 * np.exp(-np.asarray(b, dtype=np.float64) * d)


def ivim_signal(params, b):
    """Bi-exponential decay S0 * (f e^{-b (Dp + Dt)} + (1 - f) e^{-b Dt}).

    Parameters
    ----------
    params : array_like
        ``(S0, f, Dp, Dt)``.
    b : float or array_like
        b-value(s), ms/um^2.
    """
    s0, f, dp, dt = params
    b = np.asarray(b, dtype=np.float64)
    return s0 * (f * np.exp(-b * (dp + dt)) + (1.0 - f) * np.exp(-b * dt))


def model_signals(params, protocol):
    """Noise-free signals for one voxel or a batch of voxels.

    Parameters
    ----------
    params : ndarray
        Shape ``(P,)`` or ``(N, P)`` in the model's column order.
    protocol : Protocol

    Returns
    -------
    ndarray
        Shape ``(Nz,)`` or ``(N, Nz)``.
    """
    theta = np.atleast_2d(np.asarray(params, dtype=np.float64))
    _check_width(theta, protocol)
    b = protocol.b_values
    if protocol.model_kind is ModelKind.ADC:
        s0, d = theta[:, 0:1], theta[:, 1:2]
        out = s0 * np.exp(-b * d)
    else:
        s0, f, dp, dt = theta[:, 0:1], theta[:, 1:2], theta[:, 2:3], theta[:, 3:4]
        out = s0 * (f * np.exp(-b * (dp + dt)) + (1.0 - f) * np.exp(-b * dt))
    if np.ndim(params) == 1:
        return out[0]
    return out


def signal_jacobian(params, protocol):
    """Analytic partials of the voxel signals with respect to the parameters.

    Returns
    -------
    ndarray
        Shape ``(Nz, P)`` with entry (i, p) = d A_i / d theta_p.
    """
    return signal_jacobians(np.asarray(params, dtype=np.float64)[None, :], protocol)[0]


def signal_jacobians(params, protocol):
    """Batched Jacobians, shape ``(N, Nz, P)``."""
    theta = np.asarray(params, dtype=np.float64)
    _check_width(theta, protocol)
    b = protocol.b_values
    if protocol.model_kind is ModelKind.ADC:
        s0, d = theta[:, 0:1], theta[:, 1:2]
        e = np.exp(-b * d)
        return np.stack([e, -b * s0 * e], axis=2)
    s0, f, dp, dt = theta[:, 0:1], theta[:, 1:2], theta[:, 2:3], theta[:, 3:4]
    e1 = np.exp(-b * (dp + dt))
    e2 = np.exp(-b * dt)
    mix = f * e1 + (1.0 - f) * e2
    return np.stack([mix, s0 * (e1 - e2), -b * s0 * f * e1, -b * s0 * mix], axis=2)


def _check_width(theta, protocol):
    if theta.shape[-1] != protocol.model_kind.n_params:
        raise ValueError(
            f"expected {protocol.model_kind.n_params} parameters for "
            f"{protocol.model_kind.value}, got {theta.shape[-1]}"
        )
