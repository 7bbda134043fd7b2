"""Constructive growth of a single-hidden-layer threshold network.

Hidden units are appended one at a time. Unit 1 learns the true labels;
each later unit learns the internal targets

    tau_{h+1} = tau_h * sigma_h

which are +1 where the previous unit was right on its own targets and -1
where it erred. Unrolling the recursion gives the parity identity

    tau = (prod_{k<=h} sigma_k) * tau_{h+1}

so once some unit reaches zero errors on its targets, the true label is a
function of the hidden states realized on the training set, and an output
perceptron is trained over the internal representations (1, sigma_1..H).
If that output unit cannot reach zero errors, growth resumes with one more
hidden unit. Every appended unit must strictly reduce the internal error
count of its predecessor; a unit that fails to do so stalls the growth,
which surfaces as an error carrying the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .data import LabeledPattern
from .perceptron import (
    TrainingConfig, TrainingTrace, WeightVector, minimerror_train,
)


class GrowthStallError(RuntimeError):
    """A new hidden unit failed to strictly reduce the internal error count."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class NetworkModel:
    """Ordered hidden-unit weights over the input, plus output-unit weights.

    The output unit has H+1 components: index 0 multiplies the constant
    hidden bias state sigma_0 = 1.
    """

    hidden: tuple
    output: WeightVector

    def __post_init__(self):
        if len(self.hidden) < 1:
            raise ValueError("a network needs at least one hidden unit")
        if len(self.output) != len(self.hidden) + 1:
            raise ValueError(
                f"output unit has {len(self.output)} weights, "
                f"expected {len(self.hidden) + 1}"
            )


@dataclass
class UnitRecord:
    h: int
    internal_errors: int


@dataclass
class OutputAttempt:
    n_hidden: int
    network_errors: int


@dataclass
class GrowthTrace:
    units: list = dc_field(default_factory=list)
    output_attempts: list = dc_field(default_factory=list)
    unit_traces: list = dc_field(default_factory=list)
    output_trace: TrainingTrace = None

    def internal_error_sequence(self):
        return [u.internal_errors for u in self.units]

    def to_csv(self, stream):
        stream.write("unit,internal_errors\n")
        for u in self.units:
            stream.write(f"{u.h},{u.internal_errors}\n")
        stream.write("output_attempt_after_units,network_errors\n")
        for a in self.output_attempts:
            stream.write(f"{a.n_hidden},{a.network_errors}\n")


def _sign(x):
    # sign(0) = +1: zero fields are measure-zero but must be deterministic
    return np.where(np.asarray(x) >= 0.0, 1, -1)


def hidden_states(model: NetworkModel, xi):
    """States sigma_h = sign(w_h . xi) of every hidden unit, as a +-1 array."""
    xi = np.asarray(xi, dtype=float)
    first = model.hidden[0]
    if xi.shape != first.w.shape:
        raise ValueError(f"pattern has {xi.shape[0]} components, "
                         f"hidden units expect {len(first)}")
    return np.array([int(_sign(u.w @ xi)) for u in model.hidden])


def network_output(model: NetworkModel, xi) -> int:
    """zeta = sign(W . (1, sigma_1..H)) in {-1, +1}."""
    sigma = hidden_states(model, xi)
    rep = np.concatenate([[1.0], sigma.astype(float)])
    return int(_sign(model.output.w @ rep))


def internal_targets(prev_targets, prev_states):
    """Componentwise product tau_h * sigma_h: the parity recursion."""
    t = np.asarray(prev_targets)
    s = np.asarray(prev_states)
    if t.shape != s.shape:
        raise ValueError(f"targets ({t.shape}) and states ({s.shape}) differ in length")
    return t * s


def _unit_states(w: WeightVector, Xi):
    return _sign(Xi @ w.w)


def grow_network(patterns, config: TrainingConfig, max_hidden=None):
    """Append annealed-trained hidden units until the output unit is exact.

    Postcondition on success: zero network errors on ``patterns`` and
    H <= P - 1. Raises GrowthStallError when a new unit cannot strictly
    reduce its predecessor's internal error count or the cap is hit first.
    """
    if not patterns:
        raise ValueError("cannot grow a network on an empty pattern set")
    Xi = np.array([p.xi for p in patterns], dtype=float)
    tau = np.array([p.tau for p in patterns])
    P = len(patterns)
    cap = P - 1 if max_hidden is None else min(max_hidden, P - 1)

    trace = GrowthTrace()
    units = []
    states = []            # realized sigma_h per unit, over the training set
    targets = tau.copy()
    prev_errors = None

    while True:
        unit_patterns = [
            LabeledPattern(mu=p.mu, xi=p.xi, tau=int(t))
            for p, t in zip(patterns, targets)
        ]
        w, utrace = minimerror_train(unit_patterns, config)
        sigma = _unit_states(w, Xi)
        errs = int(np.sum(sigma != targets))
        if prev_errors is not None and errs >= prev_errors:
            trace.units.append(UnitRecord(len(units) + 1, errs))
            raise GrowthStallError(
                f"unit {len(units) + 1} has {errs} internal errors, "
                f"not fewer than its predecessor's {prev_errors}", trace)
        units.append(w)
        states.append(sigma)
        trace.units.append(UnitRecord(len(units), errs))
        trace.unit_traces.append(utrace)

        if errs == 0:
            reps = np.column_stack(states).astype(float)
            rep_patterns = [
                LabeledPattern(mu=p.mu,
                               xi=np.concatenate([[1.0], reps[j]]),
                               tau=int(tau[j]))
                for j, p in enumerate(patterns)
            ]
            out_w, out_trace = minimerror_train(rep_patterns, config)
            model = NetworkModel(hidden=tuple(units), output=out_w)
            net_errs = sum(
                1 for j, p in enumerate(patterns)
                if network_output(model, p.xi) != tau[j]
            )
            trace.output_attempts.append(OutputAttempt(len(units), net_errs))
            trace.output_trace = out_trace
            if net_errs == 0:
                return model, trace
            # output imperfect: grow further (the recursion over an
            # errorless unit yields all-+1 targets, so the strict-decrease
            # check above will stall out rather than loop forever)

        if len(units) >= cap:
            raise GrowthStallError(
                f"hidden-unit cap {cap} reached with nonzero errors", trace)
        prev_errors = errs
        targets = internal_targets(targets, states[-1])


def save_network(model: NetworkModel, stream):
    """Header ``H=<n>``, then one weight block per hidden unit, then the
    output block (H+1 lines)."""
    stream.write(f"H={len(model.hidden)}\n")
    for u in model.hidden:
        for v in u.w:
            stream.write(f"{float(v)!r}\n")
    for v in model.output.w:
        stream.write(f"{float(v)!r}\n")


def load_network(source) -> NetworkModel:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("H="):
        raise ValueError("network file must start with an H=<n> header")
    H = int(lines[0][2:])
    values = [float(v) for v in lines[1:]]
    if H < 1:
        raise ValueError("network must declare at least one hidden unit")
    body = len(values) - (H + 1)
    if body <= 0 or body % H != 0:
        raise ValueError(f"network file has {len(values)} values, "
                         f"inconsistent with H={H}")
    dim = body // H
    hidden = tuple(
        WeightVector(np.array(values[k * dim:(k + 1) * dim]))
        for k in range(H)
    )
    output = WeightVector(np.array(values[H * dim:]))
    return NetworkModel(hidden=hidden, output=output)
