"""Roofline latency and energy model for single-request (batch 1) LLM inference.

Prefill is bounded by the slower of its FLOPs and one pass over the weights.
Each decode step streams the weights plus the KV cache accumulated so far, and
is bounded the same way. Energy is node power times phase duration.

Measured traces can be ingested to derive task statistics and multiplicative
calibration factors for the analytical estimates.
"""

from __future__ import annotations

import csv
import dataclasses
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

DEFAULT_J_PER_BIT = 0.5e-6
BYTES_PER_TOKEN = 4
TRACE_COLUMNS = ("prompt_len", "gen_len", "energy_j", "ttft_s", "tbt_s")


class WorkloadError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    name: str
    param_count: float
    layers: int
    hidden_dim: int
    kv_heads: int
    head_dim: int
    bytes_per_param: float
    source: str = ""

    def __post_init__(self):
        for f in ("param_count", "layers", "hidden_dim", "kv_heads", "head_dim", "bytes_per_param"):
            if not getattr(self, f) > 0:
                raise WorkloadError(f"model {self.name!r}: {f} must be positive")
        if self.kv_heads * self.head_dim > self.hidden_dim:
            raise WorkloadError(f"model {self.name!r}: kv_heads * head_dim exceeds hidden_dim")

    @property
    def weight_bytes(self) -> float:
        return self.param_count * self.bytes_per_param

    def kv_bytes_per_token(self) -> float:
        # K and V for every layer
        return 2 * self.layers * self.kv_heads * self.head_dim * self.bytes_per_param


@dataclass(frozen=True)
class AcceleratorSpec:
    name: str
    peak_flops: float  # FLOP/s
    hbm_bandwidth: float  # bytes/s
    compute_util: float
    mem_util: float
    node_power: float  # kW
    source: str = ""

    def __post_init__(self):
        for f in ("peak_flops", "hbm_bandwidth", "node_power"):
            if not getattr(self, f) > 0:
                raise WorkloadError(f"accelerator {self.name!r}: {f} must be positive")
        for f in ("compute_util", "mem_util"):
            if not 0 < getattr(self, f) <= 1:
                raise WorkloadError(f"accelerator {self.name!r}: {f} must be in (0, 1]")


@dataclass(frozen=True)
class TokenStats:
    mean: float
    min: float
    max: float

    def __post_init__(self):
        if not 0 <= self.min <= self.mean <= self.max:
            raise WorkloadError(f"token stats need 0 <= min <= mean <= max, got {self}")


@dataclass(frozen=True)
class TaskProfile:
    name: str
    prompt_len: Optional[TokenStats]
    gen_len: Optional[TokenStats]
    request_bytes: Optional[float] = None
    response_bytes: Optional[float] = None
    source: str = ""

    def __post_init__(self):
        if self.prompt_len is not None and self.request_bytes is None:
            object.__setattr__(self, "request_bytes", self.prompt_len.mean * BYTES_PER_TOKEN)
        if self.gen_len is not None and self.response_bytes is None:
            object.__setattr__(self, "response_bytes", self.gen_len.mean * BYTES_PER_TOKEN)
        for f in ("request_bytes", "response_bytes"):
            v = getattr(self, f)
            if v is not None and v < 0:
                raise WorkloadError(f"task {self.name!r}: {f} must be >= 0")

    @property
    def has_statistics(self) -> bool:
        return self.prompt_len is not None and self.gen_len is not None


@dataclass(frozen=True)
class InferenceEstimate:
    prompt_len: int
    gen_len: int
    ttft: float  # s
    tbt: float  # s
    e2e: float  # s
    prefill_energy: float  # J
    decode_energy: float  # J
    tx_energy: float = 0.0  # J

    @property
    def inference_energy(self) -> float:
        return self.prefill_energy + self.decode_energy


@dataclass(frozen=True)
class Calibration:
    energy_scale: float = 1.0
    ttft_scale: float = 1.0
    tbt_scale: float = 1.0

    def apply(self, est: InferenceEstimate) -> InferenceEstimate:
        ttft = est.ttft * self.ttft_scale
        tbt = est.tbt * self.tbt_scale
        return dataclasses.replace(
            est,
            ttft=ttft,
            tbt=tbt,
            e2e=ttft + (est.gen_len - 1) * tbt,
            prefill_energy=est.prefill_energy * self.energy_scale,
            decode_energy=est.decode_energy * self.energy_scale,
        )


@dataclass(frozen=True)
class TaskEstimate:
    task: str
    mean: InferenceEstimate
    min: InferenceEstimate
    max: InferenceEstimate
    n_requests: int
    total_energy: float  # J, mean case x n_requests


def prefill_time(model: ModelSpec, accel: AcceleratorSpec, prompt_len: int) -> float:
    flops = 2 * model.param_count * prompt_len + 2 * model.layers * prompt_len**2 * model.hidden_dim
    compute = flops / (accel.peak_flops * accel.compute_util)
    memory = model.weight_bytes / (accel.hbm_bandwidth * accel.mem_util)
    return max(compute, memory)


def decode_step_times(model: ModelSpec, accel: AcceleratorSpec, prompt_len: int, gen_len: int) -> np.ndarray:
    """Step time for t = 1..gen_len, with t tokens appended to the KV cache."""
    t = np.arange(1, gen_len + 1, dtype=float)
    compute = 2 * model.param_count / (accel.peak_flops * accel.compute_util)
    nbytes = model.weight_bytes + model.kv_bytes_per_token() * (prompt_len + t)
    memory = nbytes / (accel.hbm_bandwidth * accel.mem_util)
    return np.maximum(compute, memory)


def estimate_request(
    model: ModelSpec,
    accel: AcceleratorSpec,
    prompt_len: int,
    gen_len: int,
    prefill_power_fraction: float = 1.0,
    decode_power_fraction: float = 1.0,
) -> InferenceEstimate:
    if prompt_len < 1 or gen_len < 1:
        raise WorkloadError("prompt_len and gen_len must be >= 1")
    prompt_len, gen_len = int(prompt_len), int(gen_len)
    ttft = prefill_time(model, accel, prompt_len)
    tbt = float(decode_step_times(model, accel, prompt_len, gen_len).mean())
    e2e = ttft + (gen_len - 1) * tbt
    watts = accel.node_power * 1000.0
    return InferenceEstimate(
        prompt_len=prompt_len,
        gen_len=gen_len,
        ttft=ttft,
        tbt=tbt,
        e2e=e2e,
        prefill_energy=watts * prefill_power_fraction * ttft,
        decode_energy=watts * decode_power_fraction * (e2e - ttft),
    )


def transmission_energy(request_bytes: float, response_bytes: float, per_bit: float = DEFAULT_J_PER_BIT) -> float:
    if request_bytes < 0 or response_bytes < 0 or per_bit < 0:
        raise WorkloadError("transmission inputs must be >= 0")
    return (request_bytes + response_bytes) * 8 * per_bit


def estimate_task(
    model: ModelSpec,
    accel: AcceleratorSpec,
    task: TaskProfile,
    n_requests: int = 1,
    calibration: Optional[Calibration] = None,
    per_bit: float = DEFAULT_J_PER_BIT,
) -> TaskEstimate:
    """Evaluate a task at its mean, min and max token counts.

    Token counts are rounded to the nearest integer and clamped to >= 1.
    """
    if n_requests < 1:
        raise WorkloadError("n_requests must be >= 1")
    if not task.has_statistics:
        raise WorkloadError(
            f"task {task.name!r} has no token statistics; ingest a measured trace (--trace) to supply them"
        )
    tx = transmission_energy(task.request_bytes, task.response_bytes, per_bit)
    cases = {}
    for which in ("mean", "min", "max"):
        p = max(1, round(getattr(task.prompt_len, which)))
        g = max(1, round(getattr(task.gen_len, which)))
        est = estimate_request(model, accel, p, g)
        if calibration is not None:
            est = calibration.apply(est)
        cases[which] = dataclasses.replace(est, tx_energy=tx)
    total = n_requests * cases["mean"].inference_energy
    return TaskEstimate(task.name, cases["mean"], cases["min"], cases["max"], n_requests, total)


@dataclass(frozen=True)
class TraceRecord:
    prompt_len: int
    gen_len: int
    energy_j: float
    ttft_s: float
    tbt_s: float


def read_trace(path: str | Path) -> list[TraceRecord]:
    """Read a trace CSV. A header row with the five trace columns is required."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in TRACE_COLUMNS if c not in header]
        if missing:
            raise WorkloadError(f"{path}: trace header missing columns {missing}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            row = {k.strip(): v for k, v in row.items() if k is not None}
            try:
                records.append(
                    TraceRecord(
                        prompt_len=int(row["prompt_len"]),
                        gen_len=int(row["gen_len"]),
                        energy_j=float(row["energy_j"]),
                        ttft_s=float(row["ttft_s"]),
                        tbt_s=float(row["tbt_s"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise WorkloadError(f"{path}:{lineno}: {exc}") from None
    return records


def write_trace(path: str | Path, records: Iterable[TraceRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for r in records:
            writer.writerow([r.prompt_len, r.gen_len, repr(r.energy_j), repr(r.ttft_s), repr(r.tbt_s)])


def ingest_trace(
    records: Sequence[TraceRecord],
    model: ModelSpec,
    accel: AcceleratorSpec,
    name: str = "trace",
) -> tuple[TaskProfile, Calibration]:
    """Summarize measured records into a TaskProfile and per-quantity scales.

    Each scale is the arithmetic mean of measured / modeled over the records.
    """
    if not records:
        raise WorkloadError("trace is empty")
    e_ratios, ttft_ratios, tbt_ratios = [], [], []
    for i, r in enumerate(records):
        if min(r.energy_j, r.ttft_s, r.tbt_s) <= 0 or r.prompt_len < 1 or r.gen_len < 1:
            raise WorkloadError(f"trace record {i}: measurements and token counts must be positive")
        est = estimate_request(model, accel, r.prompt_len, r.gen_len)
        e_ratios.append(r.energy_j / est.inference_energy)
        ttft_ratios.append(r.ttft_s / est.ttft)
        tbt_ratios.append(r.tbt_s / est.tbt)

    def stats(values):
        return TokenStats(float(statistics.fmean(values)), float(min(values)), float(max(values)))

    profile = TaskProfile(
        name=name,
        prompt_len=stats([r.prompt_len for r in records]),
        gen_len=stats([r.gen_len for r in records]),
        source="ingested trace",
    )
    calibration = Calibration(
        energy_scale=statistics.fmean(e_ratios),
        ttft_scale=statistics.fmean(ttft_ratios),
        tbt_scale=statistics.fmean(tbt_ratios),
    )
    return profile, calibration
