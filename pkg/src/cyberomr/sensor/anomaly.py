"""Traffic-volume anomaly detection over a bucket series.

Rolling baseline: a bucket is flagged when its byte count deviates from the
mean of the preceding `window` unflagged buckets by more than k standard
deviations. Flagged buckets are excluded from later baselines so a sustained
surge cannot absorb itself into normality. A sigma floor (fraction of the
mean) keeps near-constant traffic from flagging on trivial jitter.
"""

from collections import deque
from dataclasses import dataclass
from statistics import fmean, pstdev

from .events import SensorEvent, UlidFactory, severity_for
from .flows import TrafficSeries


@dataclass(frozen=True)
class AnomalyPolicy:
    window: int = 60          # baseline size, buckets
    k: float = 3.0            # deviation multiplier
    min_baseline: int = 10    # buckets before any flagging
    sigma_floor_frac: float = 0.01

    def validate(self) -> None:
        if not self.window >= self.min_baseline >= 2:
            raise ValueError(
                f"policy requires window >= min_baseline >= 2, got window={self.window} "
                f"min_baseline={self.min_baseline}"
            )
        if self.k <= 0:
            raise ValueError(f"k must be > 0, got {self.k}")


def detect_volume_anomaly(
    series: TrafficSeries,
    policy: AnomalyPolicy | None = None,
    sensor_id: str = "",
    severity_map: dict | None = None,
    ids: UlidFactory | None = None,
) -> list[SensorEvent]:
    policy = policy or AnomalyPolicy()
    policy.validate()
    ids = ids or UlidFactory()
    sensor_id = sensor_id or f"sensor-{series.aor_id}"

    baseline: deque = deque(maxlen=policy.window)
    events = []
    for index, bucket in enumerate(series.buckets):
        if index < policy.min_baseline or len(baseline) < policy.min_baseline:
            baseline.append(bucket.bytes)
            continue
        mu = fmean(baseline)
        sigma = max(pstdev(baseline), policy.sigma_floor_frac * mu)
        deviation = abs(bucket.bytes - mu)
        # sigma is 0 only for an all-zero baseline; any traffic then deviates
        flagged = deviation > policy.k * sigma if sigma > 0 else deviation > 0
        if flagged:
            bucket_end = bucket.bucket_start + series.width_ms
            events.append(
                SensorEvent(
                    event_id=ids.new(bucket.bucket_start),
                    aor_id=series.aor_id,
                    sensor_id=sensor_id,
                    kind="volume-anomaly",
                    ts=bucket.bucket_start,
                    severity=severity_for("volume-anomaly", severity_map=severity_map),
                    detail={
                        "bucket_start": bucket.bucket_start,
                        "bucket_end": bucket_end,
                        "bytes": bucket.bytes,
                        "baseline_mean": round(mu, 3),
                        "baseline_sigma": round(sigma, 3),
                        "k": policy.k,
                    },
                    evidence_ref=(index, index),
                )
            )
        else:
            baseline.append(bucket.bytes)
    return events
