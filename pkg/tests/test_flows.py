"""Flow aggregation: binning examples and exact byte conservation."""

import pytest
from hypothesis import given, strategies as st

from cyberomr.sensor import aggregate_flows
from cyberomr.sim import FlowRecord


def flow(ts_s: float, nbytes: int, packets: int = 1) -> FlowRecord:
    ts = int(ts_s * 1000)
    return FlowRecord(ts, ts + 1000, "a", "b", "tcp", nbytes, packets)


class TestAggregateFlows:
    def test_two_flows_binned_by_ts_start(self):
        series = aggregate_flows([flow(10, 100), flow(70, 200)], bucket_width=60)
        assert len(series.buckets) == 2
        assert series.buckets[0].bucket_start == 0
        assert series.buckets[0].bytes == 100
        assert series.buckets[1].bucket_start == 60_000
        assert series.buckets[1].bytes == 200

    def test_empty_stream_gives_empty_series(self):
        series = aggregate_flows([], bucket_width=60)
        assert series.buckets == ()
        assert series.total_bytes() == 0

    def test_gap_buckets_are_zero_filled_and_contiguous(self):
        series = aggregate_flows([flow(10, 100), flow(310, 50)], bucket_width=60)
        starts = [b.bucket_start for b in series.buckets]
        assert starts == [0, 60_000, 120_000, 180_000, 240_000, 300_000]
        assert [b.bytes for b in series.buckets] == [100, 0, 0, 0, 0, 50]

    def test_flow_counted_in_bucket_of_its_start_even_if_long(self):
        long_flow = FlowRecord(30_000, 500_000, "a", "b", "tcp", 999, 3)
        series = aggregate_flows([long_flow], bucket_width=60)
        assert len(series.buckets) == 1
        assert series.buckets[0].bytes == 999

    def test_clean_run_bucket_bytes_equal_archive_flow_bytes(self, clean_run_2h):
        series = aggregate_flows(clean_run_2h.flows, bucket_width=60)
        assert series.total_bytes() == sum(f.bytes for f in clean_run_2h.flows)
        assert sum(b.flow_count for b in series.buckets) == len(clean_run_2h.flows)

    def test_invalid_width_rejected(self):
        with pytest.raises(ValueError):
            aggregate_flows([], bucket_width=0)


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=10_000_000),  # ts ms
            st.integers(min_value=0, max_value=10**9),       # bytes
        ),
        max_size=200,
    ),
    st.integers(min_value=1, max_value=3600),
)
def test_byte_conservation_property(raw, width):
    flows = [
        FlowRecord(ts, ts + 500, "a", "b", "tcp", nbytes, min(1, nbytes))
        for ts, nbytes in raw
    ]
    series = aggregate_flows(flows, bucket_width=width)
    assert series.total_bytes() == sum(f.bytes for f in flows)
