"""Feature file format and manifest tests."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vwsearch.features_io import (
    FeatureFileError,
    FrameRecord,
    Manifest,
    feature_files_in,
    read_feature_file,
    write_feature_file,
)


def records_of(dim, rows):
    return [
        FrameRecord(video_id=v, frame_index=f, timestamp=t, vector=np.asarray(vec, dtype=np.float32))
        for v, f, t, vec in rows
    ]


class TestRoundTrip:
    def test_bit_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        dim = 16
        rows = [(i % 3, i, i * 0.5, rng.normal(size=dim).astype(np.float32)) for i in range(20)]
        path = tmp_path / "corpus.cvw"
        write_feature_file(path, dim, records_of(dim, rows))
        got_dim, got = read_feature_file(path)
        assert got_dim == dim
        assert len(got) == 20
        for rec, (v, f, t, vec) in zip(got, rows):
            assert rec.video_id == v
            assert rec.frame_index == f
            assert rec.timestamp == np.float32(t)
            assert rec.vector.dtype == np.float32
            np.testing.assert_array_equal(rec.vector, vec)

    def test_write_read_write_identical_bytes(self, tmp_path):
        rng = np.random.default_rng(1)
        dim = 8
        rows = [(0, i, float(i), rng.normal(size=dim).astype(np.float32)) for i in range(5)]
        a = tmp_path / "a.cvw"
        b = tmp_path / "b.cvw"
        write_feature_file(a, dim, records_of(dim, rows))
        got_dim, got = read_feature_file(a)
        write_feature_file(b, got_dim, got)
        assert a.read_bytes() == b.read_bytes()

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.integers(0, 2**32 - 1),
                st.integers(0, 2**32 - 1),
                st.floats(0, 1e6, width=32),
                st.lists(st.floats(-1e6, 1e6, width=32), min_size=3, max_size=3),
            ),
            max_size=10,
        )
    )
    def test_round_trip_property(self, rows):
        import tempfile
        from pathlib import Path

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "x.cvw"
            write_feature_file(path, 3, records_of(3, rows))
            _, got = read_feature_file(path)
        assert [(r.video_id, r.frame_index) for r in got] == [(v, f) for v, f, _, _ in rows]


class TestErrors:
    def good_file(self, tmp_path):
        path = tmp_path / "good.cvw"
        write_feature_file(path, 4, records_of(4, [(0, 0, 0.0, [1, 2, 3, 4]), (0, 1, 1.0, [5, 6, 7, 8])]))
        return path

    def test_bad_magic_reports_offset_zero(self, tmp_path):
        path = self.good_file(tmp_path)
        data = bytearray(path.read_bytes())
        data[:4] = b"WHAT"
        path.write_bytes(bytes(data))
        with pytest.raises(FeatureFileError, match="byte 0"):
            read_feature_file(path)

    def test_bad_version(self, tmp_path):
        path = self.good_file(tmp_path)
        data = bytearray(path.read_bytes())
        data[4] = 9
        path.write_bytes(bytes(data))
        with pytest.raises(FeatureFileError, match="version"):
            read_feature_file(path)

    def test_truncated_records_report_offset(self, tmp_path):
        path = self.good_file(tmp_path)
        data = path.read_bytes()
        path.write_bytes(data[:-10])
        with pytest.raises(FeatureFileError, match="truncated"):
            read_feature_file(path)

    def test_trailing_garbage_rejected(self, tmp_path):
        path = self.good_file(tmp_path)
        path.write_bytes(path.read_bytes() + b"\x00\x01")
        with pytest.raises(FeatureFileError, match="trailing"):
            read_feature_file(path)

    def test_short_header_rejected(self, tmp_path):
        path = tmp_path / "short.cvw"
        path.write_bytes(b"CVW1\x01")
        with pytest.raises(FeatureFileError, match="header"):
            read_feature_file(path)

    def test_wrong_vector_shape_rejected_on_write(self, tmp_path):
        with pytest.raises(FeatureFileError):
            write_feature_file(tmp_path / "x.cvw", 4, records_of(3, [(0, 0, 0.0, [1, 2, 3])]))

    def test_non_finite_vector_rejected_on_write(self, tmp_path):
        with pytest.raises(FeatureFileError):
            write_feature_file(
                tmp_path / "x.cvw", 2, records_of(2, [(0, 0, 0.0, [np.inf, 0.0])])
            )


class TestManifest:
    def test_round_trip(self, tmp_path):
        manifest = Manifest(videos={0: "a", 3: "b"}, model="toy", interval_seconds=2.0)
        path = tmp_path / "manifest.json"
        manifest.save(path)
        loaded = Manifest.load(path)
        assert loaded == manifest

    def test_malformed_manifest_rejected(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(FeatureFileError):
            Manifest.load(path)

    def test_feature_files_sorted(self, tmp_path):
        for name in ("b.cvw", "a.cvw", "c.txt"):
            write_feature_file(tmp_path / name, 2, records_of(2, [(0, 0, 0.0, [1, 2])]))
        files = feature_files_in(tmp_path)
        assert [f.name for f in files] == ["a.cvw", "b.cvw"]
