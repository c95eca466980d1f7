import json

import numpy as np
import pytest

import dnse_lab as dl
from dnse_lab import io as lab_io


class TestFormat:
    def test_seventeen_digits_round_trip(self):
        rng = np.random.default_rng(0)
        for x in rng.standard_normal(200):
            assert float(lab_io.fmt(x)) == x

    def test_integers_stay_short(self):
        assert lab_io.fmt(2.0) == "2"


class TestStateFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        state = dl.LatticeState(rng.standard_normal(17))
        path = tmp_path / "sol.state.csv"
        lab_io.write_state(path, state, 24.0, -0.42)
        loaded, meta = lab_io.read_state(path)
        assert np.array_equal(loaded.values, state.values)
        assert loaded.boundary is dl.Boundary.PERIODIC
        assert meta == {"N": 17, "boundary": "periodic", "c": 24.0, "E": -0.42}

    def test_open_boundary_round_trip(self, tmp_path):
        state = dl.LatticeState([1.0, 0.5], dl.Boundary.OPEN)
        path = tmp_path / "s.csv"
        lab_io.write_state(path, state, 1.0, None)
        loaded, meta = lab_io.read_state(path)
        assert loaded.boundary is dl.Boundary.OPEN
        assert meta["E"] is None

    def test_deterministic_bytes(self, tmp_path):
        rng = np.random.default_rng(2)
        state = dl.LatticeState(rng.standard_normal(9))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        lab_io.write_state(a, state, 3.0, -1.0)
        lab_io.write_state(b, state, 3.0, -1.0)
        assert a.read_bytes() == b.read_bytes()
        assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("psi,index\n0,1.0\n")
        with pytest.raises(ValueError):
            lab_io.read_state(path)

    def test_gapped_index_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("index,psi\n0,1.0\n2,0.5\n")
        path.with_suffix(".json").write_text('{"N": 2, "boundary": "periodic", "c": 1, "E": 0}')
        with pytest.raises(ValueError):
            lab_io.read_state(path)

    def test_sidecar_size_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("index,psi\n0,1.0\n")
        path.with_suffix(".json").write_text('{"N": 5, "boundary": "periodic", "c": 1, "E": 0}')
        with pytest.raises(ValueError):
            lab_io.read_state(path)


class TestOtherWriters:
    def test_portrait_file(self, tmp_path):
        portrait = dl.phase_portrait(dl.LatticeState([1.0, 0.0, 0.0]))
        path = lab_io.write_portrait(tmp_path / "p.csv", portrait)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "psi,dpsi"
        assert len(lines) == 4

    def test_orbit_file(self, tmp_path):
        orbit = dl.iterate_map(dl.MapState(0.1, 0.0), 1.0, 0.0, 5)
        path = lab_io.write_orbit(tmp_path / "o.csv", orbit)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "step,psi,Z"
        assert len(lines) == 7
        assert lines[1].startswith("0,")

    def test_box_counts_file(self, tmp_path):
        portrait = dl.PhasePortrait(np.array([[0.0, 0.0], [1.0, 1.0]]))
        result = dl.box_count(portrait, [1.0, 0.5])
        path = lab_io.write_box_counts(tmp_path / "b.csv", result)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "scale,occupied"
        assert len(lines) == 3

    def test_json_sorted_and_stable(self, tmp_path):
        payload = {"b": 1, "a": [1.5, None]}
        path = lab_io.write_json(tmp_path / "r.json", payload)
        text = path.read_text()
        assert json.loads(text) == payload
        assert text.index('"a"') < text.index('"b"')
