# Standard:
import json

# External:
import numpy as np
import pandas as pd
import pytest

# Internal:
from pyalfven.fields.core import CurlField, MatrixField, ScalarField, VectorField
from pyalfven.utils.config import RunConfig
from pyalfven.utils.io import (HEADER, MAGIC, dump_state, field_to_frame, read_field, write_field, write_frame,
                               write_manifest)


class TestFieldFiles:
    def test_header_layout(self, tmp_path, strip):
        path = write_field(str(tmp_path / 'u.afld'), ScalarField.zeros(strip))
        raw = open(path, 'rb').read()
        assert HEADER.size == 32
        magic, d, N, L, _, ncomp, reserved = HEADER.unpack_from(raw)
        assert (magic, d, N, L, ncomp, reserved) == (MAGIC, 2, 32, 4.0, 1, 0)
        assert len(raw) == 32 + 8 * strip.size

    @pytest.mark.parametrize('kind', [ScalarField, VectorField, MatrixField])
    def test_reads_back_type_and_grid(self, tmp_path, box, kind):
        rng = np.random.default_rng(0)
        u = kind(box, rng.standard_normal(kind._lead_shape(box) + box.shape))
        v = read_field(write_field(str(tmp_path / 'u.afld'), u))
        assert type(v) is kind
        assert v.grid == box
        np.testing.assert_array_equal(v.data, u.data)

    def test_curl_in_two_dimensions(self, tmp_path, torus):
        u = CurlField(torus, np.ones((1,) + torus.shape))
        v = read_field(write_field(str(tmp_path / 'psi.afld'), u))
        # One component in d = 2 reads back as a scalar unless the kind is given.
        assert isinstance(v, ScalarField)
        assert isinstance(read_field(str(tmp_path / 'psi.afld'), kind=CurlField), CurlField)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / 'bad.afld'
        path.write_bytes(b'XXXX' + bytes(28))
        with pytest.raises(ValueError, match='not a field file'):
            read_field(str(path))

    def test_truncated(self, tmp_path, box):
        path = write_field(str(tmp_path / 'u.afld'), ScalarField.zeros(box))
        raw = open(path, 'rb').read()
        with open(path, 'wb') as handle:
            handle.write(raw[:-8])
        with pytest.raises(ValueError, match='payload'):
            read_field(path)
        with open(path, 'wb') as handle:
            handle.write(raw[:10])
        with pytest.raises(ValueError, match='shorter than a field header'):
            read_field(path)

    def test_frame(self, small_box):
        frame = field_to_frame(VectorField.zeros(small_box))
        assert list(frame.columns) == ['x0', 'x1', 'c0', 'c1']
        assert len(frame) == small_box.size


class TestRunOutputs:
    def test_frame_is_exact(self, tmp_path):
        path = write_frame(str(tmp_path / 'f.csv'), pd.DataFrame({'a': [0.1, 1.0 / 3.0]}))
        assert pd.read_csv(path)['a'].tolist() == [0.1, 1.0 / 3.0]

    def test_manifest(self, tmp_path):
        config = RunConfig(seed=4)
        path = write_manifest(str(tmp_path), config, [str(tmp_path / 'b.csv'), str(tmp_path / 'a.csv')], {'x': 1})
        manifest = json.loads(open(path).read())
        assert manifest['config'] == config.to_dict()
        assert manifest['outputs'] == ['a.csv', 'b.csv']
        assert manifest['summary'] == {'x': 1}
        assert 'version' in manifest

    def test_dump_state(self, tmp_path, box):
        assert dump_state(None, {'z': ScalarField.zeros(box)}, 1.0) is None
        directory = dump_state(str(tmp_path / 'abort'), {'z': ScalarField.zeros(box)}, 1.0)
        assert read_field(f"{directory}/abort-z.afld").grid == box
        assert json.loads(open(f"{directory}/abort.json").read()) == {'fields': ['z'], 't': 1.0}
