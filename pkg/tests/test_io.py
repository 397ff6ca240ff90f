import json

import numpy as np

from alberlab import io
from alberlab.seastate import generate
from alberlab.spectrum import discretize, gaussian_spectrum


def test_field_binary_round_trip(tmp_path):
    a = (np.arange(12) + 1j * np.arange(12) ** 2).reshape(3, 4) / 7
    path, side = io.write_field_binary(tmp_path / "f.bin", a, times=np.array([0, 0.1, 0.2]))
    back, meta = io.read_field_binary(path)
    assert np.array_equal(back, a)
    assert meta["shape"] == [3, 4] and meta["times"] == [0, 0.1, 0.2]
    assert path.stat().st_size == a.size * 16


def test_csv_writers_are_exact(tmp_path):
    S = gaussian_spectrum(1, 1, 0.1)
    D = discretize(S, 50.0)
    head, rows = io.read_csv(io.write_discrete_spectrum_csv(tmp_path / "d.csv", D))
    assert head == ["n", "k", "P_n"]
    assert [float(r[2]) for r in rows] == list(D.coefficients[D.support()])
    r = generate(S, 50.0, 1, seed=9)
    head, rows = io.read_csv(io.write_realization_csv(tmp_path / "r.csv", r))
    assert np.array_equal([float(x[3]) for x in rows], r.phases)
    head, rows = io.read_csv(io.write_complex_csv(tmp_path / "c.csv", [1 + 2j, 3j], x=[0.0, 1.0]))
    assert head == ["x", "real", "imag"] and rows[1] == ["1.0", "0.0", "3.0"]


def test_heatmap_and_json(tmp_path):
    head, rows = io.read_csv(io.write_heatmap_csv(tmp_path / "h.csv", np.ones((2, 3)), [0, 1, 2], [0.0, 0.5]))
    assert head == ["t", "x", "value"] and len(rows) == 6
    p = io.write_json(tmp_path / "a" / "b.json", {"z": 1 + 2j, "a": np.float64(1.5), "v": np.arange(2)})
    assert json.loads(p.read_text()) == {"a": 1.5, "v": [0, 1], "z": [1.0, 2.0]}
