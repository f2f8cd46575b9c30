from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from digitwaring import io


@given(st.fractions())
def test_ratio_round_trip(x):
    assert io.parse_ratio(io.ratio(x)) == x


def test_ratio_format():
    assert io.ratio(Fraction(1, 2)) == "1/2"
    assert io.ratio(3) == "3/1"


def test_dumps_is_canonical():
    obj = {"b": Fraction(2, 6), "a": np.int64(3), "s": {3, 1}, "t": (np.float64(0.5), True)}
    text = io.dumps(obj)
    assert text == io.dumps(dict(reversed(list(obj.items()))))
    assert '"1/3"' in text and text.index('"a"') < text.index('"b"')


def test_csv_text():
    text = io.csv_text(["x", "y"], [[1, Fraction(1, 3)], [2, None]])
    assert text == "x,y\n1,1/3\n2,\n"


def test_bitmap_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    bits = rng.random(77) < 0.4
    path = tmp_path / "sub" / "s.bits"
    io.write_bitmap(path, bits, -12, {"what": "test"})
    back, lo = io.read_bitmap(path)
    assert lo == -12 and np.array_equal(back, bits)
    assert io.read_json(str(path) + ".json")["what"] == "test"
