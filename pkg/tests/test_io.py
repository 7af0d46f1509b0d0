import numpy as np
import pytest

from cbnorms.io import (
    MatrixParseError,
    format_complex,
    parse_complex,
    read_matrix,
    write_matrix,
)
from conftest import random_complex


@pytest.mark.parametrize(
    "text,value",
    [
        ("1.5", 1.5),
        ("-2", -2.0),
        ("1+2i", 1 + 2j),
        ("1-2i", 1 - 2j),
        ("i", 1j),
        ("-i", -1j),
        ("3i", 3j),
        ("1e-3+2.5e2i", 1e-3 + 2.5e2j),
        ("1+i", 1 + 1j),
        (" 2.0 ", 2.0),
    ],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "1+2", "abc", "2i+1", "1 2"])
def test_parse_complex_rejects(bad):
    with pytest.raises(MatrixParseError):
        parse_complex(bad)


def test_format_parse_round_trip(rng):
    for z in (1 / 3 + 1j * np.pi, -2.5, 1e-17j, complex(rng.normal(), rng.normal())):
        assert parse_complex(format_complex(z)) == z


def test_json_round_trip(tmp_path, rng):
    X = random_complex(rng, 3, 2)
    path = tmp_path / "m.json"
    write_matrix(path, X)
    np.testing.assert_array_equal(read_matrix(path), X)


def test_csv_round_trip(tmp_path, rng):
    X = random_complex(rng, 2, 4)
    path = tmp_path / "m.csv"
    write_matrix(path, X)
    np.testing.assert_array_equal(read_matrix(path), X)


def test_read_rejects_garbage(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(MatrixParseError):
        read_matrix(path)
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(MatrixParseError):
        read_matrix(path)
    path.write_text("")
    with pytest.raises(MatrixParseError):
        read_matrix(path)


def test_json_entry_count_validated(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"rows": 2, "cols": 2, "entries": [[1, 0]]}')
    with pytest.raises(MatrixParseError):
        read_matrix(path)
