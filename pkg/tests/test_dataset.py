#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
import pytest

from dfc_mvsv.dataset import Dataset, as_dataset, default_channel_names, load_csv, standardize
from dfc_mvsv.errors import (
    ConstantChannel, InvalidData, NonFiniteValue, ParseError, RaggedRows, StorageError,
)


@pytest.fixture
def write_csv(tmp_path):
    def write(text, name='session.csv'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_load_csv_with_header(write_csv):
    values, names = load_csv(write_csv('left,right\n1.0,2.0\n3.5,-4\n'))
    np.testing.assert_array_equal(values, [[1.0, 2.0], [3.5, -4.0]])
    assert names == ['left', 'right']


def test_load_csv_without_header(write_csv):
    values, names = load_csv(write_csv('# recorded at 2 Hz\n1,2,3\n\n4,5,6\n'))
    np.testing.assert_array_equal(values, [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    assert names is None


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(StorageError) as excinfo:
        load_csv(str(tmp_path / 'absent.csv'))
    assert excinfo.value.exit_code == 4


def test_load_csv_empty(write_csv):
    with pytest.raises(ParseError):
        load_csv(write_csv(''))
    with pytest.raises(ParseError):
        load_csv(write_csv('a,b\n'))


def test_load_csv_bad_number(write_csv):
    with pytest.raises(ParseError) as excinfo:
        load_csv(write_csv('a,b\n1,2\n3,x\n'))
    assert (excinfo.value.row, excinfo.value.column) == (3, 2)
    assert 'row 3, column 2' in str(excinfo.value)


def test_load_csv_non_finite(write_csv):
    with pytest.raises(NonFiniteValue) as excinfo:
        load_csv(write_csv('1,2\nnan,4\n'))
    assert (excinfo.value.row, excinfo.value.column) == (2, 1)
    with pytest.raises(NonFiniteValue):
        load_csv(write_csv('1,inf\n'))


def test_load_csv_ragged(write_csv):
    with pytest.raises(RaggedRows) as excinfo:
        load_csv(write_csv('1,2\n3\n'))
    assert excinfo.value.row == 2
    with pytest.raises(RaggedRows):
        load_csv(write_csv('1,2\n3,4,5\n'))
    assert excinfo.value.exit_code == 3


def test_load_csv_not_utf8(tmp_path):
    path = tmp_path / 'latin.csv'
    path.write_bytes(b'a,b\n0.1,0.2\n\xff\xfe,0.3\n')
    with pytest.raises(ParseError) as excinfo:
        load_csv(str(path))
    assert 'UTF-8' in str(excinfo.value)
    assert excinfo.value.exit_code == 3


def test_standardize_zero_mean_unit_variance(rng):
    raw = rng.normal(3.0, 2.0, size=(50, 3))
    dataset = standardize(raw)
    np.testing.assert_allclose(dataset.values.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(dataset.values.std(axis=0, ddof=1), 1.0, rtol=1e-12)
    assert dataset.channel_names == ['ch0', 'ch1', 'ch2']
    assert (dataset.K, dataset.m) == (50, 3)


def test_standardize_example():
    dataset = standardize([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]], ['a', 'b'], sampling_interval=2.0)
    np.testing.assert_allclose(dataset.values, [[-1.0, -1.0], [0.0, 0.0], [1.0, 1.0]])
    assert dataset.channel_names == ['a', 'b']
    assert dataset.sampling_interval == 2.0


def test_standardize_constant_channel():
    with pytest.raises(ConstantChannel) as excinfo:
        standardize([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]], ['a', 'b'])
    assert excinfo.value.column == 'b'


def test_standardize_needs_two_rows():
    with pytest.raises(InvalidData):
        standardize([[1.0, 2.0]])


def test_as_dataset_keeps_values():
    dataset = as_dataset([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(dataset.values, [[1.0, 2.0], [3.0, 4.0]])
    assert dataset.channel_names == default_channel_names(2)


def test_dataset_validation():
    with pytest.raises(InvalidData):
        Dataset(values=np.zeros(3), channel_names=['a'])
    with pytest.raises(InvalidData):
        Dataset(values=np.array([[np.inf, 0.0]]), channel_names=['a', 'b'])
    with pytest.raises(InvalidData):
        Dataset(values=np.zeros((2, 2)), channel_names=['a'])
