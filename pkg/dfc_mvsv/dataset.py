# -*- coding: utf-8 -*-
'''
Multichannel time series input: CSV parsing and session-wide standardization.
'''
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from dfc_mvsv.errors import (
    ConstantChannel, InvalidData, NonFiniteValue, ParseError, RaggedRows, StorageError,
)

logger = logging.getLogger(__name__)

STANDARDIZE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Dataset:
    '''
    Standardized observations, one row per time point and one column per
    channel. ``sampling_interval`` (seconds) is informative only.
    '''
    values: np.ndarray
    channel_names: list = field(default_factory=list)
    sampling_interval: Optional[float] = None

    def __post_init__(self):
        if self.values.ndim != 2:
            raise InvalidData('dataset values must be a (K, m) array')
        if not np.all(np.isfinite(self.values)):
            raise InvalidData('dataset values must be finite')
        if len(self.channel_names) != self.m:
            raise InvalidData('{} channel names for {} channels'.format(len(self.channel_names), self.m))

    @property
    def K(self):
        return self.values.shape[0]

    @property
    def m(self):
        return self.values.shape[1]


def default_channel_names(m):
    return ['ch{}'.format(i) for i in range(m)]


def _is_number(text):
    try:
        float(text)
    except (TypeError, ValueError):
        return False
    return True


def load_csv(path):
    '''
    Read a comma separated numeric table.

    A first row that is not entirely numeric is taken as the channel names.
    Lines starting with ``#`` are comments. Rows and columns in error
    messages are 1-based and count the header.

    :returns: (values as a (K, m) array, channel names or None)
    '''
    try:
        frame = pd.read_csv(path, header=None, dtype=str, comment='#', keep_default_na=False,
                            skip_blank_lines=True, encoding='utf-8')
    except FileNotFoundError as exc:
        raise StorageError(path, 'no such file') from exc
    except OSError as exc:
        raise StorageError(path, exc) from exc
    except pd.errors.EmptyDataError as exc:
        raise ParseError('{} holds no data'.format(path)) from exc
    except pd.errors.ParserError as exc:
        raise RaggedRows('rows differ in width: {}'.format(exc)) from exc
    except UnicodeDecodeError as exc:
        raise ParseError('{} is not valid UTF-8: byte {} cannot be decoded'.format(path, exc.start)) from exc
    except ValueError as exc:
        raise ParseError('{} cannot be parsed: {}'.format(path, exc)) from exc

    cells = frame.to_numpy(dtype=object)
    header = None
    if len(cells) and not all(_is_number(cell) for cell in cells[0] if isinstance(cell, str)):
        header = [str(cell).strip() for cell in cells[0]]
        cells = cells[1:]
    offset = 2 if header is not None else 1
    if len(cells) == 0:
        raise ParseError('{} holds no data rows'.format(path))

    values = np.empty(cells.shape)
    for r, row in enumerate(cells):
        for c, cell in enumerate(row):
            if not isinstance(cell, str):
                raise RaggedRows('row has {} of {} fields'.format(c, cells.shape[1]), row=r + offset)
            try:
                value = float(cell)
            except ValueError:
                raise ParseError('not a number: {!r}'.format(cell), row=r + offset, column=c + 1)
            if not math.isfinite(value):
                raise NonFiniteValue('non-finite value {!r}'.format(cell), row=r + offset, column=c + 1)
            values[r, c] = value
    logger.debug('loaded %d x %d values from %s', values.shape[0], values.shape[1], path)
    return values, header


def standardize(raw, channel_names=None, sampling_interval=None):
    '''
    Shift each column to zero mean and scale it to unit sample standard
    deviation (divisor K - 1), both computed over the whole session.
    '''
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2 or raw.shape[0] < 2:
        raise InvalidData('standardization needs a (K, m) array with K >= 2, got {}'.format(raw.shape))
    names = list(channel_names) if channel_names else default_channel_names(raw.shape[1])
    std = raw.std(axis=0, ddof=1)
    for name, value in zip(names, std):
        if value == 0:
            raise ConstantChannel(name)
    values = (raw - raw.mean(axis=0)) / std
    return Dataset(values=values, channel_names=names, sampling_interval=sampling_interval)


def as_dataset(raw, channel_names=None, sampling_interval=None):
    '''Wrap observations that are used as they are'''
    raw = np.asarray(raw, dtype=float)
    names = list(channel_names) if channel_names else default_channel_names(raw.shape[1])
    return Dataset(values=raw, channel_names=names, sampling_interval=sampling_interval)
