# -*- coding: utf-8 -*-
'''
Exceptions raised by dfc_mvsv.

Every exception carries the exit status used by the command line and the
HTTP status used by the web service.
'''


class DfcError(Exception):
    exit_code = 1
    status = 500


class ConfigError(DfcError):
    '''Invalid sampler, model or run settings'''
    exit_code = 2
    status = 400


class DomainError(DfcError, ValueError):
    '''An argument lies outside the domain of a mathematical function'''
    exit_code = 2
    status = 400


class NotPositiveDefinite(DfcError, ArithmeticError):
    '''A matrix expected to be symmetric positive-definite is not'''
    exit_code = 3
    status = 422


class DataError(DfcError):
    exit_code = 3
    status = 422


class InvalidData(DataError):
    pass


class ParseError(DataError):

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column

    def __str__(self):
        msg = super().__str__()
        if self.row is None:
            return msg
        if self.column is None:
            return '{} (row {})'.format(msg, self.row)
        return '{} (row {}, column {})'.format(msg, self.row, self.column)


class RaggedRows(ParseError):
    pass


class NonFiniteValue(ParseError):
    pass


class ConstantChannel(DataError):

    def __init__(self, column):
        super().__init__('channel {!r} has zero variance'.format(column))
        self.column = column


class SchemaMismatch(DataError):
    pass


class EmptyResult(DataError):
    pass


class StorageError(DfcError):
    '''Reading or writing a file failed'''
    exit_code = 4
    status = 500

    def __init__(self, path, reason):
        super().__init__('{}: {}'.format(path, reason))
        self.path = path
