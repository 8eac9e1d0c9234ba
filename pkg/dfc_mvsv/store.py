# -*- coding: utf-8 -*-
import json
import uuid
from functools import wraps
from pathlib import Path

from flask import current_app
from flask_restx import abort

from dfc_mvsv.errors import DfcError, StorageError

KINDS = ('simulations', 'fits')


def dfcexceptions(func):
    '''Turn estimator errors into http error responses'''
    @wraps(func)
    def decorated(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DfcError as exc:
            current_app.logger.error('{}: {}'.format(type(exc).__name__, exc))
            if exc.status >= 500 and not current_app.debug:
                return abort(exc.status, 'Storage Error')
            return abort(exc.status, str(exc))
    return decorated


class Store():
    '''
    Result documents kept as json files, one directory per kind,
    under the RESULTS_DIR setting
    '''
    root = None

    @classmethod
    def _path(cls, kind, ident=None):
        if kind not in KINDS:
            raise KeyError(kind)
        path = cls.root / kind
        if ident is None:
            return path
        return path / '{}.json'.format(ident)

    @classmethod
    def save(cls, kind, document):
        '''
        Store a document and return its generated identifier
        '''
        ident = uuid.uuid4().hex
        path = cls._path(kind, ident)
        document = dict(document, id=ident)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(document, sort_keys=True, allow_nan=False), encoding='utf-8')
        except OSError as exc:
            raise StorageError(path, exc.strerror or exc) from exc
        current_app.logger.debug('stored {} {}'.format(kind, ident))
        return ident

    @classmethod
    def get(cls, kind, ident):
        '''
        Returns a document or None if unknown
        '''
        path = cls._path(kind, ident)
        if not path.is_file():
            return None
        try:
            return json.loads(path.read_text(encoding='utf-8'))
        except OSError as exc:
            raise StorageError(path, exc.strerror or exc) from exc

    @classmethod
    def list(cls, kind):
        return [
            cls.get(kind, path.stem)
            for path in sorted(cls._path(kind).glob('*.json'))
        ]

    @classmethod
    def delete(cls, kind, ident):
        '''
        Returns False when there was nothing to delete
        '''
        path = cls._path(kind, ident)
        if not path.is_file():
            return False
        try:
            path.unlink()
        except OSError as exc:
            raise StorageError(path, exc.strerror or exc) from exc
        return True

    @classmethod
    def init_app(cls, app):
        cls.root = Path(app.config.get('RESULTS_DIR', 'results')).resolve()
        cls.root.mkdir(parents=True, exist_ok=True)
        app.logger.debug('results stored in {}'.format(cls.root))
