# -*- coding: utf-8 -*-
from flask import current_app
from flask_restx import fields, reqparse

from dfc_mvsv.app import api, Resource
from dfc_mvsv.dataset import as_dataset, standardize
from dfc_mvsv.posterior import summarize
from dfc_mvsv.results import provenance, summary_document
from dfc_mvsv.sampler import SamplerConfig, as_observations, run_chain
from dfc_mvsv.store import Store

nsfit = api.namespace('fits', description='posterior estimation of time-varying correlations')


fit_model_post = nsfit.model('Fit Model Post', {
    'observations': fields.List(fields.List(fields.Float), required=True,
                                description='one row per time point, one column per channel'),
    'channel_names': fields.List(fields.String, default=None),
    'standardize': fields.Boolean(default=True),
    'sampler': fields.Raw(default=None, description='sampler settings overriding the defaults'),
})

fit_model = nsfit.model('Fit Model', {
    'id': fields.String(description='the unique fit identifier'),
    'config': fields.Raw,
    'percentiles': fields.Raw(description='percentile trajectories of every pair'),
    'significance': fields.Raw(description='sign of each pair where its 95% band excludes 0'),
    'nu_samples': fields.List(fields.Float),
    'd_samples': fields.List(fields.Float),
    'nu_hist': fields.Raw,
    'd_hist': fields.Raw,
    'acceptance': fields.Raw,
    'provenance': fields.Raw,
})

defaults_parser = reqparse.RequestParser()
defaults_parser.add_argument('K', type=int, default=150, help='number of time points')
defaults_parser.add_argument('m', type=int, default=2, help='number of channels')


def sampler_config(overrides=None):
    '''Sampler settings of the application updated with ``overrides``'''
    settings = dict(current_app.config.get('SAMPLER') or {})
    settings.update(overrides or {})
    return SamplerConfig.from_mapping(settings)


@nsfit.route('/', endpoint='fits')
class Fits(Resource):

    @nsfit.marshal_with(fit_model)
    def get(self):
        '''List all fits'''
        return Store.list('fits')

    @api.secure
    @nsfit.expect(fit_model_post)
    @nsfit.marshal_with(fit_model, code=201)
    def post(self):
        '''Run one chain on the observations and store its posterior summary'''
        payload = api.payload
        config = sampler_config(payload.get('sampler'))
        values = as_observations(payload['observations'])
        names = payload.get('channel_names')
        if payload.get('standardize', True):
            dataset = standardize(values, names)
        else:
            dataset = as_dataset(values, names)
        record = run_chain(dataset.values, config)
        prov = provenance(record.config.seed, config=record.config.to_dict(),
                          channels=dataset.channel_names, standardized=payload.get('standardize', True))
        doc = summary_document(summarize(record), record.config, prov)
        doc['id'] = Store.save('fits', doc)
        return doc, 201


@nsfit.route('/defaults/', endpoint='fit_defaults')
class FitDefaults(Resource):

    @nsfit.expect(defaults_parser)
    def get(self):
        '''Sampler settings a fit would use on data of the given size'''
        args = defaults_parser.parse_args()
        return sampler_config().resolve(args['K'], args['m']).to_dict()


@nsfit.route('/<string:ident>/', endpoint='fit')
@nsfit.response(404, 'Fit not found')
@nsfit.param('ident', 'The fit identifier')
class OneFit(Resource):

    @nsfit.marshal_with(fit_model)
    def get(self, ident):
        '''Get a fit given its identifier'''
        res = Store.get('fits', ident)
        if not res:
            nsfit.abort(404, 'Fit not found')
        return res

    @api.secure
    @nsfit.response(410, 'Fit deleted')
    def delete(self, ident):
        '''Delete a fit'''
        if not Store.delete('fits', ident):
            nsfit.abort(404, 'Fit not found')
        return '', 410
