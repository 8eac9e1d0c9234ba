# -*- coding: utf-8 -*-
from flask_restx import fields

from dfc_mvsv.app import api, Resource
from dfc_mvsv.distributions import fresh_seed, make_rng
from dfc_mvsv.model import ModelParams, simulate
from dfc_mvsv.results import provenance, truth_document
from dfc_mvsv.store import Store

nssim = api.namespace('simulations', description='synthetic trajectories of the model')


simulation_model_post = nssim.model('Simulation Model Post', {
    'nu': fields.Float(required=True, description='degrees of freedom, above m'),
    'd': fields.Float(required=True, description='persistence, in [-1, 1]'),
    'm': fields.Integer(default=2, description='number of channels'),
    'K': fields.Integer(required=True, description='number of time points'),
    'seed': fields.Integer(default=None),
})

simulation_model = nssim.inherit('Simulation Model', simulation_model_post, {
    'id': fields.String(description='the unique simulation identifier'),
    'pairs': fields.List(fields.List(fields.Integer)),
    'correlations': fields.List(fields.List(fields.Float),
                                description='true correlation of every pair at every time point'),
    'observations': fields.List(fields.List(fields.Float)),
    'provenance': fields.Raw,
})


@nssim.route('/', endpoint='simulations')
class Simulations(Resource):

    @nssim.marshal_with(simulation_model)
    def get(self):
        '''List all simulations'''
        return Store.list('simulations')

    @api.secure
    @nssim.expect(simulation_model_post)
    @nssim.marshal_with(simulation_model, code=201)
    def post(self):
        '''Simulate one realization of the latent chain and its observations'''
        payload = api.payload
        params = ModelParams(nu=payload['nu'], d=payload['d'], m=payload.get('m') or 2)
        seed = payload.get('seed')
        if seed is None:
            seed = fresh_seed()
        trajectory = simulate(make_rng(seed), params, payload['K'])
        config = {'nu': params.nu, 'd': params.d, 'm': params.m, 'K': payload['K'], 'seed': seed}
        doc = truth_document(trajectory, params, config, provenance(seed, config=config))
        doc['observations'] = trajectory.y_seq.tolist()
        doc['id'] = Store.save('simulations', doc)
        return doc, 201


@nssim.route('/<string:ident>/', endpoint='simulation')
@nssim.response(404, 'Simulation not found')
@nssim.param('ident', 'The simulation identifier')
class OneSimulation(Resource):

    @nssim.marshal_with(simulation_model)
    def get(self, ident):
        '''Get a simulation given its identifier'''
        res = Store.get('simulations', ident)
        if not res:
            nssim.abort(404, 'Simulation not found')
        return res

    @api.secure
    @nssim.response(410, 'Simulation deleted')
    def delete(self, ident):
        '''Delete a simulation'''
        if not Store.delete('simulations', ident):
            nssim.abort(404, 'Simulation not found')
        return '', 410
