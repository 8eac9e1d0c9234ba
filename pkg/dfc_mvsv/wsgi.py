# -*- coding: utf-8 -*-
'''
WSGI entry point, settings taken from $DFC_MVSV_SETTINGS.

The development server is started with ``dfc-mvsv serve``.
'''
from dfc_mvsv import create_app

application = create_app()
