# -*- coding: utf-8 -*-
#
# TongueMotion documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import sys, os

# the packages are documented from the source tree
sys.path.insert(0, os.path.abspath(os.path.join('..', '..', '..')))

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx']

templates_path = ['.templates']
source_suffix = '.txt'
master_doc = 'index'

project = u'TongueMotion'
copyright = u'2026, The Authors of TongueMotion'

packageversion = __import__('tonguemotion').get_version()
# The short X.Y version.
version = '.'.join(packageversion.split('.')[:2])
# The full version, including alpha/beta/rc tags.
release = packageversion

today_fmt = '%B %d, %Y'
exclude_trees = []
pygments_style = 'sphinx'

html_theme = 'sphinxdoc'
html_last_updated_fmt = '%b %d, %Y'
htmlhelp_basename = 'TongueMotiondoc'

latex_documents = [
  ('index', 'TongueMotion.tex', u'TongueMotion Documentation',
   u'The Authors of TongueMotion', 'manual'),
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'scipy': ('https://docs.scipy.org/doc/scipy/', None),
                       'pandas': ('https://pandas.pydata.org/docs/', None)}

autoclass_content = "both"
