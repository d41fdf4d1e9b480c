# -*- coding: utf-8 -*-
#
# tdsolve documentation build configuration file

import os

on_rtd = os.environ.get("READTHEDOCS") == 'True'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosummary',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Tensor Decomposition Solvers (tdsolve)'
copyright = u'2026, tdsolve developers'
author = u'tdsolve developers'

version = u'v1.0.0'
release = u'v1.0.0'

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

html_theme = 'default' if on_rtd else 'alabaster'
html_show_sourcelink = not on_rtd
htmlhelp_basename = 'tdsolvedoc'

latex_elements = {}
latex_documents = [
    (master_doc, 'tdsolve.tex', project, author, 'manual'),
]
latex_toplevel_sectioning = 'part'

man_pages = [(master_doc, 'tdsolve', project, [author], 1)]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'pandas': ('https://pandas.pydata.org/docs', None),
}
