#!/usr/bin/env python3

import sys, os

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here. If the directory is relative to the
# documentation root, use os.path.abspath to make it absolute, like shown here.
sys.path.insert(0, os.path.abspath('..'))

from tlmembed import __version__, __version_tuple__

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode',
              'sphinx.ext.mathjax']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

# General information about the project.
project = 'tlmembed'
copyright = '2026, the tlmembed authors'

# The short X.Y version.
version = '.'.join(map(str, __version_tuple__[:2]))
# The full version, including alpha/beta/rc tags.
release = __version__

pygments_style = 'sphinx'

autodoc_typehints = 'description'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'alabaster'

html_theme_options = {
    'description': 'Lindblad embeddings of time-local master equations',
    'description_font_style': 'italic',
    'github_button': False,
    'sidebar_width': '260px',
}

html_sidebars = {
    '**': ['about.html', 'navigation.html', 'sourcelink.html', 'searchbox.html']
}

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
  ('index', 'tlmembed.tex', 'tlmembed Documentation',
   'the tlmembed authors', 'manual'),
]
