# Sphinx configuration for the spinchain documentation.

import os

# -- Project information -----------------------------------------------------

project = 'spinchain'
copyright = '2026, spinchain contributors'
author = 'spinchain contributors'

# The full version, including alpha/beta/rc tags
release = '0.2.0'

master_doc = 'index'
pygments_style = 'sphinx'


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.viewcode',
    'sphinx.ext.coverage',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx_copybutton',
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}

templates_path = ['_templates']

exclude_patterns = [
    'api/index.rst',
]

rst_prolog = """
.. |default| raw:: html

    <div class="default-value-section"><span class="default-value-label">Default:</span></div>
"""


# -- Options for HTML output -------------------------------------------------

extensions.append("sphinx_rtd_theme")
html_theme = "sphinx_rtd_theme"


# -- AutoAPI ----------------------------------------------------------------

extensions.append('autoapi.extension')
autoapi_type = 'python'
autoapi_root = 'api'
autoapi_dirs = ['../../spinchain']
autoapi_ignore = [
    '*__main__.py',
    '*misc/logs.py',
]
autoapi_options = ['members', 'undoc-members', 'show-inheritance', 'show-module-summary']
autoapi_python_class_content = 'both'
autoapi_keep_files = bool(os.getenv('READTHEDOCS'))

SKIP_FULL = {'spinchain.link.Link._run', 'spinchain.link.Link._guarded', 'spinchain.outlet.metadata'}
SKIP_SUFFIXES = {"_LOGGER"}

def maybe_skip_member(app, what, name, obj, skip, options):
    if any(s in name for s in SKIP_SUFFIXES):
        return True
    return name in SKIP_FULL or skip


def setup(app):
    app.connect("autoapi-skip-member", maybe_skip_member)
