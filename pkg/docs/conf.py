import os
import sys
sys.path.insert(0, os.path.abspath('..'))

project = 'pynormality'
author = 'pynormality developers'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
]

source_suffix = ['.rst']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
add_module_names = False # dont add entire path to function names.
autodoc_member_order = 'bysource'
html_theme = 'sphinx_rtd_theme'
