# Sphinx configuration for the biasedcube documentation.
import os

_package_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))),
                            'biasedcube')


def _read_version():
    with open(os.path.join(_package_dir, 'VERSION')) as version_file:
        return version_file.read().strip()


extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
]

source_suffix = '.rst'
master_doc = 'index'

project = 'biasedcube'
author = 'the biasedcube developers'
copyright = '2026, ' + author

release = _read_version()
# X.Y
version = '.'.join(release.split('.')[:2])

exclude_patterns = ['_build']
pygments_style = 'sphinx'
autodoc_member_order = 'bysource'

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'biasedcubedoc'

man_pages = [
    (master_doc, 'biased-cube', 'biasedcube Documentation', [author], 1)
]
