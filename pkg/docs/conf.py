# Sphinx configuration for the betacharpoly API reference.
import os
import sys

sys.path.insert(0, os.path.abspath(".."))
sys.path.insert(0, os.path.abspath("."))

from betacharpoly import __version__  # noqa: E402

project = "betacharpoly"
copyright = "2026, betacharpoly developers"
author = "betacharpoly developers"
version = __version__
release = version

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.coverage",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

autosummary_generate = True
autodoc_member_order = "bysource"
coverage_show_missing_items = True

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

html_theme = "alabaster"
html_theme_options = {
    "page_width": "90%",
    "logo_name": True,
    "logo_text_align": "center",
}

add_module_names = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "mpmath": ("https://mpmath.org/doc/current/", None),
}
