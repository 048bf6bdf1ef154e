# Sphinx configuration for the EzyTAMP documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

from datetime import datetime  # noqa: E402

import ezytamp as ez  # noqa: E402

# -- Project information -----------------------------------------------------

project = "EzyTAMP"
author = "ezytamp developers"
copyright = f"2026-{datetime.now().year}, ezytamp developers"  # noqa: A001
release = ez.__version__

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autosummary",
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
]

autosummary_generate = True

# docstrings are numpy style with typed parameters
napoleon_google_docstring = False
napoleon_use_rtype = False

autoclass_content = "class"
autodoc_typehints = "description"
autodoc_default_options = {
    "member-order": "bysource",
    "undoc-members": True,
    "exclude-members": "__init__",
}

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
}

templates_path = ["_templates"]
exclude_patterns = []

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_book_theme"
html_title = f"{project} {release}"
html_copy_source = True
html_static_path = []

html_theme_options = {
    "path_to_docs": "docs",
    "use_download_button": True,
    "use_sidenotes": True,
    "use_fullscreen_button": False,
    "show_navbar_depth": 2,
    "show_toc_level": 2,
}
