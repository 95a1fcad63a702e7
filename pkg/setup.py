"""Build hook: compile the difference-kernel extension when Cython and a C
compiler are available, otherwise install pure Python only.  The package
selects its backend at import time, so a fallback install is fully
functional, just slower on the hot difference loops."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("DTMOD_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/dtmod/_kernels.pyx"],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )
        for ext in ext_modules:
            ext.include_dirs.append(numpy.get_include())
            ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
