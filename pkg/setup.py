"""Builds the optional compiled scan-engine extension.

The package is fully functional without the extension (a pure-Python
executor is selected at import time, see ``plcattest.stlang.engine``);
set PLCATTEST_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PLCATTEST_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "plcattest.stlang._corevm",
                    ["src/plcattest/stlang/_corevm.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
