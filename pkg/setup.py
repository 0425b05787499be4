"""Build script: compiles the optional search kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time); set MAGTILE_NO_EXT=1 to skip the build explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MAGTILE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "magtile._kernel",
                    ["src/magtile/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
