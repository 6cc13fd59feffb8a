"""Build script: compiles the optional kernel extension when Cython is present.

A plain install without Cython (or without a C compiler) still produces a
fully functional package; the kernels module selects the numpy fallbacks at
import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/cutdecomp/_kernels/_ckernels.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
