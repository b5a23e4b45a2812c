import os

from setuptools import setup

ext_modules = []
if os.environ.get("PLACEFORGE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/placeforge/_kernels/_speedups.pyx"],
            language_level=3,
        )
    except ImportError:
        # No Cython: install pure-Python only, the fallback kernels take over.
        ext_modules = []

setup(ext_modules=ext_modules)
