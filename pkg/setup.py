"""Builds the optional compiled kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("KTRES_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("ktres._kernels", ["src/ktres/_kernels.pyx"], extra_compile_args=["-O2"], optional=True)],
            language_level=3,
            quiet=True,
        )

setup(ext_modules=ext_modules)
