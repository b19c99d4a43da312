"""Build script for the optional compiled kernels.

The package works without them: ``wall_limits.kernels`` falls back to the
pure-Python implementations when the extension cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("WALL_LIMITS_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "wall_limits._kernels",
                    ["src/wall_limits/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
