"""Build script for the optional compiled Volterra-convolution core.

The package works without the extension (a NumPy fallback is selected at
import time); this just makes the memory-integral hot loop faster.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qplife._volterra",
                ["src/qplife/_volterra.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
