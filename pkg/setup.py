"""Build script for the compiled typicality kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the Monte Carlo decoders faster.
"""
import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext_modules = [
    Extension(
        "rbcbounds._kernels._typicality",
        sources=["src/rbcbounds/_kernels/_typicality.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level=3))
