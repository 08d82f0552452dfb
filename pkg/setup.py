"""Build script: compiles the tridiagonal kernel extension.

The package works without the extension (a pure-Python twin is selected at
import time), so a failed compile only costs speed, not correctness.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "kwcflow._kernels._ext",
        ["src/kwcflow/_kernels/_ext.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
