"""Build script: compiles the optional kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so the build is marked optional and install proceeds even when
no C toolchain is available.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "mstc._kernels._core",
                sources=["src/mstc/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
