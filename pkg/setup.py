"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-numpy fallback is selected at
import time); set CAUCHYMIMO_PURE=1 to skip compilation explicitly.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("CAUCHYMIMO_PURE"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cauchymimo._kernels",
        [os.path.join("src", "cauchymimo", "_kernels.pyx")],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=_extensions())
