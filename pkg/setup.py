"""Build script for the optional compiled kernel extension.

The package works without the extension: humeval.kernels falls back to the
numpy implementation when humeval._ckernels is absent.  Set HUMEVAL_PURE=1
to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HUMEVAL_PURE") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "humeval._ckernels",
                    sources=["src/humeval/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
