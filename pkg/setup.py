"""Build script: compiles the optional speedup extension.

The package is fully functional without the compiled extension; the
pure-Python kernels in ``triagekit._kernels.pure`` are selected at import
time when the extension is missing. Set TRIAGEKIT_NO_EXT=1 to skip the
build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TRIAGEKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "triagekit._kernels._speedups",
                    ["src/triagekit/_kernels/_speedups.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
