"""Build script for the optional compiled scan kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed, not functionality.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "pivotalign._kernels._scan",
                ["src/pivotalign/_kernels/_scan.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
