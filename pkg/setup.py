"""Build script for the optional compiled scan kernel.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile must not abort installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "projorder.kernels._fast",
                ["src/projorder/kernels/_fast.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
