"""Build script for the compiled coefficient kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), but the compiled core is what makes million-entry coefficient
tables take seconds instead of tens of minutes.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "cuspsums._tau_core",
        ["src/cuspsums/_tau_core.pyx"],
        extra_compile_args=["-O2"],
    )
]

if cythonize is not None:
    ext_modules = cythonize(extensions, language_level=3)
else:
    ext_modules = []

setup(ext_modules=ext_modules)
