"""Build hook for the optional compiled kernels.

The package works without a compiler: when the extension cannot be built,
``semifree.kernels`` falls back to the pure-Python implementation.
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: install the pure-Python package only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("semifree._ckernels", ["src/semifree/_ckernels.pyx"], optional=True)],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )

setup(ext_modules=ext_modules)
