"""Build script: compiles the optional fast kernel when Cython is available.

The package is fully functional without the extension; klvwb.laurent falls
back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("klvwb._speedups", ["src/klvwb/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
