"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so a failed compile only warns.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "semdec._kernels._cykernels",
                sources=["src/semdec/_kernels/_cykernels.pyx"],
                language="c",
            )
        ],
        language_level=3,
    )
    for ext in ext_modules:
        ext.optional = True

setup(ext_modules=ext_modules)
