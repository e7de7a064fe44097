"""Build script for the optional compiled kernel extension.

The package works without the extension; pure-numpy fallbacks live in
ilcdress.kernels_py.  A failed extension build degrades to a warning.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "ilcdress._speedups",
        sources=["src/ilcdress/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)
