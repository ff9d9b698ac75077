"""Build script for the optional compiled kernels.

`pip install -e . --no-build-isolation` compiles them when Cython and numpy
are importable; otherwise the package falls back to the pure-Python kernels
at import time.  `python setup.py build_ext --inplace` forces an in-tree
build.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "leafcam._kernels._cykernels",
                ["src/leafcam/_kernels/_cykernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
