"""Build script: compiles the Cython kernel extension when the toolchain is
available, otherwise installs with the pure-NumPy fallback only."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("VLAMAP_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        compile_args = ["-O3"]
        link_args = []
        # opt-in: on small shared boxes the threading overhead loses
        if os.environ.get("VLAMAP_OPENMP"):
            compile_args.append("-fopenmp")
            link_args.append("-fopenmp")
        ext = Extension(
            "vlamap._kernels",
            ["src/vlamap/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=compile_args,
            extra_link_args=link_args,
        )
        ext_modules = cythonize([ext], language_level=3)
    except ImportError:
        pass

setup(ext_modules=ext_modules)
