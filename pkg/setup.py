import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

openmp = [] if os.environ.get("QSC_NO_OPENMP") else ["-fopenmp"]

ext = Extension(
    "qsc._kernels",
    ["src/qsc/_kernels.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"] + openmp,
    extra_link_args=openmp,
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(ext_modules=cythonize(ext, compiler_directives={"language_level": "3"}))
