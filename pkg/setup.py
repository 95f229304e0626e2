import platform

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# hardware popcount for the double description adjacency filter
flags = ["-O3"] + (["-mpopcnt"] if platform.machine() in ("x86_64", "AMD64") else [])

exts = [
    Extension(f"causalpoly._kernels.{name}", [f"src/causalpoly/_kernels/{name}.pyx"],
              include_dirs=[numpy.get_include()], extra_compile_args=flags,
              define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])
    for name in ("_enum", "_dd", "_simplex")
]

setup(ext_modules=cythonize(exts, language_level=3))
