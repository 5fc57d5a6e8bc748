"""Build script for the compiled kernel extension.

The extension is optional: if compilation fails (no C toolchain, exotic
platform) the package installs anyway and growthlab falls back to the pure
numpy kernels at import time. Set GROWTHLAB_NO_EXT=1 to skip the build.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("GROWTHLAB_NO_EXT"):
        return []
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "growthlab._kernels",
        ["src/growthlab/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extensions())
