"""Build the optional compiled kernel extension.

The package works without it (a pure numpy backend is selected at import
time), but the compiled kernels are considerably faster for the advection
sweeps and the Helmholtz stencil.
"""

import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "atmoslab.kernels._core",
        ["src/atmoslab/kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
)
