import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CHROMATOPE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "chromatope._kernels",
                    ["src/chromatope/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no contraction into FMA: the compiled and numpy paths must agree bit for bit
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
