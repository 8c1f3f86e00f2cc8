"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it makes the exhaustive census, the Monte
Carlo matching classifier and the brute-force trace-expansion counter roughly
an order of magnitude faster.  See benchmarks/bench_backends.py.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; runtime falls back to _kernels_py
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "chordspec._ckernels",
                ["src/chordspec/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
