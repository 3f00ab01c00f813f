import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "gridloom._kernel",
                ["src/gridloom/_kernel.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off: the pure-Python kernel must produce
                # bit-identical floats, so FMA fusion is disabled.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # No Cython available: install pure-Python only; the kernel selector
    # falls back at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
