"""Builds the optional compiled box-QP kernel.

The package works without it: icls.solver falls back to the pure numpy
kernel when the extension is missing. Cython and a C compiler are only
needed to build the fast path.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "icls._boxqp_c",
                ["src/icls/_boxqp_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
