import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LEVELSTAT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "levelstat._kernels",
                    ["src/levelstat/_kernels.pyx"],
                    language="c++",
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
