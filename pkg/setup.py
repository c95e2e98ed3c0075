import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("STRATAKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "stratakit._speed",
                    ["src/stratakit/_speed.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython: install works anyway, the pure-python kernels take over
        ext_modules = []

setup(ext_modules=ext_modules)
