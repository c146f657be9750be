import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("WEYLALG_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("weylalg._kernels", ["src/weylalg/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
