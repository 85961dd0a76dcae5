import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the
# pure-Python implementations when the extension is absent. Set
# ACTANTNET_NO_EXT=1 to skip compilation entirely.
ext_modules = []
if os.environ.get("ACTANTNET_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("actantnet._speedups", ["src/actantnet/_speedups.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
