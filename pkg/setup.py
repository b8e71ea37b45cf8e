"""Build script. The compiled search kernel is optional: if Cython or a C
compiler is missing the package installs anyway and falls back to the pure
Python kernel at import time."""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    # A failed extension build must not fail the install.
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: skipping compiled kernel ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available, no compiled kernel", file=sys.stderr)
        return []
    return cythonize(
        [Extension("znrank._kernel", ["src/znrank/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
