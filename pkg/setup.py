"""Build the optional compiled matcher kernel.

The package is fully functional without it: gramvar.grammar falls back to
the pure-Python scanner in gramvar._scan_py when the extension is missing.
Set GRAMVAR_NO_EXT=1 to skip the build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Try to build the extension; warn and carry on if the toolchain fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: could not build C extension ({exc}); "
                  "the pure-Python matcher will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "the pure-Python matcher will be used")


def extensions():
    if os.environ.get("GRAMVAR_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("gramvar._scan", ["src/gramvar/_scan.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
