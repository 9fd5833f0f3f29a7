"""Build script: compiles the optional fast core.

The package is fully functional without the extension (a pure-Python core is
selected at import time), so a failed compile only costs speed.  Set
MIRRORLAB_NO_EXT=1 to skip the extension build entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow extension build failures; the pure-Python core still works."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: fast core not built ({exc}); "
                  "falling back to the pure-Python core", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to compile {ext.name} ({exc}); "
                  "falling back to the pure-Python core", file=sys.stderr)


ext_modules = []
if not os.environ.get("MIRRORLAB_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mirrorlab._core._fastcore",
                    ["src/mirrorlab/_core/_fastcore.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        print("warning: Cython not available; building without the fast core",
              file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
