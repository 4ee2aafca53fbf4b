"""Build script: compiles the optional matching kernel when Cython and a C
compiler are present; the package falls back to the pure-Python solver
otherwise, so the build must never hard-fail on a missing toolchain."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if os.environ.get("QUADKIT_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("quadkit: Cython not available, skipping compiled kernel",
              file=sys.stderr)
        return []
    ext = Extension("quadkit.matching._blossom_cy",
                    ["src/quadkit/matching/_blossom_cy.pyx"])
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Swallow compiler failures; the pure-Python fallback covers them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any toolchain failure
            print(f"quadkit: compiled kernel skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"quadkit: building {ext.name} failed ({exc}); "
                  "falling back to pure Python", file=sys.stderr)


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
