"""Build script: compiles the SMO solver extension when Cython and a C
compiler are available.  The package works without it (pure-Python solver
is selected at import time), so a failed extension build is non-fatal.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the extension instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping extension build ({exc}); "
                  "pure-Python solver will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "pure-Python solver will be used")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "tsxplain._smo_cy",
                ["src/tsxplain/_smo_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
