"""Build script: compiles the optional row-reduction speedup extension.

The extension is strictly optional; if compilation fails the install
proceeds and the package falls back to the pure-Python kernel.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            sys.stderr.write(f"warning: skipping speedup extension: {exc}\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write(f"warning: failed to build {ext.name}: {exc}\n")


ext_modules = []
if os.environ.get("DIAGCAT_NO_SPEEDUPS") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/diagcat/ratlin/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        sys.stderr.write("warning: Cython not available, pure-Python kernel only\n")

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
