"""Build hook: compiles the optional accelerator extension.

The package is pure Python plus one optional Cython extension holding the
hot numerical kernels. If the extension cannot be built (no compiler, no
Cython), installation proceeds and the package falls back to the NumPy
implementations of the same kernels at import time.
"""
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible; never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: accelerator extension not built ({exc}); "
              "falling back to the NumPy kernels", file=sys.stderr)


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"warning: {exc}; skipping accelerator extension", file=sys.stderr)
        return []
    from setuptools import Extension

    ext = Extension(
        "diamondqc._kernels",
        sources=["src/diamondqc/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
