"""Build script for the optional compiled sum-rate kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so the build degrades gracefully when Cython or a
C compiler is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pinchsim._sumrate",
                ["src/pinchsim/_sumrate.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
