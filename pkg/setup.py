"""Build script: compiles the optional Groebner kernel extension.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so a failed compile downgrades to
a warning instead of aborting the install.
"""

import sys

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/laxforge/groebner/_ckernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"laxforge: skipping C kernel build ({exc!r}); "
          "pure-Python kernel will be used", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
