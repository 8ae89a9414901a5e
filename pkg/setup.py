"""Build script for the optional compiled scan kernel.

The package is fully functional without the extension; contragrid._speed
falls back to a vectorized numpy implementation when the compiled module
is absent.  Set CONTRAGRID_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CONTRAGRID_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("contragrid._ckcore", ["src/contragrid/_ckcore.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

# A failed compile must not break installation.
for ext in ext_modules:
    ext.optional = True

setup(ext_modules=ext_modules)
