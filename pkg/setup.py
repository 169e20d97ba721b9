"""Build hook for the optional compiled Gillespie loop.

If Cython or a compiler is missing the package installs without it and
falls back to the pure-Python loop at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("blockising._gillespie", ["src/blockising/_gillespie.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"building without the compiled Gillespie loop: {exc}")

setup(ext_modules=ext_modules)
