from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "cliqueprune._ckern",
                ["src/cliqueprune/_ckern.pyx"],
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
else:
    # No Cython at build time: install the pure-Python fallback only.
    ext_modules = []

setup(ext_modules=ext_modules)
