from setuptools import Extension, setup

# The compiled row-reduction kernel is optional: the package falls back to the
# pure Python twin in gderive._kernels.rref_py when the extension is absent.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gderive._kernels._rref_c",
                ["src/gderive/_kernels/_rref_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
