from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "powsat._engine._speedups",
        ["src/powsat/_engine/_speedups.pyx"],
        extra_compile_args=["-O3"],
    ),
]

setup(ext_modules=cythonize(extensions, language_level="3"))
