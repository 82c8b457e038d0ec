from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the kernel falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("depthlogic._ckernel", ["src/depthlogic/_ckernel.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
