from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    # the package falls back to its numpy kernels when the extension is absent
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "fockcm._core._kernels",
                ["src/fockcm/_core/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
