"""Builds the optional compiled statevector kernels.

Cython plus a C compiler produce asqem._kernels._pauli_cy; without them the
package installs fine and falls back to the NumPy kernels at import.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "asqem._kernels._pauli_cy",
                ["src/asqem/_kernels/_pauli_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
