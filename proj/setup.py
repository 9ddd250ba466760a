from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "revorder._core",
    sources=[
        "python/module.cpp",
        "src/digits.cpp",
        "src/csid.cpp",
        "src/traces.cpp",
        "src/parse.cpp",
        "src/verify.cpp",
        "src/dataset.cpp",
        "src/tokens.cpp",
        "src/score.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
