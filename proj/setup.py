import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "synteo",
    sources=sorted(glob.glob("src/*.cpp")) + ["python/synteo_py.cpp"],
    include_dirs=["include", "vendor"],
    libraries=["png", "z"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
