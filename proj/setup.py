"""CMake-driven build of the indicate._core extension.

scikit-build-core would be the lighter option, but this setup stays on
plain setuptools so the package builds anywhere CMake and a C++20
compiler are present.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        import pybind11

        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        cmake = shutil.which("cmake")
        if cmake is None:
            raise RuntimeError("cmake is required to build indicate._core")

        subprocess.check_call(
            [
                cmake,
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DINDICATE_BUILD_TESTS=OFF",
                "-DINDICATE_BUILD_CLI=OFF",
                "-DINDICATE_BUILD_PYTHON=ON",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ]
        )
        subprocess.check_call([cmake, "--build", str(build_dir), "--target", "_core", "-j"])

        staged = build_dir / "python" / "indicate"
        target = out_dir / "indicate"
        target.mkdir(parents=True, exist_ok=True)
        for item in staged.iterdir():
            if item.is_file():
                shutil.copy2(item, target / item.name)


setup(
    packages=["indicate"],
    package_dir={"indicate": "python/indicate"},
    ext_modules=[CMakeExtension("indicate._core")],
    cmdclass={"build_ext": CMakeBuild},
)
