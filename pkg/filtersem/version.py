"""Version."""
import os
from importlib import metadata

import tomlkit


try:
    __VERSION__ = metadata.version("filtersem")
except metadata.PackageNotFoundError:
    # fallback if project is not installed
    pyproject_path = os.path.join(
        os.path.dirname(__file__),
        "..",
        "pyproject.toml",
    )
    with open(pyproject_path) as pyproject_file:
        pyproject = pyproject_file.read()
    __VERSION__ = "Unknown"
    tool = tomlkit.parse(pyproject).get("tool")
    if tool:
        poetry = tool.get("poetry")
        if poetry:
            __VERSION__ = str(poetry.get("version", "Unknown"))
