from setuptools import setup, find_packages

# To use a consistent encoding
from codecs import open
import os


here = os.path.abspath(os.path.dirname(__file__))

# Get the long description from the README file
with open(os.path.join(here, "README.md")) as f:
    long_description = f.read()

# Get requirements
if os.environ.get("EPRSIM_INSTALL_MODE", None) == "development":
    req_file = "requirements-dev.txt"
    print("installing eprsim on development mode")
else:
    req_file = "requirements.txt"

with open(os.path.join(here, req_file)) as f:
    install_requires = f.read().strip().split("\n")

setup(
    name="eprsim",
    version="0.1.0",
    description="Monte Carlo and closed-form simulations of local-realistic EPR-B experiments",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords="bell-inequality chsh epr monte-carlo coincidence-counting",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"eprsim": ["schemas/*.json"]},
    include_package_data=True,
    python_requires=">=3.8",
    install_requires=install_requires,
    entry_points={
        "console_scripts": ["eprsim=eprsim.command_line:main"],
    },
)
