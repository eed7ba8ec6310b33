from setuptools import setup, find_packages

setup(
    name="cliffpoint",
    version="0.1.0",
    packages=find_packages(exclude=["tests*", "examples*"]),
    install_requires=[
        "pydantic>=2.0.0,<3.0.0",
        "mpmath>=1.3.0",
        "numpy>=1.24.0",
        "click>=8.2.0",
    ],
    entry_points={"console_scripts": ["cliffpoint=cliffpoint.cli:cli"]},
    description="High-precision cutoffs of the sinc sum/integral identity",
    python_requires=">=3.10",
)
