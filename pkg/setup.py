"""Setup configuration for char2-quartics."""

from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="char2-quartics",
    version="1.0.0",
    author="char2-quartics Contributors",
    description="Exact verifications for nodes on non-supersingular quartic surfaces in characteristic 2",
    long_description=long_description,
    long_description_content_type="text/markdown",
    py_modules=[
        "binary_fields",
        "char2_weierstrass",
        "cli",
        "config",
        "dynkin",
        "fiber_combinatorics",
        "forms",
        "integer_linalg",
        "lattice_core",
        "main",
        "orchestrator",
        "quartic_family",
        "schemas",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "test": ["pytest>=7.4", "httpx>=0.25,<0.28"],
    },
    entry_points={
        "console_scripts": [
            "char2-quartics=cli:main",
        ],
    },
)
