from setuptools import setup, find_packages

common_setup_kwargs = {
    "version": "0.1.0",
    "name": "ghzecp",
    "description": "Nonlocal entanglement concentration for GHZ-class states",
    "long_description": open("README.md", encoding="utf-8").read(),
    "long_description_content_type": "text/markdown",
    "keywords": ["entanglement-concentration", "ghz-states", "quantum-simulation"],
    "platforms": ["linux"],
    "classifiers": [
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Physics",
    ],
}

with open("requirements.txt") as f:
    requirements = f.read().splitlines()

setup(
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=requirements,
    python_requires=">=3.8.0",
    entry_points={"console_scripts": ["ghzecp=ghzecp.cli:run"]},
    **common_setup_kwargs,
)
