"""
tensorginv - generalized inverses of tensors under the Einstein product
"""
from setuptools import setup, find_packages

setup(
    name="tensorginv",
    version="0.1.0",
    description="Tensor generalized and composite inverses, characterizations and multilinear solvers",
    author="Chronai Team",
    author_email="team@chronai.ai",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "pydantic>=2.4.2",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.3",
            "pytest-asyncio>=0.21.1",
            "hypothesis>=6.80",
            "pylint>=3.0.2",
            "mypy>=1.7.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "ginv=tensorginv.cli_io:run",
        ],
    },
    python_requires=">=3.9",
)
