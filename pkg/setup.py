from setuptools import setup, find_packages

setup(
    name = 'pynormality',
    version = '0.1.0',
    license = "Apache",
    packages = find_packages(include = ['pynormality', 'pynormality.*']),
    include_package_data=True,
    python_requires='>=3.10',
    install_requires = [
        'numpy<2',
        'pandas<3',
        'scipy',
        'joblib',
        'tqdm',
        'pyparsing>=3.0',
        'mpmath',
        'gmpy2',
    ],
    extras_require = {
        'test': ['pytest', 'pytest-html', 'hypothesis'],
    },
    entry_points = {
        'console_scripts': ['pynormality = pynormality.cli:main'],
    },
    classifiers=[
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
    ],
)
