from setuptools import find_packages, setup

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name = 'spinchain',
    packages = find_packages(exclude=["*.tests", "*.tests.*", "tests.*", "tests", "test", "test.*", "docs", "out", "dist"]),
    version = '0.2.0',
    license='Apache-2.0',
    description = 'Spinchain computes exact spectra, quantization-condition roots and dynamics of two excitations in XXZ qubit chains with a defect.',
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords = ['XXZ chain', 'spin chain', 'bound pair', 'magnon', 'localization', 'antiresonance', 'exact diagonalization', 'Bethe ansatz'],
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20'
    ],
    extras_require={
        "test": ["hypothesis>=6.0"],
    },
    entry_points={
        'console_scripts': ['spinchain=spinchain.cli:main'],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'Programming Language :: Python :: 3.8',
    ],
)
