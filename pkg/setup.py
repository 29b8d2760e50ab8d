from setuptools import setup, find_packages


required = [
    "numpy",
    "scipy",
    "pandas",
    "prettytable",
    "pybars3",
]

setup(
    name="rvfl.py",
    version="0.1.0",
    url="https://github.com/rvfl-py/rvfl.py",
    license="BSD",
    packages=find_packages(exclude=["examples", "examples.*"]),
    package_dir={"rvfl": "rvfl"},
    package_data={"rvfl.tests": ["golden/*.json"]},
    description="streaming RVFL classifiers that forget old samples on purpose",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    install_requires=required,
    entry_points={
        "console_scripts": ["rvfl=rvfl.cli:main"],
    },
    classifiers=[
        # Maturity
        #   3 - Alpha
        #   4 - Beta
        #   5 - Production/Stable
        'Development Status :: 3 - Alpha',
        # License
        'License :: OSI Approved :: BSD License',
        # Versions supported
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],

)
