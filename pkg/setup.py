from setuptools import setup, find_packages

VERSION = '0.1.0'
DESCRIPTION = 'Belief checker'
LONG_DESCRIPTION = 'A model checker for multi-agent belief logic: time-stamped, action-stamped and indexical common belief'

# Setting up
setup(
    name="belief_checker",
    version=VERSION,
    author="sd",
    author_email="<sd@massa.net>",
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    packages=find_packages(exclude=["examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "tomlkit==0.11",
        "base58==2.1",
        "blake3==0.3.3",
        "varint==1.0.2",
        "lark==1.1.9",
    ],
    entry_points={
        "console_scripts": ["belief-checker=belief_checker.cli:main"],
    },
    keywords=['python', 'epistemic logic', 'model checking'],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3",
    ]
)
