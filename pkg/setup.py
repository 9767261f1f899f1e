from setuptools import setup, find_packages

setup(
    name="leak_analytics",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    package_data={
        "leak_analytics.appmodel": ["default_catalog.txt"],
        "leak_analytics.benchmark": ["corpus/*.aml", "corpus/manifest.yaml", "corpus/labels.tsv"],
    },
    install_requires=[
        "pandas",
        "numpy",
        "scikit-learn",
        "networkx",
        "pyyaml",
        "tqdm",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": [
            "leaksem = leak_analytics.cli:main",
        ],
    },
)
