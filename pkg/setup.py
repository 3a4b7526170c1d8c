from setuptools import setup

setup(
        name='arcflex',
        version='0.1',
        description='Classic and arclength-based higher-order rigidity of '
                    'bar-and-joint frameworks',
        license='MIT',
        packages=[
            'arcflex'
        ],
        install_requires=[
            'numpy',
            'scipy',
            'jax',
            'networkx',
            'tqdm'
        ],
        entry_points={
            'console_scripts': [
                'arcflex = arcflex.cli:main'
            ]
        }
)
