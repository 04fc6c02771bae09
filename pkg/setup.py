from setuptools import find_packages, setup

setup(
    name='HigherSpin',
    version='0.1.dev0',
    description='Exact and numerical verification of higher spin Dirac operator identities and kernels.',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=['graphviz', 'numpy', 'scipy', 'sympy'],
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['hsl = HigherSpin.main:main']},
)
