from setuptools import setup

setup(
    name='chris_osprey_planning',
    version='0.1.0',
    description='SEE next-best-view planning, occupancy grid, informed path planning and velocity control',
    packages=['chris_osprey_planning'],
    package_dir={'': 'src'},
    install_requires=['chris_osprey_core', 'chris_osprey_sim', 'numpy', 'scipy', 'PyYAML'],
)
