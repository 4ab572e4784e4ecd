from setuptools import setup

setup(
    name='chris_osprey_core',
    version='0.1.0',
    description='Geometry, configuration and logging shared by the CHRIS Osprey packages',
    packages=['chris_osprey_core', 'chris_osprey_core.geometry', 'chris_osprey_core.utilities'],
    package_dir={'': 'src'},
    install_requires=['numpy', 'scipy', 'PyYAML'],
)
