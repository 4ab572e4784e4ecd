from setuptools import setup

setup(
    name='chris_osprey_mission',
    version='0.1.0',
    description='Autonomous mapping mission runner, mission log and map evaluation for the Osprey simulator',
    packages=['chris_osprey_mission'],
    package_dir={'': 'src'},
    scripts=['bin/osprey_mission'],
    install_requires=['chris_osprey_core', 'chris_osprey_sim', 'chris_osprey_slam', 'chris_osprey_planning',
                      'numpy', 'scipy', 'PyYAML'],
)
