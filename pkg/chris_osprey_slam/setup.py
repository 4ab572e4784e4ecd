from setuptools import setup

setup(
    name='chris_osprey_slam',
    version='0.1.0',
    description='Scan-to-submap ICP, pose-graph SLAM and ScanContext relocalization for CHRIS Osprey',
    packages=['chris_osprey_slam'],
    package_dir={'': 'src'},
    install_requires=['chris_osprey_core', 'numpy', 'scipy', 'graphviz', 'PyYAML'],
)
