from setuptools import setup

setup(
    name='chris_osprey_sim',
    version='0.1.0',
    description='Synthetic scenes, ray-cast LiDAR, drifted odometry and platform model for CHRIS Osprey',
    packages=['chris_osprey_sim'],
    package_dir={'': 'src'},
    install_requires=['chris_osprey_core', 'numpy', 'trimesh', 'rtree', 'PyYAML'],
)
