# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Shared geometry, configuration and logging for the CHRIS Osprey packages
"""

__version__ = '0.1.0'
