"""
Maintenance scripts for tensorginv
"""
