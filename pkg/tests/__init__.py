"""
Test suite for tensorginv
"""
