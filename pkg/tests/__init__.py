"""
Test suites for jcwitness
"""
