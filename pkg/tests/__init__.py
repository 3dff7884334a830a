"""
hq Test Suite

Unit tests for all hq modules.
"""
