"""Compact indexes for user trips over public transportation networks.
"""
