"""Fuzzy systems: membership functions, TSK inference, ANFIS and rule partitions"""
