"""Learners package for PatchLearn"""
