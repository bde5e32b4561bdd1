"""Amplitude-estimation least-squares quantum SVM on a statevector simulator."""

__version__ = "0.1.0"
