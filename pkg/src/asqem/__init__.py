"""Active-space quantum embedding in HF and range-separated DFT environments."""

__version__ = "0.1.0"
