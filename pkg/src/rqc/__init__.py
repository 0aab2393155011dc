"""Resilient quantized consensus with multi-hop relays."""

__version__ = "0.1.0"
