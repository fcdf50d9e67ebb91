"""
Package initialization for hyperharmonics source code.
"""

__version__ = "1.0.0"
__description__ = "N-dimensional hyperspherical and hypercylindrical harmonics with residual verification"
