"""Verification engine for higher Chow cycles on K3 surfaces built from plane quartics.

Modules: ``poly`` (exact algebra), ``numkit`` (quadrature, roots, finite
differences), ``quartic`` (bitangents), ``family`` (the family g_t and its
split conics), ``maps`` (psi, phi, tau), ``periods``, ``regulator``,
``lattice`` and ``cli``.
"""

__version__ = "0.1.0"
