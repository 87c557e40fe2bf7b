"""g2-ein-geometry - split octonions, G2' and Ein^{2,3} geometry, the Fuchsian almost-complex
curve and a Newton solver for the cyclic G2' Hitchin equations."""

__version__ = "0.1.0"
