"""Frobenius oracle: exact HK values by sparse rank over F_p."""
