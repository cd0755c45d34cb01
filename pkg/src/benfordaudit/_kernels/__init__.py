"""Interchangeable kernel implementations (numpy fallback, numba jit)."""
