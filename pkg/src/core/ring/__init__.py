"""Ring core: monomials, trinomials and F_p arithmetic."""
