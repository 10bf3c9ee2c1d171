"""Config, numerics helpers and report writers."""
