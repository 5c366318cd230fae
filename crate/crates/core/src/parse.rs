//! Expression parser for map inputs.
