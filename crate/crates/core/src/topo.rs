//! Topological class lookup and merge-witness verification.
