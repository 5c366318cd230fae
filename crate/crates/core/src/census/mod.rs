//! Singularity censuses and printed-identity verification.
