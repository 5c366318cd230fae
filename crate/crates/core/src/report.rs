//! JSON report documents.
