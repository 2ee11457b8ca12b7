//! Nonabelian corrections at the finite level (implementation in progress).
