//! Abelian classification engine (implementation in progress).
