"""Normalization of System F terms by extraction through bar recursion."""
