"""Circuit to Max-Cut gadget compilation and biaser composition."""
