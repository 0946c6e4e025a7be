"""Multi-string BWT, XBW and string-order optimisation."""
