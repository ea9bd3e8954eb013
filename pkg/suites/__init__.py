"""surfacekit property suites, one module per result family."""
