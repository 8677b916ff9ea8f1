# Numerical and I/O helpers shared across src
