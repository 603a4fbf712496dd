"""Independent reference computations used to check the closed forms.

* ``quadrature``: phase-space integration of a Gaussian-sum Wigner function.
* ``fock``: truncated density matrices with Kraus-operator photon subtraction.
* ``gaussian``: photon subtraction through covariance-matrix Schur complements.
"""
