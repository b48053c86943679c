"""Self-supervised qMRI parameter estimation with a stable Rician likelihood loss."""

__version__ = "0.1.0"
