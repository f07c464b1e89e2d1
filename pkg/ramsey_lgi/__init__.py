"""Sequential Ramsey measurements on a qubit-coupled oscillator and Leggett-Garg tests."""

__version__ = "0.1.0"
