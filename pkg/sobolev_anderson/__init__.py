# Anderson acceleration with Sobolev-norm weighted least squares
__version__ = "1.0.0"
