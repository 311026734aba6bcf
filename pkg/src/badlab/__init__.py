"""Exact continued-fraction and Ostrowski machinery, constrained digit
spaces, Kaufman-type product measures on badly-approximable pairs, and the
counting experiments built on top of them.

Layout:

* :mod:`badlab.contfrac`   -- exact convergents, approximation errors, identities
* :mod:`badlab.ostrowski`  -- Ostrowski numeration of integers and reals
* :mod:`badlab.digitspace` -- the R-periodically constrained digit sets and counts
* :mod:`badlab.exponents`  -- the exponent equations over capped words
* :mod:`badlab.measure`    -- block measures, conditioning, cylinders, sampling
* :mod:`badlab.fourier`    -- Monte-Carlo transform estimates and ball-mass scans
* :mod:`badlab.windows`    -- hat-window Fourier coefficients and bounds
* :mod:`badlab.lacunary`   -- lacunary hit counting against its expected mass
* :mod:`badlab.littlewood` -- multiplicative (two-form) counting experiment
* :mod:`badlab.oscint`     -- oscillatory-integral bound checks
* :mod:`badlab.cli`        -- command-line front end
"""

__version__ = "0.1.0"
