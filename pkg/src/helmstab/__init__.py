"""helmstab: a numerical laboratory for wavenumber-explicit stability of
outgoing Helmholtz waves.

Subpackages/modules:

* ``specfun``     -- from-scratch real-order Bessel/Hankel evaluation and the
                     three-regime magnitude envelope with empirical calibration;
* ``modal``       -- mode-coefficient representation of outgoing waves, far/near
                     field norms, synthesis and projection;
* ``far2near``    -- spectral-cutoff reconstruction of near fields from noisy
                     far fields with certified error bounds in four regimes;
* ``direct2d``    -- Nystrom combined-field solver for 2D sound-soft obstacles
                     (the ground-truth generator), with validation identities;
* ``geometry``    -- star-shaped obstacle class, Hausdorff distance, packing
                     constructions, convex hulls, visibility measure;
* ``instability`` -- wavenumber-explicit instability radii and eps-net counts
                     for the inverse obstacle problem;
* ``experiments`` -- deterministic sweep/calibration harness;
* ``cli``         -- the ``helmstab`` command-line interface.
"""

__version__ = "0.1.0"

__all__ = [
    "specfun",
    "modal",
    "far2near",
    "direct2d",
    "geometry",
    "instability",
    "experiments",
    "cli",
]
