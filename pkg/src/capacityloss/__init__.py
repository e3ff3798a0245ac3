"""Capacity loss of bounded-support signal constellations at high SNR."""
from .bounds import BoundPoint, cs_upper_bound, k_eps_sigma_upper, loss_lower_bound, loss_lower_bound_sweep
from .constellations import Constellation, discretize_fstar, qam
from .errors import (CapacityLossError, EmptyIntersection, InvalidOrder, InvalidRegion, NoBracket,
                     QuadratureFailure, UnsupportedNoise)
from .maxent import MaxEntSolution, capacity_loss, fstar_density, nats_to_db, solve_lambda
from .mi import (GhConfig, RatePoint, gauss_hermite_mi, gaussian_capacity, monte_carlo_mi,
                 qam_rate_curve, sigma_from_db)
from .noise import NoiseModel, chebyshev_tail, circular_gaussian, custom_noise
from .regions import (Disk, Polygon, Region, RegionMoments, Square, area, epsilon_neighborhood_integral,
                      moments, region_from_dict, uniform_power)

__version__ = "0.1.0"
