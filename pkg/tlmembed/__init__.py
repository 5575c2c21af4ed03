# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

"""This file provides quick access to the most used parts of the
tlmembed API. Please refer to documentation of individual modules for
details.
"""

__version_tuple__ = (1, 0, 0)
__version__ = '.'.join(map(str, __version_tuple__))

from tlmembed.model import LindbladSpec, TlmeSpec, tilted_generator
from tlmembed.mapping import Scheme, MappedSystem, build_diagonal, \
 build_offdiagonal, build_mapping, compute_alpha, recover_state
from tlmembed.dynamics import TimeGrid, evolve_rk4, jump_mc_ensemble, \
 theta_from_coherence, theta_from_growth
from tlmembed.trajstats import MicromaserSpec, build_micromaser, \
 build_sbias_coupling, theta_sweep
from tlmembed.qfilter import FilterSpec, simulate_measured_system, \
 run_unnormalized_filter, stratonovich_alpha
from tlmembed.exceptions import TlmeEmbedException
