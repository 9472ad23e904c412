from .brownian import (
    BrownianGrid,
    ExpStringSample,
    eps_from_xi,
    gamma_mask,
    grid_inverse_pitman,
    grid_passes,
    harmonic_phi,
    pair_L,
    phi_half,
    psi_p,
    reconstruct_process,
    sample_exp_strings,
    simulate_brownian_grid,
    xi_from_eps,
)
from .kernel import (
    branching_coefficients,
    closed_form_kernel,
    level_rows,
    plus_kernel_oracle,
    simulate_conditioned_A,
    simulate_plus_chain,
)
from .rng import RngStream, default_seed
from .steps import StepLaw, sample_mu_step, step_arrays, step_law, step_path, stratum_counts
from .walks import WalkBatch, WalkSample, simulate_walk_pair, simulate_walks
