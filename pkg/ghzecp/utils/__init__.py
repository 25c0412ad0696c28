from .randomness import make_rng, make_trial_rng
