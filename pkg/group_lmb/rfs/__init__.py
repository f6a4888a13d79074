from .labels import AugmentedLabel, SENTINEL_CENTER, STATE_DIM, TrackLabel
from .mixture import (GaussianComponent, GaussianMixture, MixtureReduction,
                      concatenate, gm_reduce, reduce_with, symmetrize)
from .densities import (BernoulliTrack, GlmbHypothesis, LmbDensity, Projection,
                        cardinality_distribution, evaluate_bernoulli_setpdf,
                        inclusion, kronecker_delta, lmb_setpdf,
                        multi_bernoulli_setpdf, poisson_setpdf, project,
                        set_exponential, validate_distinct_labels)
from .serialization import (density_from_record, density_to_record,
                            dump_density, load_densities)
