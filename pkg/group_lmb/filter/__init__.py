from .assignment import (ABSENT, MISSED, AssociationProblem, RankedAssignment,
                         ranked_assignments)
from .predict import PredictedLmb, predict, predict_track
from .update import (DEFAULT_HYPOTHESES, LOG_WEIGHT_FLOOR, MAX_EXHAUSTIVE_MEASUREMENTS,
                     MAX_EXHAUSTIVE_TRACKS, UpdateSettings, association_problem,
                     enumerate_hypotheses, rank_hypotheses, update, update_exhaustive)
