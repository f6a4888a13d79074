from .motion import (MEMBER_COVARIANCES, MotionModel, cv_noise_gain, cv_transition,
                     predict_group_center, predict_in_group, predict_independent)
from .birth import (BENCHMARK_BIRTH_MEANS, BirthComponent, BirthModel,
                    birth_tracks)
from .sensor import (BENCHMARK_REGION, KalmanUpdate, SensorModel, corrected_density, kalman_update,
                     kalman_update_batch, measurement_loglikelihood, sample_clutter)
