"""Control-tutored Q-learning for the planar herding problem.

A seeded, deterministic simulator of herders collecting drifting targets
into a goal region, a tabular Q-learner whose policy switches to a
feedback-control tutor wherever learned experience is not yet positive,
pure-learning and pure-control baselines, and an experiment harness.
"""

from .geometry import Vec2, clamp_norm, from_polar, rotated, unit
from .environment import (CoincidentAgentsError, DriftState, EnvParams,
                          WorldState, clamp_herder_input, env_step,
                          herder_repulsion, in_goal, resample_drift,
                          step_interaction, target_velocity)
from .discretizer import (ActionSet, DiscreteState, StateGrid,
                          bearing_about_goal_ray, build_action_set,
                          encode_state, flatten_state, nearest_action)
from .learner import LearnParams, QTable, load_qtable, pi_q, save_qtable
from .tutor import (TutorParams, VelocityEstimator, lyapunov_rate,
                    lyapunov_value, pi_t, surrogate_velocity, tutor_control)
from .policy import (ActionSource, HerderDecision, PolicyMode, RewardParams,
                     assign_targets, baseline_select, ctql_select,
                     herder_command, reward)
from .harness import (EPSILON_FINAL, EVAL_SEED_OFFSET, EpisodeResult,
                      HarnessConfigError, RunConfig, compare,
                      containment_fraction, evaluate, fresh_tables,
                      run_episode, seed_map, spawn_world, train,
                      trial_epsilon)
from .config import ConfigError, config_from_dict, config_to_dict, parse_config
from .fileio import (CompareRow, EvalAggregate, TrajectoryRow, TrialMetrics,
                     read_aggregate, read_comparison, read_metrics,
                     read_trajectory, write_aggregate, write_comparison,
                     write_metrics, write_trajectory)

__version__ = "0.1.0"
