"""Configuration constants for the mai package."""

# Chain complexes
MAX_SIMPLEX_DIM = 2

# Persistence
TAU = 0.3  # lifetime threshold for Pers_tau
TAU_MODE = "fixed"  # "fixed" or "elbow"
VR_MAX_SCALE = 2.0

# Task generation
EPISODE_STEPS = 64
MIN_EPISODE_STEPS = 8
JITTER = 0.01
SHAPES = ["circle", "figure8"]
SHAPE_CENTERS = {
    "circle": (0.0, 0.0),
    "figure8": (5.0, 0.0),
}
MICRO_SEGMENT = 4  # rows per micro-event segment in class-preserving permutations
OPEN_LOOP_FRACTION = 0.75  # fraction of the loop traversed when closure is broken
MODALITY_DIMS = {"A": 12, "B": 7}
LATENT_DIM = 4
MIXING_SEED = 7  # fixes the observation maps of each modality and agent
AGENT_MAPS = {"mentor": 11, "learner": 23}
ENCODER_LEAK = 0.0
LIPSCHITZ_BOUND = 1.0

# State graph
BIN_WIDTH = 4
KNN = 1

# Memory
RETRIEVAL_K = 3
LANDMARK_CAP = 64
SEEN_CAP = 256  # latent states a library keeps for refitting its anchor
ANCHOR_MAX_SCALE = 1.0
CLOSURE_TOL = 1e-6
DTW_BAND: int | None = None  # Sakoe-Chiba half width, None = unconstrained
MATCH_COST = 0.25  # max normalized alignment cost for a decode to count as a class match
PHASE_WINDOW = 6
SCAFFOLD_BOUND = 2.0
RESIDUAL_HISTORY = 512

# Engine
ETA_FAST = 0.2
ETA_SLOW = 0.2
LAMBDA_R = 1.0
LAMBDA_P = 0.1
GAMMA_TARGET = 0.9
SWITCH_MARGIN = 0.05  # hysteresis when switching the active cycle during decode
SCRATCH_RIDGE = 1e-6
TARGET_RESIDUAL = 0.005
TARGET_WINDOW = 3
ENTROPY_BINS = 16
ENTROPY_RANGE = (0.0, 0.2)
ENTROPY_WINDOW = 5
WINDOW_LENGTH = 16
WINDOW_STRIDE = 8
MIN_GAP_EPISODES = 5

# Evaluation
H3_PERMUTATIONS = 50
H3_EPSILON = 0.05
H3_VR_SCALE = 0.5
H5_RATIO = 0.5
A2_RATIO = 5.0
A4_FRACTION = 0.9
A4_SCRAMBLES = 20

# Runs
EPOCHS = 6
EPISODES_PER_EPOCH = 5
CONFIG_SCHEMA_VERSION = 1
HELD_OUT_EPISODES = 5
GAP_FRACTION = 0.1  # amortized excess loss allowed, relative to the oracle
HOMOLOGOUS_SCALE = 1.5
HOMOLOGOUS_SHIFT = (0.3, 0.0)
LEARNER_FRAME_SEED = 29  # private latent rotation of the learner agent
TASK_TYPES = ("T1", "T2", "T3")
