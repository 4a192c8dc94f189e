# Scenario Defaults (neural mass benchmark)
PARAM_BOX = [(2.0, 8.0), (22.0, 28.0)]  # Physical parameter box
P_TRUE = [5.0, 25.0]  # True synaptic gains
PLANT_X0 = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
OBSERVER_X0 = [0.01, 0.0, 1.0, 0.0, 1.0, 0.0]

# Supervisor Configuration
SAMPLING_INTERVAL = 10.0  # T_d in seconds
FORGETTING_RATE = 0.05  # lambda in 1/s
REINITIALIZE_ALL = False  # Reset old observers at update instants too

# DIRECT Configuration
EPSILON = 1e-5  # Improvement filter of the potentially-optimal test
D_STAR = 0.8  # Desired resolution in normalized units
K_STAR = None  # Explicit termination iteration, None uses D_STAR

# Integration Configuration
DT = 1e-3  # Fixed RK4 step in seconds
T_FINAL = 100.0  # Horizon in seconds
STATE_BOUND = 1e4  # K_x level of the boundedness flag
SETTLE_TIME = 2.0  # Matched-observer settle time in seconds

# Observer Gains (tuned against the matched-parameter contraction check)
GAIN_L = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
GAIN_K = [0.0, 0.0]

# Input Configuration
INPUT_KIND = "multisine"
INPUT_AMPLITUDE = 100.0  # Delta_u
INPUT_FREQUENCIES = [6.28, 23.2, 57.2, 108.7]  # rad/s
INPUT_HOLD_TIME = 0.05  # seconds
SEED = 7

# Output Configuration
OUTPUT_FOLDER = "data/runs/"
DECIMATION = 10  # Export every n-th integration step
CONVERGENCE_THRESHOLD = 0.72  # Parameter-error margin of the T* metric

# Static DIRECT test mode
STATIC_EPSILON = 1e-5

# Logging Configuration
LOG_LEVEL = "INFO"
LOG_FILE = "run.log"  # Written inside the run output directory
