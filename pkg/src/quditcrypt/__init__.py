"""Classical simulator of qudit multi-image ciphers.

Space-filling-curve digit encodings, the generalized discrete baker map
with exact partition counting, sine-chaotified hyperchaotic key streams,
and complete scramble-plus-diffuse encrypt/decrypt pipelines.
"""

__version__ = "0.1.0"

from .sfc import (
    CurveSpec,
    QuditDigits,
    curve_eval,
    decode_point,
    encode_point,
    preimage_param,
    step_function_eval,
)
from .baker import (
    BakerPartition,
    baker_apply,
    baker_inverse,
    count_admissible,
    digit_shuffle,
    enumerate_admissible,
    is_admissible,
    sample_admissible,
    scramble_pair,
)
from .chaos import (
    ChaoticParams,
    KeyStream,
    chebyshev,
    fold_unit,
    generate_sequences,
    key_quarts_ququart,
    orbit_export,
    rank_permutation,
    secret_bits,
    seed_ququart,
    seed_quoctit,
    step,
    wang4d_params,
    yan7d_params,
)
from .multiimage import (
    AxisLayout,
    AxisSpec,
    MultiImageState,
    byte_from_quart_planes,
    pack,
    quart_planes_from_byte,
    qudit_count,
    unpack,
)
from .cipher import (
    DiffusionPlan,
    KeyFile,
    SchemePlan,
    ScrambleStage,
    a_gate,
    a_gate_inv,
    build_keystream,
    decrypt,
    decrypt_state,
    diffuse,
    encrypt,
    encrypt_state,
    scramble,
    undiffuse,
    unscramble,
)
from .presets import PALETTE8, PALETTE16, PRESET_NAMES, generate_key, preset
from .keyfile import load_key, parse_key_text, save_key, write_key_text
from .container import load_container, read_container_bytes, save_container, write_container_bytes
from .analysis import AnalysisReport, analyze_values, entropy_bits, npcr, uaci
