"""Soft McEliece over QC-MDPC codes with Gaussian noise.

Thin wrapper over the C++ core. Bits are lists of 0/1 ints; byte streams are
``bytes``.
"""

from ._smce import (
    Ciphertext,
    ConvergenceError,
    Error,
    FormatError,
    InvalidParams,
    KeyPair,
    ParameterMismatch,
    PrivateKey,
    PublicKey,
    RetryExhausted,
    SizeMismatch,
    SystemParams,
    check_noise_above_threshold,
    de_converges,
    de_threshold,
    decrypt,
    decrypt_bytes,
    derive_public,
    dfr_trial_batch,
    encode,
    encrypt,
    encrypt_bytes,
    expected_errors,
    keygen,
    ordered_error_oracle,
    p_err_ordered,
    p_err_ordered_all,
    p_flip_success,
    p_flip_success_joint,
    parity_relation_holds,
    security_report,
    sigma_for_expected_errors,
    soft_attack_demo,
    wf_isd,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
