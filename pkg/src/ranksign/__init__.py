"""RankSign: hash-and-sign signatures from augmented LRPC codes in the rank metric."""

from .errors import DecodingFailure, RankSignError, WireError
from .field_tower import FieldContext, get_field
from .params import PRESETS, CodeParams, parse_params
from .ranksign import PublicKey, SecretKey, Signature, keygen, sign, verify

__all__ = [
    "CodeParams", "DecodingFailure", "FieldContext", "PRESETS", "PublicKey", "RankSignError",
    "SecretKey", "Signature", "WireError", "get_field", "keygen", "parse_params", "sign", "verify",
]
__version__ = "0.1.0"
