"""Modelled behaviour of environment APIs."""

import logging
from dataclasses import replace
from typing import Callable, Sequence

from ..appmodel.catalog import ApiSpec, EnvBehaviorKind
from ..config.config_manager import AnalysisConfig
from ..errors import AmlRuntimeError, DecryptMissError
from .values import (
    NO_TAINT,
    Taint,
    Value,
    ValueType,
    boolean,
    concrete_string,
    from_literal,
    propagate_taint,
    string_array,
)

logger = logging.getLogger(__name__)

# (value_type, origin, api_name, taint) -> fresh unknown value
FreshValueFactory = Callable[[ValueType, str, str, Taint], Value]

ARRAY_ORIGIN = "incomingInfo"
DECRYPT_MISS_ORIGIN = "incomingInfo"


def _symbolic_array(spec: ApiSpec, count: int, fresh: FreshValueFactory) -> Value:
    return string_array(fresh(ValueType.STRING, ARRAY_ORIGIN, spec.name, NO_TAINT) for _ in range(count))


def eval_env_call(
    spec: ApiSpec,
    args: Sequence[Value],
    fresh: FreshValueFactory,
    config: AnalysisConfig,
) -> Value:
    """Evaluate an environment API according to its catalog behaviour.

    Args:
        spec: Catalog entry of kind env
        args: Evaluated call arguments
        fresh: Factory for unknown values
        config: Analysis configuration (array length, strict decryption)

    Returns:
        Value: Result of the call

    Raises:
        DecryptMissError: decryptTable miss under strict decryption
        AmlRuntimeError: decryptTable called without an argument
    """
    behavior = spec.behavior
    kind = behavior.kind

    if kind is EnvBehaviorKind.FORCED_TRUE:
        return boolean(True)

    if kind is EnvBehaviorKind.FIXED_VALUE:
        return from_literal(behavior.value)

    if kind is EnvBehaviorKind.SYMBOLIC:
        value_type = ValueType(behavior.value_type)
        if value_type is ValueType.STRING_ARRAY:
            return _symbolic_array(spec, config.symbolic_array_len, fresh)
        return fresh(value_type, behavior.origin, spec.name, NO_TAINT)

    if kind is EnvBehaviorKind.SYMBOLIC_ARRAY:
        return _symbolic_array(spec, behavior.element_count or config.symbolic_array_len, fresh)

    # decryptTable
    if not args:
        raise AmlRuntimeError(f"{spec.name}() needs the encrypted string as argument")
    taint = propagate_taint("decrypt", args[:1])
    known, key = concrete_string(args[0])
    plain = behavior.lookup(key) if known and key is not None else None
    if plain is not None:
        return replace(from_literal(plain), taint=taint, decrypted=True)

    if config.strict_decrypt:
        raise DecryptMissError(f"{spec.name}: no table entry for {key if known else 'unknown input'!r}")
    logger.debug(f"{spec.name}: table miss, returning an unknown string")
    return replace(fresh(ValueType.STRING, DECRYPT_MISS_ORIGIN, spec.name, taint), decrypted=True)
