"""Gas-to-fiat conversion under configurable network presets.

All arithmetic is ``decimal.Decimal`` so golden-number assertions are
exact; binary floats never enter the computation.  The built-in presets
are calibration points, not market data: mainnet reproduces the
published grant cost at 20 gwei and a $3000 token, and the layer-2
preset is one illustrative parameter choice that lands under the $0.50
bound.  Both can be overridden from a config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal

from .errors import NonPositiveGas

GWEI = Decimal("1e-9")
_CENTS4 = Decimal("0.0001")


@dataclass(frozen=True)
class NetworkParams:
    name: str
    gas_price_gwei: Decimal
    token_usd: Decimal
    overhead_usd: Decimal = Decimal("0")

    def __post_init__(self):
        if self.gas_price_gwei <= 0:
            raise ValueError("gas price must be positive")
        if self.token_usd < 0 or self.overhead_usd < 0:
            raise ValueError("fiat parameters must be nonnegative")

    @classmethod
    def from_doc(cls, doc: dict) -> "NetworkParams":
        return cls(
            name=doc["name"],
            gas_price_gwei=Decimal(doc["gas_price_gwei"]),
            token_usd=Decimal(doc["token_usd"]),
            overhead_usd=Decimal(doc.get("overhead_usd", "0")),
        )

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "gas_price_gwei": str(self.gas_price_gwei),
            "token_usd": str(self.token_usd),
            "overhead_usd": str(self.overhead_usd),
        }


@dataclass(frozen=True)
class FiatCost:
    """Exact decimal cost; quantization to 4 places happens only at display
    so linearity in gas holds without rounding error."""

    usd: Decimal
    gas_component: Decimal
    overhead: Decimal

    def display(self) -> str:
        return str(self.usd.quantize(_CENTS4))

    def __str__(self) -> str:
        return f"${self.display()}"


def estimate_cost(gas: int, params: NetworkParams) -> FiatCost:
    """usd = gas * gas_price * 1e-9 * token_usd + overhead, exactly."""
    if not isinstance(gas, int) or gas <= 0:
        raise NonPositiveGas(f"gas must be a positive integer, got {gas!r}")
    gas_component = Decimal(gas) * params.gas_price_gwei * GWEI * params.token_usd
    return FiatCost(usd=gas_component + params.overhead_usd,
                    gas_component=gas_component,
                    overhead=params.overhead_usd)


def builtin_presets() -> list[NetworkParams]:
    return [
        NetworkParams("mainnet", Decimal("20"), Decimal("3000"), Decimal("0")),
        NetworkParams("l2", Decimal("0.1"), Decimal("3000"), Decimal("0.02")),
    ]


def load_presets(path: str | None = None) -> dict[str, NetworkParams]:
    """Builtin presets, optionally overlaid with entries from a config file."""
    presets = {p.name: p for p in builtin_presets()}
    if path is not None:
        with open(path) as fh:
            for doc in json.load(fh):
                params = NetworkParams.from_doc(doc)
                presets[params.name] = params
    return presets
